#include "acvar/serialize.hpp"

#include "acvar/errors.hpp"

namespace acvar {

nlohmann::json chain_to_json(const MarkovChain& chain) {
  nlohmann::json rows = nlohmann::json::array();
  for (std::size_t i = 0; i < chain.s; ++i) {
    auto row = chain.P.row(i);
    rows.push_back(std::vector<double>(row.begin(), row.end()));
  }
  return nlohmann::json{{"s", chain.s}, {"P", rows}, {"g", chain.g}};
}

MarkovChain chain_from_json(const nlohmann::json& j) {
  MarkovChain chain;
  try {
    chain.s = j.at("s").get<std::size_t>();
    const auto& rows = j.at("P");
    chain.P = Matrix(chain.s, chain.s);
    if (rows.size() != chain.s) {
      throw InvalidDimensionError("P row count does not match s");
    }
    for (std::size_t i = 0; i < chain.s; ++i) {
      const auto row = rows.at(i).get<std::vector<double>>();
      if (row.size() != chain.s) {
        throw InvalidDimensionError("P column count does not match s");
      }
      for (std::size_t k = 0; k < chain.s; ++k) {
        chain.P(i, k) = row[k];
      }
    }
    chain.g = j.at("g").get<std::vector<double>>();
  } catch (const nlohmann::json::exception& e) {
    throw InvalidInputError(std::string("malformed chain JSON: ") + e.what());
  }
  validate_chain(chain);
  return chain;
}

nlohmann::json oracle_to_json(const OracleSolution& solution) {
  nlohmann::json rows = nlohmann::json::array();
  for (std::size_t i = 0; i < solution.p_star.rows(); ++i) {
    auto row = solution.p_star.row(i);
    rows.push_back(std::vector<double>(row.begin(), row.end()));
  }
  return nlohmann::json{{"zeta_star", solution.zeta_star},
                        {"rho_star", solution.rho_star},
                        {"V_star", solution.V_star},
                        {"p_star", rows},
                        {"pi_star", solution.pi_star},
                        {"acvar", solution.acvar},
                        {"alpha", solution.alpha}};
}

}  // namespace acvar
