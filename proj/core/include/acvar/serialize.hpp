#pragma once

#include <nlohmann/json.hpp>

#include "acvar/markov.hpp"
#include "acvar/oracle.hpp"

namespace acvar {

/// {"s": int, "P": [[...]], "g": [...]}
nlohmann::json chain_to_json(const MarkovChain& chain);
MarkovChain chain_from_json(const nlohmann::json& j);

nlohmann::json oracle_to_json(const OracleSolution& solution);

}  // namespace acvar
