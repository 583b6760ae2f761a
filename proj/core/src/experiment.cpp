#include "acvar/experiment.hpp"

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <string>

#include <nlohmann/json.hpp>

#include "acvar/density.hpp"
#include "acvar/errors.hpp"
#include "acvar/serialize.hpp"

namespace acvar {

namespace {

std::string fmt(double x) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.17g", x);
  return buf;
}

RewardProfile parse_profile(const std::string& name) {
  if (name == "linear") return RewardProfile::linear;
  if (name == "uniform") return RewardProfile::uniform;
  if (name == "file") return RewardProfile::file;
  throw InvalidParameterError("reward_profile must be linear, uniform or file, got '" +
                              name + "'");
}

Tail parse_tail(const std::string& name) {
  if (name == "upper") return Tail::upper;
  if (name == "lower") return Tail::lower;
  throw InvalidParameterError("tail must be upper or lower, got '" + name + "'");
}

void apply_key_value(ExperimentConfig& config, const std::string& key,
                     const std::string& value) {
  try {
    if (key == "states") {
      config.states = std::stoul(value);
    } else if (key == "seed") {
      config.seed = std::stoull(value);
    } else if (key == "c") {
      config.c = std::stod(value);
    } else if (key == "tail") {
      config.tail = parse_tail(value);
    } else if (key == "reward_profile") {
      config.reward_profile = parse_profile(value);
    } else if (key == "reward_file") {
      config.reward_file = value;
    } else if (key == "max_reward") {
      config.max_reward = std::stod(value);
    } else if (key == "bandwidth") {
      config.bandwidth = std::stod(value);
    } else if (key == "warm_steps") {
      config.warm_steps = std::stoul(value);
    } else if (key == "cap") {
      config.cap = std::stoul(value);
    } else if (key == "k_scale") {
      config.k_scale = std::stod(value);
    } else if (key == "term_window") {
      config.term_window = std::stoul(value);
    } else if (key == "term_tol") {
      config.term_tol = std::stod(value);
    } else if (key == "output_dir") {
      config.output_dir = value;
    } else if (key == "run_mc_oracle") {
      config.run_mc_oracle = (value == "true" || value == "1");
    } else if (key == "mc_n") {
      config.mc_n = std::stoul(value);
    } else if (key == "mc_paths") {
      config.mc_paths = std::stoul(value);
    } else {
      throw InvalidParameterError("unknown config key '" + key + "'");
    }
  } catch (const std::invalid_argument&) {
    throw InvalidParameterError("could not parse value '" + value + "' for field '" +
                                key + "'");
  } catch (const std::out_of_range&) {
    throw InvalidParameterError("value '" + value + "' out of range for field '" +
                                key + "'");
  }
}

ExperimentConfig config_from_json(const nlohmann::json& j) {
  ExperimentConfig config;
  for (const auto& [key, value] : j.items()) {
    if (value.is_string()) {
      apply_key_value(config, key, value.get<std::string>());
    } else if (value.is_boolean()) {
      apply_key_value(config, key, value.get<bool>() ? "true" : "false");
    } else {
      apply_key_value(config, key, value.dump());
    }
  }
  return config;
}

std::vector<double> read_reward_file(const std::filesystem::path& path,
                                     std::size_t s) {
  std::ifstream in(path);
  if (!in) {
    throw InvalidInputError("cannot open reward file " + path.string());
  }
  std::vector<double> g;
  double x;
  while (in >> x) {
    g.push_back(x);
  }
  if (g.size() != s) {
    throw InvalidDimensionError("reward file holds " + std::to_string(g.size()) +
                                " values, expected " + std::to_string(s));
  }
  return g;
}

}  // namespace

void validate_config(const ExperimentConfig& config) {
  if (config.states < 2) {
    throw InvalidParameterError("states: required, must be >= 2");
  }
  if (!(config.c > 0.0 && config.c < 1.0)) {
    throw InvalidParameterError("c: must lie in (0,1)");
  }
  if (!(config.bandwidth > 0.0)) {
    throw InvalidParameterError("bandwidth: must be positive");
  }
  if (config.warm_steps < config.states) {
    throw InvalidParameterError("warm_steps: must be at least the state count");
  }
  if (config.cap < 1) {
    throw InvalidParameterError("cap: must be >= 1");
  }
  if (!(config.k_scale > 0.0 && config.k_scale <= 2.0)) {
    throw InvalidParameterError("k_scale: must lie in (0,2]");
  }
  if (config.term_window < 2) {
    throw InvalidParameterError("term_window: must be >= 2");
  }
  if (!(config.term_tol > 0.0)) {
    throw InvalidParameterError("term_tol: must be positive");
  }
  if (!(config.max_reward > 0.0) && config.reward_profile != RewardProfile::file) {
    throw InvalidParameterError("max_reward: must be positive");
  }
  if (config.reward_profile == RewardProfile::file && config.reward_file.empty()) {
    throw InvalidParameterError("reward_file: required when reward_profile=file");
  }
  if (config.run_mc_oracle && config.mc_n < 2) {
    throw InvalidParameterError("mc_n: must be >= 2");
  }
  if (config.run_mc_oracle && config.mc_paths < 1) {
    throw InvalidParameterError("mc_paths: must be >= 1");
  }
}

ExperimentConfig load_config_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) {
    throw InvalidInputError("cannot open config file " + path.string());
  }
  std::stringstream buffer;
  buffer << in.rdbuf();
  const std::string text = buffer.str();
  const auto first = text.find_first_not_of(" \t\r\n");
  if (first != std::string::npos && text[first] == '{') {
    nlohmann::json j;
    try {
      j = nlohmann::json::parse(text);
    } catch (const nlohmann::json::exception& e) {
      throw InvalidInputError(std::string("config JSON parse error: ") + e.what());
    }
    return config_from_json(j);
  }
  // flat key=value, one per line, '#' comments
  ExperimentConfig config;
  std::istringstream lines(text);
  std::string line;
  while (std::getline(lines, line)) {
    if (!line.empty() && line.back() == '\r') {
      line.pop_back();
    }
    const auto start = line.find_first_not_of(" \t");
    if (start == std::string::npos || line[start] == '#') {
      continue;
    }
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      throw InvalidInputError("config line without '=': " + line);
    }
    auto trim = [](std::string s) {
      const auto a = s.find_first_not_of(" \t");
      const auto b = s.find_last_not_of(" \t");
      return a == std::string::npos ? std::string() : s.substr(a, b - a + 1);
    };
    apply_key_value(config, trim(line.substr(0, eq)), trim(line.substr(eq + 1)));
  }
  return config;
}

MarkovChain build_chain(const ExperimentConfig& config) {
  MarkovChain chain =
      generate_random_chain(config.states, sub_seed(config.seed, kSeedPurposeMatrix));
  switch (config.reward_profile) {
    case RewardProfile::linear:
      chain.g = linear_reward_profile(config.states, config.max_reward);
      break;
    case RewardProfile::uniform:
      chain.g = uniform_reward_profile(config.states, config.max_reward,
                                       sub_seed(config.seed, kSeedPurposeRewards));
      break;
    case RewardProfile::file:
      chain.g = read_reward_file(config.reward_file, config.states);
      break;
  }
  validate_chain(chain);
  return chain;
}

void emit_plot_data(const RunTrace& trace, const OracleSolution& solution,
                    const MarkovChain& chain,
                    const std::filesystem::path& output_dir) {
  (void)solution;
  std::filesystem::create_directories(output_dir);

  {
    std::ofstream out(output_dir / "trace.csv");
    if (!out) {
      throw InvalidInputError("cannot write " + (output_dir / "trace.csv").string());
    }
    out << "iter,zeta,running_avg_reward_tilted,threshold\n";
    for (std::size_t t = 0; t < trace.zeta_series.size(); ++t) {
      out << t + 1 << ',' << fmt(trace.zeta_series[t]) << ','
          << fmt(trace.avg_reward_series[t]) << ',' << fmt(trace.threshold) << '\n';
    }
  }

  {
    std::vector<std::size_t> order(chain.s);
    for (std::size_t i = 0; i < chain.s; ++i) {
      order[i] = i;
    }
    std::stable_sort(order.begin(), order.end(), [&chain](std::size_t a, std::size_t b) {
      return chain.g[a] < chain.g[b];
    });
    std::ofstream out(output_dir / "freq.csv");
    if (!out) {
      throw InvalidInputError("cannot write " + (output_dir / "freq.csv").string());
    }
    out << "state,reward,count_orig,count_tilted\n";
    for (std::size_t i : order) {
      out << i << ',' << fmt(chain.g[i]) << ',' << trace.freq_orig[i] << ','
          << trace.freq_tilted[i] << '\n';
    }
  }
}

ExperimentResult run_experiment(const ExperimentConfig& config) {
  validate_config(config);
  const auto dir = config.output_dir;
  const std::filesystem::path outputs[] = {dir / "trace.csv", dir / "freq.csv",
                                           dir / "summary.json", dir / "chain.json"};
  try {
    ExperimentResult result;
    result.chain = build_chain(config);

    RunOptions options;
    options.warm_steps = config.warm_steps;
    options.cap = config.cap;
    options.term_window = config.term_window;
    options.term_tol = config.term_tol;
    options.bandwidth = config.bandwidth;
    options.tail = config.tail;
    std::mt19937_64 rng(sub_seed(config.seed, kSeedPurposeTrajectory));
    result.trace = run(result.chain, config.c, make_schedule(config.k_scale),
                       options, rng);

    result.oracle = acvar_oracle(result.chain, result.trace.threshold);

    double tv_sum = 0.0;
    for (std::size_t i = 0; i < result.chain.s; ++i) {
      tv_sum += total_variation(result.trace.final_state.p_tilt.row(i),
                                result.oracle.p_star.row(i));
    }
    result.mean_row_tv = tv_sum / static_cast<double>(result.chain.s);

    std::filesystem::create_directories(dir);
    emit_plot_data(result.trace, result.oracle, result.chain, dir);

    nlohmann::json summary;
    summary["states"] = config.states;
    summary["seed"] = config.seed;
    summary["c"] = config.c;
    summary["tail"] = config.tail == Tail::upper ? "upper" : "lower";
    summary["kde"] = {{"c", config.c},
                      {"threshold", result.trace.threshold},
                      {"warm_steps", config.warm_steps},
                      {"bandwidth", config.bandwidth}};
    summary["oracle"] = oracle_to_json(result.oracle);
    const RunTrace& trace = result.trace;
    summary["sa"] = {
        {"zeta_final", trace.final_state.zeta},
        {"iterations", trace.zeta_series.size()},
        {"terminated_at", trace.terminated_at ? nlohmann::json(*trace.terminated_at)
                                              : nlohmann::json(nullptr)},
        {"final_avg_reward_tilted",
         trace.avg_reward_series.empty() ? 0.0 : trace.avg_reward_series.back()},
        {"mean_row_tv_vs_oracle", result.mean_row_tv},
    };

    if (config.run_mc_oracle) {
      std::mt19937_64 mc_rng(sub_seed(config.seed, kSeedPurposeMcOracle));
      const McConditioningResult mc = mc_conditioning_oracle(
          result.chain, result.trace.threshold, config.mc_n, config.mc_paths, mc_rng);
      double max_tv = 0.0;
      std::size_t defined = 0;
      for (std::size_t i = 0; i < result.chain.s; ++i) {
        if (mc.row_defined[i]) {
          ++defined;
          max_tv = std::max(total_variation(mc.kernel.row(i),
                                            result.oracle.p_star.row(i)),
                            max_tv);
        }
      }
      summary["mc_oracle"] = {{"n", config.mc_n},
                              {"paths", config.mc_paths},
                              {"acceptance_rate", mc.acceptance_rate},
                              {"defined_rows", defined},
                              {"max_row_tv_vs_p_star", max_tv}};
    }

    std::ofstream(dir / "summary.json") << summary.dump(2) << '\n';
    std::ofstream(dir / "chain.json") << chain_to_json(result.chain).dump(2) << '\n';
    return result;
  } catch (...) {
    std::error_code ec;
    for (const auto& path : outputs) {
      std::filesystem::remove(path, ec);
    }
    throw;
  }
}

}  // namespace acvar
