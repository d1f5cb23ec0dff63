#include "mtm/config.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>

#include "mtm/base.hpp"
#include "mtm/directional.hpp"
#include "mtm/errors.hpp"
#include "mtm/inexact.hpp"
#include "mtm/minimax.hpp"
#include "mtm/problems.hpp"
#include "mtm/stochastic.hpp"

namespace mtm::bench {

namespace {

std::string trim(const std::string& s) {
  const auto a = s.find_first_not_of(" \t\r\n");
  if (a == std::string::npos) return "";
  const auto b = s.find_last_not_of(" \t\r\n");
  return s.substr(a, b - a + 1);
}

}  // namespace

Config Config::parse(const std::string& text) {
  Config cfg;
  std::istringstream in(text);
  std::string line, section = "run";
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    line = trim(line);
    if (line.empty() || line[0] == '#' || line[0] == ';') continue;
    if (line.front() == '[') {
      if (line.back() != ']')
        throw ConfigError("CONFIG_SYNTAX",
                          "line " + std::to_string(lineno) + ": unterminated section header");
      section = trim(line.substr(1, line.size() - 2));
      continue;
    }
    const auto eq = line.find('=');
    if (eq == std::string::npos)
      throw ConfigError("CONFIG_SYNTAX",
                        "line " + std::to_string(lineno) + ": expected key = value");
    cfg.sections[section][trim(line.substr(0, eq))] = trim(line.substr(eq + 1));
  }
  return cfg;
}

Config Config::parse_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("CONFIG_NOT_FOUND", "cannot open config file '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse(buf.str());
}

bool Config::has(const std::string& section, const std::string& key) const {
  const auto s = sections.find(section);
  return s != sections.end() && s->second.count(key) > 0;
}

std::string Config::get(const std::string& section, const std::string& key,
                        const std::string& fallback) const {
  const auto s = sections.find(section);
  if (s == sections.end()) return fallback;
  const auto k = s->second.find(key);
  return k == s->second.end() ? fallback : k->second;
}

double Config::get_double(const std::string& section, const std::string& key,
                          double fallback) const {
  if (!has(section, key)) return fallback;
  try {
    return parse_double(get(section, key));
  } catch (const std::exception&) {
    throw ConfigError("CONFIG_BAD_VALUE", "key " + section + "." + key + " is not numeric");
  }
}

long long Config::get_int(const std::string& section, const std::string& key,
                          long long fallback) const {
  if (!has(section, key)) return fallback;
  try {
    return std::stoll(get(section, key));
  } catch (const std::exception&) {
    throw ConfigError("CONFIG_BAD_VALUE", "key " + section + "." + key + " is not an integer");
  }
}

namespace {

const std::vector<std::string> kSolvers = {"base",       "minimax",     "inexact",
                                           "stochastic", "directional", "zeroth_order"};

PerturbationMode parse_mode(const std::string& s) {
  if (s == "zero") return PerturbationMode::Zero;
  if (s == "constant") return PerturbationMode::Constant;
  if (s == "random") return PerturbationMode::SeededRandom;
  throw ConfigError("CONFIG_BAD_VALUE", "unknown delta_mode '" + s + "'");
}

ProxSetup make_setup(const std::string& prox, double L) {
  if (prox == "euclidean") return ProxSetup::euclidean();
  if (prox == "entropy") return ProxSetup::entropy_simplex();
  if (prox == "scaled") return ProxSetup::scaled_euclidean(L);
  throw ConfigError("CONFIG_UNKNOWN_PROX", "unknown prox '" + prox + "'");
}

}  // namespace

ExperimentConfig ExperimentConfig::from(const Config& cfg) {
  ExperimentConfig e;
  e.solver = cfg.get("run", "solver");
  if (std::find(kSolvers.begin(), kSolvers.end(), e.solver) == kSolvers.end())
    throw ConfigError("CONFIG_UNKNOWN_SOLVER", "unknown solver '" + e.solver + "'");

  e.problem = cfg.get("run", "problem");
  const bool smooth = problems::is_smooth(e.problem);
  const bool minimax = problems::is_minimax(e.problem);
  if (!smooth && !minimax)
    throw ConfigError("CONFIG_UNKNOWN_PROBLEM", "unknown problem '" + e.problem + "'");
  if (e.solver == "minimax" && !minimax)
    throw ConfigError("CONFIG_BAD_COMBINATION",
                      "solver 'minimax' needs a minimax problem, got '" + e.problem + "'");
  if (e.solver != "minimax" && !smooth)
    throw ConfigError("CONFIG_BAD_COMBINATION",
                      "solver '" + e.solver + "' needs a smooth problem, got '" + e.problem + "'");

  e.prox = cfg.get("run", "prox", "euclidean");
  if (e.prox != "euclidean" && e.prox != "entropy" && e.prox != "scaled")
    throw ConfigError("CONFIG_UNKNOWN_PROX", "unknown prox '" + e.prox + "'");

  e.N = static_cast<int>(cfg.get_int("run", "N", 100));
  if (e.N < 0) throw ConfigError("CONFIG_BAD_VALUE", "N must be >= 0");
  e.L0 = cfg.get_double("run", "L0", 0.0);
  e.epsilon = cfg.get_double("run", "epsilon", 0.0);
  e.beta = cfg.get_double("run", "beta", 0.05);
  e.mode = cfg.get("run", "mode", "fixed_delta");
  if (e.mode != "fixed_delta" && e.mode != "universal")
    throw ConfigError("CONFIG_BAD_VALUE", "unknown inexact mode '" + e.mode + "'");

  e.delta = cfg.get_double("oracle", "delta", 0.0);
  e.delta_mode = cfg.get("oracle", "delta_mode", "constant");
  parse_mode(e.delta_mode);
  e.D = cfg.get_double("oracle", "D", 0.0);
  e.scheme = cfg.get("oracle", "scheme", "sphere");
  if (e.scheme != "sphere" && e.scheme != "coordinate")
    throw ConfigError("CONFIG_BAD_VALUE", "unknown scheme '" + e.scheme + "'");
  e.noise = cfg.get_double("oracle", "noise", 0.0);
  e.delta_eval = cfg.get_double("oracle", "delta_eval", 0.0);
  e.seed = static_cast<std::uint64_t>(cfg.get_int("oracle", "seed", 1));

  e.seeds = static_cast<int>(cfg.get_int("run", "seeds", 1));
  if (e.seeds < 1) throw ConfigError("CONFIG_BAD_VALUE", "seeds must be >= 1");
  e.out_dir = cfg.get("output", "dir", "out");
  e.format = cfg.get("output", "format", "csv");
  if (e.format != "csv" && e.format != "json")
    throw ConfigError("CONFIG_BAD_VALUE", "unknown output format '" + e.format + "'");

  // Solver-specific preconditions, checked before any run starts.
  if (e.solver == "stochastic" || e.solver == "directional" || e.solver == "zeroth_order") {
    if (!(e.epsilon > 0.0))
      throw ConfigError("CONFIG_BAD_VALUE", "solver '" + e.solver + "' needs epsilon > 0");
  }
  if (e.solver == "stochastic") {
    const Problem p = problems::get_smooth(e.problem);
    if (!p.domain.bounded())
      throw ConfigError("CONFIG_BAD_COMBINATION",
                        "stochastic solver needs a bounded feasible set");
    if (!(e.beta > 0.0 && e.beta < 1.0))
      throw ConfigError("CONFIG_BAD_VALUE", "beta must be in (0, 1)");
  }
  if (e.solver == "directional" || e.solver == "zeroth_order") {
    const Problem p = problems::get_smooth(e.problem);
    if (p.domain.kind() != FeasibleSet::Kind::WholeSpace)
      throw ConfigError("CONFIG_BAD_COMBINATION",
                        "directional solvers cover unconstrained problems only");
  }
  return e;
}

namespace {

// Echo the scalar experiment parameters into the trace header without
// clobbering what the solver already recorded.
void echo_config(Trace& t, const ExperimentConfig& cfg, std::uint64_t seed) {
  auto put = [&](const std::string& key, const std::string& value) {
    t.config.emplace(key, value);
  };
  put("solver", cfg.solver);
  put("problem", cfg.problem);
  put("prox", cfg.prox);
  put("N", std::to_string(cfg.N));
  put("seed", std::to_string(seed));
  if (cfg.solver == "inexact" || cfg.solver == "stochastic") {
    put("delta", format_double(cfg.delta));
    put("delta_mode", cfg.delta_mode);
  }
  if (cfg.solver == "stochastic") put("D", format_double(cfg.D));
  if (cfg.solver == "stochastic" || cfg.solver == "directional" ||
      cfg.solver == "zeroth_order")
    put("epsilon", format_double(cfg.epsilon));
  if (cfg.solver == "stochastic") put("beta", format_double(cfg.beta));
  if (cfg.solver == "directional" || cfg.solver == "zeroth_order")
    put("scheme", cfg.scheme);
  if (cfg.solver == "directional") put("noise", format_double(cfg.noise));
  if (cfg.solver == "zeroth_order") put("delta_eval", format_double(cfg.delta_eval));
}

}  // namespace

Trace run_experiment(const ExperimentConfig& cfg, std::uint64_t seed) {
  if (cfg.solver == "minimax") {
    const MinimaxProblem p = problems::get_minimax(cfg.problem);
    const double L0 = cfg.L0 > 0.0 ? cfg.L0 : p.lipschitz;
    const ProxSetup setup = make_setup(cfg.prox, p.lipschitz);
    Trace t = run_adaptive_minimax(p, setup, p.domain, p.x0, cfg.N, L0);
    t.seed = seed;
    echo_config(t, cfg, seed);
    return t;
  }

  const Problem p = problems::get_smooth(cfg.problem);
  const double L = p.lipschitz;
  const ProxSetup setup = make_setup(cfg.prox, L);

  if (cfg.solver == "base") {
    Trace t = run_base(p, setup, p.domain, p.x0, cfg.N, L);
    t.seed = seed;
    echo_config(t, cfg, seed);
    return t;
  }
  if (cfg.solver == "inexact") {
    DeltaLOracle oracle(p, cfg.delta, parse_mode(cfg.delta_mode), seed);
    InexactOptions opt;
    opt.mode = cfg.mode == "universal" ? InexactMode::Universal : InexactMode::FixedDelta;
    opt.epsilon = cfg.epsilon;
    const double L0 = cfg.L0 > 0.0 ? cfg.L0 : L;
    Trace t = run_inexact(oracle, Composite::zero(), setup, p.domain, p.x0, cfg.N, L0, opt);
    t.seed = seed;
    echo_config(t, cfg, seed);
    return t;
  }
  if (cfg.solver == "stochastic") {
    StochasticOracle oracle(DeltaLOracle(p, cfg.delta, parse_mode(cfg.delta_mode), seed),
                            cfg.D, seed);
    const StochasticPlan pl = plan(cfg.epsilon, cfg.beta, L, p.domain.diameter(), cfg.D);
    Trace t = run_stochastic(oracle, Composite::zero(), setup, p.domain, p.x0, pl, L);
    echo_config(t, cfg, seed);
    return t;
  }

  const DirectionKind kind =
      cfg.scheme == "sphere" ? DirectionKind::UniformSphere : DirectionKind::UniformCoordinate;
  DirectionScheme scheme(kind, p.dim, seed);
  if (cfg.solver == "directional") {
    const auto [xs, fs] = problems::reference_optimum(p);
    const double R0 = std::sqrt(L) * (p.x0 - xs).norm();
    const double P0 = P0Budget::from(R0, p.value(p.x0) - fs, p.dim).P0;
    const DirectionalPlan pl = plan_directional(P0, cfg.epsilon, p.dim, L);
    DirectionalOptions opt;
    opt.noise_seed = seed;
    Trace t = run_directional(p, p.x0, pl, L, scheme, cfg.noise, opt);
    echo_config(t, cfg, seed);
    return t;
  }
  // zeroth_order
  ZerothOrderOptions opt;
  opt.noise_seed = seed;
  Trace t = run_zeroth_order(p, p.x0, cfg.epsilon, cfg.delta_eval, L, scheme, opt);
  echo_config(t, cfg, seed);
  return t;
}

}  // namespace mtm::bench
