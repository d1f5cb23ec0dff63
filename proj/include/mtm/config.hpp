#ifndef MTM_CONFIG_HPP
#define MTM_CONFIG_HPP

#include <cstdint>
#include <map>
#include <stdexcept>
#include <string>

#include "mtm/trace.hpp"

namespace mtm::bench {

/// Flat-section key-value config text:
///   [run]
///   solver = base
///   problem = quad_well
class Config {
 public:
  static Config parse(const std::string& text);
  static Config parse_file(const std::string& path);

  bool has(const std::string& section, const std::string& key) const;
  std::string get(const std::string& section, const std::string& key,
                  const std::string& fallback = "") const;
  double get_double(const std::string& section, const std::string& key, double fallback) const;
  long long get_int(const std::string& section, const std::string& key,
                    long long fallback) const;

  std::map<std::string, std::map<std::string, std::string>> sections;
};

/// Config validation failure with a machine-readable code such as
/// CONFIG_UNKNOWN_SOLVER.
class ConfigError : public std::runtime_error {
 public:
  ConfigError(std::string code, const std::string& what)
      : std::runtime_error(what), code(std::move(code)) {}
  std::string code;
};

struct ExperimentConfig {
  std::string solver;
  std::string problem;
  std::string prox = "euclidean";
  int N = 100;
  double L0 = 0.0;        // 0: use the problem's certified L
  double epsilon = 0.0;   // plans and universal mode
  double beta = 0.05;
  std::string mode = "fixed_delta";  // inexact: fixed_delta | universal

  double delta = 0.0;
  std::string delta_mode = "constant";  // zero | constant | random
  double D = 0.0;
  std::string scheme = "sphere";  // sphere | coordinate
  double noise = 0.0;             // directional noise level
  double delta_eval = 0.0;        // zeroth-order evaluation noise

  std::uint64_t seed = 1;
  int seeds = 1;
  std::string out_dir = "out";
  std::string format = "csv";

  /// Validates ids and solver preconditions before any run starts.
  static ExperimentConfig from(const Config& cfg);
};

/// One deterministic run of the configured experiment under the given seed.
Trace run_experiment(const ExperimentConfig& cfg, std::uint64_t seed);

}  // namespace mtm::bench

#endif  // MTM_CONFIG_HPP
