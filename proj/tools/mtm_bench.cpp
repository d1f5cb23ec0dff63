// Benchmark harness: configure a (solver, problem, oracle, prox) combination,
// run it or a seed batch, emit trace files, and verify the theoretical bounds.
//
// Exit codes: 0 pass, 1 bound failure, 2 config error, 3 runtime error.

#include <atomic>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <mutex>
#include <sstream>
#include <thread>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "mtm/config.hpp"
#include "mtm/errors.hpp"
#include "mtm/problems.hpp"
#include "mtm/verify.hpp"

namespace fs = std::filesystem;
using mtm::Trace;
using mtm::bench::BoundKind;
using mtm::bench::BoundReport;
using mtm::bench::Config;
using mtm::bench::ConfigError;
using mtm::bench::ExperimentConfig;

namespace {

int fail_config(const std::string& code, const std::string& message) {
  nlohmann::json err;
  err["error"] = code;
  err["message"] = message;
  std::cout << err.dump() << "\n";
  return 2;
}

int fail_runtime(const std::string& message) {
  nlohmann::json err;
  err["error"] = "RUNTIME";
  err["message"] = message;
  std::cout << err.dump() << "\n";
  return 3;
}

std::string trace_filename(const ExperimentConfig& cfg, std::uint64_t seed) {
  std::ostringstream os;
  os << cfg.solver << "_" << cfg.problem << "_seed" << seed << ".trace";
  return os.str();
}

struct RunResult {
  std::uint64_t seed;
  Trace trace;
  std::string path;
};

/// Seed batch over a bounded worker pool; each worker owns its run and file.
std::vector<RunResult> run_batch(const ExperimentConfig& cfg, const fs::path& out_dir) {
  fs::create_directories(out_dir);
  std::vector<std::uint64_t> seeds(cfg.seeds);
  for (int i = 0; i < cfg.seeds; ++i) seeds[i] = cfg.seed + static_cast<std::uint64_t>(i);

  std::vector<RunResult> results(seeds.size());
  std::atomic<std::size_t> next{0};
  std::mutex error_mutex;
  std::string first_error;

  auto worker = [&]() {
    for (;;) {
      const std::size_t i = next.fetch_add(1);
      if (i >= seeds.size()) return;
      try {
        Trace t = mtm::bench::run_experiment(cfg, seeds[i]);
        const fs::path p = out_dir / trace_filename(cfg, seeds[i]);
        t.save(p.string());
        results[i] = {seeds[i], std::move(t), p.string()};
      } catch (const std::exception& e) {
        std::lock_guard<std::mutex> lock(error_mutex);
        if (first_error.empty()) first_error = e.what();
      }
    }
  };

  const unsigned hw = std::max(1u, std::thread::hardware_concurrency());
  const std::size_t n_workers = std::min<std::size_t>(seeds.size(), hw);
  std::vector<std::thread> pool;
  for (std::size_t w = 0; w < n_workers; ++w) pool.emplace_back(worker);
  for (auto& th : pool) th.join();

  if (!first_error.empty()) throw std::runtime_error(first_error);
  return results;
}

void write_summary(const ExperimentConfig& cfg, const std::vector<RunResult>& results,
                   const fs::path& out_dir) {
  if (cfg.format == "json") {
    nlohmann::json arr = nlohmann::json::array();
    for (const auto& r : results) {
      nlohmann::json row;
      row["seed"] = r.seed;
      row["status"] = mtm::to_string(r.trace.status);
      row["iterations"] = r.trace.records.back().k;
      row["f_final"] = r.trace.records.back().f_x;
      if (r.trace.f_star) row["gap_final"] = r.trace.final_gap();
      row["trace"] = r.path;
      arr.push_back(row);
    }
    std::ofstream out(out_dir / "summary.json");
    out << arr.dump(2) << "\n";
    return;
  }
  std::ofstream out(out_dir / "summary.csv");
  out << "seed,status,iterations,f_final,gap_final,trace\n";
  for (const auto& r : results) {
    out << r.seed << ',' << mtm::to_string(r.trace.status) << ','
        << r.trace.records.back().k << ',' << mtm::format_double(r.trace.records.back().f_x)
        << ',' << (r.trace.f_star ? mtm::format_double(r.trace.final_gap()) : "") << ','
        << r.path << "\n";
  }
}

int cmd_run(const std::string& config_path, std::optional<std::uint64_t> seed,
            std::optional<int> seeds, std::optional<std::string> out,
            std::optional<std::string> format) {
  ExperimentConfig cfg = ExperimentConfig::from(Config::parse_file(config_path));
  if (seed) cfg.seed = *seed;
  if (seeds) cfg.seeds = *seeds;
  if (out) cfg.out_dir = *out;
  if (format) cfg.format = *format;

  const auto results = run_batch(cfg, cfg.out_dir);
  write_summary(cfg, results, cfg.out_dir);
  std::cout << results.size() << " run(s) written to " << cfg.out_dir << "\n";
  return 0;
}

void print_report(const BoundReport& report) {
  for (const auto& row : report.rows) {
    if (!row.verifiable) {
      std::cout << "UNVERIFIABLE " << row.checkpoint << ": " << row.note << "\n";
      continue;
    }
    std::cout << (row.pass ? "PASS " : "FAIL ") << row.checkpoint
              << " observed=" << mtm::format_double(row.observed)
              << " envelope=" << mtm::format_double(row.envelope);
    if (row.margin > 0.0) std::cout << " margin=" << mtm::format_double(row.margin);
    if (!row.note.empty()) std::cout << "  (" << row.note << ")";
    std::cout << "\n";
  }
}

int cmd_verify(const std::vector<std::string>& files, const std::string& bound,
               double tolerance, bool quiet) {
  std::vector<Trace> traces;
  traces.reserve(files.size());
  for (const auto& f : files) traces.push_back(Trace::load(f));

  BoundKind kind;
  if (bound == "auto") {
    kind = mtm::bench::bound_for_solver(traces.front().solver_id);
  } else if (bound == "base") {
    kind = BoundKind::Base;
  } else if (bound == "adaptive") {
    kind = BoundKind::Adaptive;
  } else if (bound == "inexact") {
    kind = BoundKind::Inexact;
  } else if (bound == "stochastic") {
    kind = BoundKind::Stochastic;
  } else if (bound == "directional-mean") {
    kind = BoundKind::DirectionalMean;
  } else {
    throw ConfigError("CONFIG_BAD_VALUE", "unknown bound '" + bound + "'");
  }

  const BoundReport report = mtm::bench::verify_traces(traces, kind, tolerance);
  if (!quiet) print_report(report);
  if (!report.all_verifiable()) return 2;
  return report.all_pass() ? 0 : 1;
}

int cmd_sweep(const std::string& config_path, std::optional<std::string> out) {
  Config raw = Config::parse_file(config_path);
  if (!raw.has("sweep", "param") || !raw.has("sweep", "values"))
    throw ConfigError("CONFIG_BAD_VALUE", "sweep needs [sweep] param and values");
  const std::string param = raw.get("sweep", "param");
  const auto dot = param.find('.');
  if (dot == std::string::npos)
    throw ConfigError("CONFIG_BAD_VALUE", "sweep param must be section.key");
  const std::string section = param.substr(0, dot), key = param.substr(dot + 1);

  std::vector<std::string> values;
  std::istringstream vs(raw.get("sweep", "values"));
  std::string item;
  while (std::getline(vs, item, ',')) {
    const auto a = item.find_first_not_of(" \t");
    const auto b = item.find_last_not_of(" \t");
    if (a != std::string::npos) values.push_back(item.substr(a, b - a + 1));
  }
  if (values.empty()) throw ConfigError("CONFIG_BAD_VALUE", "sweep values are empty");

  const std::string base_out = out ? *out : raw.get("output", "dir", "out");
  std::ofstream summary;
  fs::create_directories(base_out);
  summary.open(fs::path(base_out) / "sweep_summary.csv");
  summary << param << ",seed,status,f_final,gap_final\n";

  for (const auto& v : values) {
    Config cfg_v = raw;
    cfg_v.sections[section][key] = v;
    ExperimentConfig cfg = ExperimentConfig::from(cfg_v);
    const fs::path dir = fs::path(base_out) / (key + "=" + v);
    const auto results = run_batch(cfg, dir);
    write_summary(cfg, results, dir);
    for (const auto& r : results) {
      summary << v << ',' << r.seed << ',' << mtm::to_string(r.trace.status) << ','
              << mtm::format_double(r.trace.records.back().f_x) << ','
              << (r.trace.f_star ? mtm::format_double(r.trace.final_gap()) : "") << "\n";
    }
  }
  std::cout << "sweep over " << param << " (" << values.size() << " values) written to "
            << base_out << "\n";
  return 0;
}

int cmd_list() {
  std::cout << "solvers: base minimax inexact stochastic directional zeroth_order\n";
  std::cout << "problems (smooth):";
  for (const auto& id : mtm::problems::smooth_ids()) std::cout << ' ' << id;
  std::cout << "\nproblems (minimax):";
  for (const auto& id : mtm::problems::minimax_ids()) std::cout << ' ' << id;
  std::cout << "\nprox: euclidean entropy scaled\n";
  std::cout << "bounds: base adaptive inexact stochastic directional-mean\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Mirror triangles method benchmark harness"};
  app.require_subcommand(1);

  std::string config_path;
  std::optional<std::uint64_t> seed;
  std::optional<int> seeds;
  std::optional<std::string> out, format;

  auto* run = app.add_subcommand("run", "run an experiment and write trace files");
  run->add_option("--config", config_path, "config file")->required();
  run->add_option("--seed", seed, "base seed override");
  run->add_option("--seeds", seeds, "number of seeded runs");
  run->add_option("--out", out, "output directory");
  run->add_option("--format", format, "summary format (csv|json)")
      ->check(CLI::IsMember({"csv", "json"}));

  std::vector<std::string> files;
  std::string bound = "auto";
  double tolerance = 1e-9;
  bool quiet = false;
  auto* verify = app.add_subcommand("verify", "check theoretical bounds on trace files");
  verify->add_option("files", files, "trace files")->required()->expected(-1);
  verify->add_option("--bound", bound,
                     "base|adaptive|inexact|stochastic|directional-mean|auto");
  verify->add_option("--tolerance", tolerance, "absolute tolerance on the envelope");
  verify->add_flag("--quiet", quiet, "suppress per-row output");

  auto* sweep = app.add_subcommand("sweep", "run the experiment over a parameter sweep");
  sweep->add_option("--config", config_path, "config file with a [sweep] section")->required();
  sweep->add_option("--out", out, "output directory");

  app.add_subcommand("list", "list solvers, problems, prox kinds and bounds");

  CLI11_PARSE(app, argc, argv);

  try {
    if (run->parsed()) return cmd_run(config_path, seed, seeds, out, format);
    if (verify->parsed()) return cmd_verify(files, bound, tolerance, quiet);
    if (sweep->parsed()) return cmd_sweep(config_path, out);
    return cmd_list();
  } catch (const ConfigError& e) {
    return fail_config(e.code, e.what());
  } catch (const mtm::CapabilityError& e) {
    return fail_config("CONFIG_UNSUPPORTED", e.what());
  } catch (const std::invalid_argument& e) {
    return fail_config("CONFIG_BAD_VALUE", e.what());
  } catch (const std::exception& e) {
    return fail_runtime(e.what());
  }
}
