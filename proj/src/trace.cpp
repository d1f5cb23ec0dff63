#include "mtm/trace.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <limits>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

#include "mtm/rng.hpp"

namespace mtm {

namespace {
constexpr const char* kSchema = "mtm-trace/1";
constexpr const char* kColumns = "k,f_x,f_y,alpha,A,L_k,m_k,calls_f,calls_g,V_to_opt";
}  // namespace

std::string to_string(RunStatus s) {
  switch (s) {
    case RunStatus::Completed: return "completed";
    case RunStatus::TargetReached: return "target_reached";
    case RunStatus::SubproblemFailure: return "subproblem_failure";
    case RunStatus::Diverged: return "diverged";
  }
  return "?";
}

RunStatus run_status_from_string(const std::string& s) {
  if (s == "completed") return RunStatus::Completed;
  if (s == "target_reached") return RunStatus::TargetReached;
  if (s == "subproblem_failure") return RunStatus::SubproblemFailure;
  if (s == "diverged") return RunStatus::Diverged;
  throw std::invalid_argument("unknown run status '" + s + "'");
}

std::string format_double(double v) {
  char buf[64];
  auto [p, ec] = std::to_chars(buf, buf + sizeof(buf), v);
  if (ec != std::errc()) throw std::runtime_error("format_double failed");
  return std::string(buf, p);
}

double parse_double(const std::string& s) {
  double v = 0.0;
  auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || p != s.data() + s.size())
    throw std::invalid_argument("bad numeric field '" + s + "'");
  return v;
}

double Trace::final_gap() const {
  if (!f_star || records.empty()) return std::numeric_limits<double>::quiet_NaN();
  return records.back().f_x - *f_star;
}

std::string Trace::serialize() const {
  std::ostringstream csv;
  csv << kColumns << '\n';
  for (const auto& r : records) {
    csv << r.k << ',' << format_double(r.f_x) << ',' << format_double(r.f_y) << ','
        << format_double(r.alpha) << ',' << format_double(r.A) << ','
        << format_double(r.L_k) << ',' << r.m_k << ',' << r.calls_f << ',' << r.calls_g
        << ',' << format_double(r.V_to_opt) << '\n';
  }
  const std::string payload = csv.str();

  nlohmann::ordered_json header;
  header["schema"] = kSchema;
  header["solver"] = solver_id;
  header["problem"] = problem_id;
  header["prox"] = prox_id;
  header["L"] = format_double(L);
  if (f_star) header["f_star"] = format_double(*f_star);
  if (R2) header["R2"] = format_double(*R2);
  header["seed"] = seed;
  header["status"] = to_string(status);
  header["config"] = config;
  char hash[32];
  std::snprintf(hash, sizeof(hash), "fnv1a64:%016llx",
                static_cast<unsigned long long>(fnv1a64(payload.data(), payload.size())));
  header["content_hash"] = hash;

  return header.dump() + "\n" + payload;
}

Trace Trace::deserialize(const std::string& text) {
  std::istringstream in(text);
  std::string line;
  if (!std::getline(in, line)) throw std::invalid_argument("trace: empty input");

  const nlohmann::json header = nlohmann::json::parse(line);
  if (header.at("schema").get<std::string>() != kSchema)
    throw std::invalid_argument("trace: unsupported schema '" +
                                header.at("schema").get<std::string>() + "'");

  Trace t;
  t.solver_id = header.at("solver").get<std::string>();
  t.problem_id = header.at("problem").get<std::string>();
  t.prox_id = header.at("prox").get<std::string>();
  t.L = parse_double(header.at("L").get<std::string>());
  if (header.contains("f_star")) t.f_star = parse_double(header["f_star"].get<std::string>());
  if (header.contains("R2")) t.R2 = parse_double(header["R2"].get<std::string>());
  t.seed = header.at("seed").get<std::uint64_t>();
  t.status = run_status_from_string(header.at("status").get<std::string>());
  if (header.contains("config"))
    t.config = header["config"].get<std::map<std::string, std::string>>();

  std::string payload;
  std::string rest;
  while (std::getline(in, rest)) payload += rest + "\n";

  if (header.contains("content_hash")) {
    char expect[32];
    std::snprintf(expect, sizeof(expect), "fnv1a64:%016llx",
                  static_cast<unsigned long long>(fnv1a64(payload.data(), payload.size())));
    if (header["content_hash"].get<std::string>() != expect)
      throw std::invalid_argument("trace: content hash mismatch (file was modified)");
  }

  std::istringstream body(payload);
  if (!std::getline(body, line) || line != kColumns)
    throw std::invalid_argument("trace: bad column header '" + line + "'");
  while (std::getline(body, line)) {
    if (line.empty()) continue;
    std::vector<std::string> f;
    std::size_t pos = 0;
    while (true) {
      const auto comma = line.find(',', pos);
      f.push_back(line.substr(pos, comma == std::string::npos ? comma : comma - pos));
      if (comma == std::string::npos) break;
      pos = comma + 1;
    }
    if (f.size() != 10) throw std::invalid_argument("trace: expected 10 columns");
    TraceRecord r;
    r.k = static_cast<int>(std::stol(f[0]));
    r.f_x = parse_double(f[1]);
    r.f_y = parse_double(f[2]);
    r.alpha = parse_double(f[3]);
    r.A = parse_double(f[4]);
    r.L_k = parse_double(f[5]);
    r.m_k = std::stoll(f[6]);
    r.calls_f = std::stoll(f[7]);
    r.calls_g = std::stoll(f[8]);
    r.V_to_opt = parse_double(f[9]);
    t.records.push_back(r);
  }
  return t;
}

void Trace::save(const std::string& path) const {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open '" + path + "' for writing");
  out << serialize();
}

Trace Trace::load(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return deserialize(buf.str());
}

}  // namespace mtm
