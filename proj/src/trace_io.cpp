#include "specfw/trace_io.hpp"

#include <charconv>
#include <fstream>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

namespace specfw {

namespace {

std::vector<std::string> split_csv_row(const std::string& line) {
  std::vector<std::string> fields;
  std::string cur;
  for (char c : line) {
    if (c == ',') {
      fields.push_back(cur);
      cur.clear();
    } else {
      cur.push_back(c);
    }
  }
  fields.push_back(cur);
  return fields;
}

double parse_double(const std::string& s) {
  double v = 0.0;
  const auto res = std::from_chars(s.data(), s.data() + s.size(), v);
  if (res.ec != std::errc() || res.ptr != s.data() + s.size()) {
    throw std::runtime_error("trace csv: bad number '" + s + "'");
  }
  return v;
}

long long parse_int(const std::string& s) {
  long long v = 0;
  const auto res = std::from_chars(s.data(), s.data() + s.size(), v);
  if (res.ec != std::errc() || res.ptr != s.data() + s.size()) {
    throw std::runtime_error("trace csv: bad integer '" + s + "'");
  }
  return v;
}

Branch parse_branch(const std::string& s) {
  if (s == "FW") return Branch::FW;
  if (s == "PG") return Branch::PG;
  if (s == "BOTH") return Branch::BOTH;
  throw std::runtime_error("trace csv: bad branch '" + s + "'");
}

}  // namespace

std::string format_double(double v) {
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof(buf), v);
  if (res.ec != std::errc()) throw std::runtime_error("format_double failed");
  return std::string(buf, res.ptr);
}

void write_trace_csv(std::ostream& out, const Trace& trace) {
  out << kTraceCsvHeader << '\n';
  for (const IterateRecord& r : trace.rows) {
    out << r.iter << ',' << format_double(r.f_value) << ','
        << format_double(r.duality_gap) << ',' << format_double(r.step_size)
        << ',' << r.rank << ',' << format_double(r.grad_eigengap) << ','
        << branch_name(r.branch) << ',' << r.elapsed_ns << '\n';
  }
}

void write_trace_csv(const std::filesystem::path& path, const Trace& trace) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open " + path.string());
  write_trace_csv(out, trace);
  if (!out) throw std::runtime_error("write failed: " + path.string());
}

Trace read_trace_csv(std::istream& in) {
  std::string line;
  if (!std::getline(in, line)) throw std::runtime_error("trace csv: empty input");
  if (!line.empty() && line.back() == '\r') line.pop_back();
  if (line != kTraceCsvHeader) {
    throw std::runtime_error("trace csv: unexpected header '" + line + "'");
  }
  Trace trace;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    const auto f = split_csv_row(line);
    if (f.size() != 8) throw std::runtime_error("trace csv: bad row '" + line + "'");
    IterateRecord r;
    r.iter = static_cast<int>(parse_int(f[0]));
    r.f_value = parse_double(f[1]);
    r.duality_gap = parse_double(f[2]);
    r.step_size = parse_double(f[3]);
    r.rank = static_cast<int>(parse_int(f[4]));
    r.grad_eigengap = parse_double(f[5]);
    r.branch = parse_branch(f[6]);
    r.elapsed_ns = parse_int(f[7]);
    trace.rows.push_back(r);
  }
  return trace;
}

Trace read_trace_csv(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path.string());
  return read_trace_csv(in);
}

nlohmann::json config_echo_json(const SolverConfig& config) {
  nlohmann::json j{
      {"variant", variant_name(config.variant)},
      {"max_iters", config.max_iters},
      {"tol", config.tol},
      {"tol_rel", config.tol_rel},
      {"smoothing_mu", config.smoothing_mu},
      {"eigen_tol", config.eigen_tol},
      {"eigen_max_iters", config.eigen_max_iters},
      {"compaction_factor", config.compaction_factor},
  };
  j["beta_override"] =
      config.beta_override ? nlohmann::json(*config.beta_override) : nullptr;
  j["gap_estimate"] =
      config.gap_estimate ? nlohmann::json(*config.gap_estimate) : nullptr;
  return j;
}

nlohmann::json summary_json(const std::string& variant, int iters,
                            double final_f, double final_gap, double wall_ms,
                            const SolverConfig& config) {
  return nlohmann::json{
      {"variant", variant},       {"iters", iters},
      {"final_f", final_f},       {"final_gap", final_gap},
      {"wall_ms", wall_ms},       {"config_echo", config_echo_json(config)},
  };
}

nlohmann::json solution_json(const SpectraPoint& x, const Eigen::VectorXd* y) {
  nlohmann::json vecs = nlohmann::json::array();
  for (const Eigen::VectorXd& u : x.vectors()) {
    vecs.push_back(std::vector<double>(u.data(), u.data() + u.size()));
  }
  nlohmann::json j{
      {"n", x.dim()},
      {"scale", x.scale()},
      {"weights", x.weights()},
      {"vectors", std::move(vecs)},
  };
  if (y) j["y"] = std::vector<double>(y->data(), y->data() + y->size());
  return j;
}

SpectraPoint solution_from_json(const nlohmann::json& j,
                                Eigen::VectorXd* y_out) {
  const int n = j.at("n").get<int>();
  const double scale = j.at("scale").get<double>();
  auto weights = j.at("weights").get<std::vector<double>>();
  std::vector<Eigen::VectorXd> vectors;
  for (const auto& v : j.at("vectors")) {
    auto entries = v.get<std::vector<double>>();
    if (static_cast<int>(entries.size()) != n) {
      throw std::runtime_error("solution json: vector length mismatch");
    }
    vectors.push_back(
        Eigen::Map<const Eigen::VectorXd>(entries.data(), entries.size()));
  }
  if (y_out) {
    *y_out = Eigen::VectorXd();
    if (j.contains("y") && !j.at("y").is_null()) {
      auto y = j.at("y").get<std::vector<double>>();
      *y_out = Eigen::Map<const Eigen::VectorXd>(y.data(), y.size());
    }
  }
  return SpectraPoint(scale, std::move(weights), std::move(vectors));
}

void write_json(const std::filesystem::path& path, const nlohmann::json& j) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open " + path.string());
  out << j.dump(2) << '\n';
  if (!out) throw std::runtime_error("write failed: " + path.string());
}

nlohmann::json read_json(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path.string());
  nlohmann::json j;
  in >> j;
  return j;
}

}  // namespace specfw
