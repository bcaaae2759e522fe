// Trace CSV emission/parsing and the JSON envelopes shared by the CLI.
//
// Column order and header text are a stable interface; numeric columns use
// shortest round-trip formatting so identical runs produce identical bytes.
#pragma once

#include "specfw/solver.hpp"
#include "specfw/spectra_point.hpp"

#include <json.hpp>

#include <filesystem>
#include <iosfwd>
#include <string>

namespace specfw {

inline constexpr const char* kTraceCsvHeader =
    "iter,f_value,duality_gap,step_size,rank,grad_eigengap,branch,elapsed_ns";

/// Shortest decimal string that round-trips the double exactly.
std::string format_double(double v);

void write_trace_csv(std::ostream& out, const Trace& trace);
void write_trace_csv(const std::filesystem::path& path, const Trace& trace);

/// Parses what write_trace_csv emits. Throws std::runtime_error on a bad
/// header or malformed row.
Trace read_trace_csv(std::istream& in);
Trace read_trace_csv(const std::filesystem::path& path);

nlohmann::json config_echo_json(const SolverConfig& config);

nlohmann::json summary_json(const std::string& variant, int iters,
                            double final_f, double final_gap, double wall_ms,
                            const SolverConfig& config);

/// Factored solution: {"n", "scale", "weights", "vectors"(, "y")}.
nlohmann::json solution_json(const SpectraPoint& x,
                             const Eigen::VectorXd* y = nullptr);
SpectraPoint solution_from_json(const nlohmann::json& j,
                                Eigen::VectorXd* y_out = nullptr);

void write_json(const std::filesystem::path& path, const nlohmann::json& j);
nlohmann::json read_json(const std::filesystem::path& path);

}  // namespace specfw
