// Conditional-gradient solvers over scaled spectrahedra.
//
// Variants:
//   FW_LS_EXACT     vertex from the gradient's extreme eigenvector, exact
//                   line search on f.
//   FW_LS_QUAD      same vertex, step from the quadratic upper model
//                   eta = clamp(-inner / (beta dist^2), 0, 1).
//   FWPG            gradient step Y = X - grad/beta first; when the top of
//                   Y's spectrum clears the rest by the trace bound, the
//                   projection is exactly rank one and is taken directly
//                   (branch PG); otherwise a FW_LS_QUAD step (branch FW).
//   REGFW           regularized vertex EV(-grad + eta beta X), fixed step.
//   REGFW_LS        regularized vertex, exact line search for the step.
//   MIXED           two-block problems: projected-gradient step on the l1
//                   block, FW step with exact line search on the matrix block.
//   SMOOTHED_REGFW  REGFW_LS on the Huber smoothing of an entrywise-l1
//                   objective; the trace reports both smoothed and true values.
//
// Every solver stops when the duality gap reaches the configured accuracy or
// the iteration budget runs out, and emits one IterateRecord per iteration
// including the final one.
#pragma once

#include "specfw/objective.hpp"
#include "specfw/objectives.hpp"
#include "specfw/spectra_point.hpp"
#include "specfw/sym_matrix.hpp"

#include <Eigen/Dense>

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

namespace specfw {

enum class Variant {
  FW_LS_EXACT,
  FW_LS_QUAD,
  FWPG,
  REGFW,
  REGFW_LS,
  MIXED,
  SMOOTHED_REGFW,
};

enum class Branch { FW, PG, BOTH };

enum class StopReason { GAP_CONVERGED, MAX_ITERS };

const char* variant_name(Variant v);
std::optional<Variant> variant_from_name(const std::string& name);
const char* branch_name(Branch b);

struct SolverConfig {
  Variant variant = Variant::FW_LS_EXACT;
  int max_iters = 1000;
  /// Absolute duality-gap stopping threshold.
  double tol = 1e-9;
  /// When > 0, the effective threshold is max(tol, tol_rel * f(X_1)).
  double tol_rel = 0.0;
  /// Smoothness constant override; objectives provide their own otherwise.
  std::optional<double> beta_override;
  /// delta_hat for the regularized variants (0 < delta_hat).
  std::optional<double> gap_estimate;
  /// Huber width for SMOOTHED_REGFW.
  double smoothing_mu = 0.0;
  double eigen_tol = 1e-9;
  int eigen_max_iters = 100000;
  /// Factored iterates are re-eigendecomposed when the component count
  /// exceeds compaction_factor * n.
  int compaction_factor = 4;

  /// Throws std::invalid_argument on inconsistent settings.
  void validate() const;
};

struct IterateRecord {
  int iter = 0;
  double f_value = 0.0;
  double duality_gap = 0.0;
  double step_size = 0.0;
  int rank = 0;
  double grad_eigengap = 0.0;
  Branch branch = Branch::FW;
  std::int64_t elapsed_ns = 0;
};

struct Trace {
  std::vector<IterateRecord> rows;
};

struct SolveResult {
  SpectraPoint x;
  double f_value = 0.0;
  double gap = 0.0;
  StopReason stop = StopReason::MAX_ITERS;
  Trace trace;
  /// SMOOTHED_REGFW only: nonsmooth objective value at each iterate,
  /// aligned with trace.rows.
  std::vector<double> true_values;
};

struct MixedPoint {
  SpectraPoint x;
  Eigen::VectorXd y;
};

struct MixedSolveResult {
  MixedPoint point;
  double f_value = 0.0;
  double gap = 0.0;
  StopReason stop = StopReason::MAX_ITERS;
  Trace trace;
};

/// Snapshot handed to per-iteration observers (diagnostics, tests).
struct IterationView {
  int iter;
  const SymMatrix& x_dense;
  double x_scale;
  const SymMatrix& grad;
  const Eigen::VectorXd& v;  // extreme eigenvector of -grad
  double f_value;
  double duality_gap;
  double grad_eigengap;
  double step_size;
  Branch branch;
  const Eigen::VectorXd* y;  // mixed runs only, else nullptr
};

using IterObserver = std::function<void(const IterationView&)>;

/// Quadratic-model step: clamp(-inner / (beta * dist_sq), 0, 1); 0 when the
/// direction is degenerate. Requires beta > 0.
double line_search_quad(double inner, double dist_sq, double beta);

/// Exact minimizer of f over the segment [x, v]; uses the objective's closed
/// form when present, golden section plus endpoint snap otherwise.
double line_search_exact(const Objective& f, const SymMatrix& x,
                         const SymMatrix& v);

/// FW gap <X - scale v v^T, grad> with v the extreme eigenvector of -grad.
double duality_gap(const SpectraPoint& x, const SymMatrix& grad,
                   const Eigen::VectorXd& v);

SolveResult fw_solve(const Objective& f, const SpectraPoint& x1,
                     const SolverConfig& config, const IterObserver& observer = {});
SolveResult fwpg_solve(const Objective& f, const SpectraPoint& x1,
                       const SolverConfig& config, const IterObserver& observer = {});
SolveResult regfw_solve(const Objective& f, const SpectraPoint& x1,
                        const SolverConfig& config, const IterObserver& observer = {});
MixedSolveResult mixed_solve(const MixedObjective& f, const MixedPoint& start,
                             const SolverConfig& config,
                             const IterObserver& observer = {});
SolveResult smoothed_solve(const EntrywiseL1Objective& f, const SpectraPoint& x1,
                           const SolverConfig& config,
                           const IterObserver& observer = {});

/// Dispatch on config.variant for single-block objectives.
SolveResult solve(const Objective& f, const SpectraPoint& x1,
                  const SolverConfig& config, const IterObserver& observer = {});

}  // namespace specfw
