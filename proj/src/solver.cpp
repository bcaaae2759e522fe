#include "specfw/solver.hpp"

#include "specfw/eigs.hpp"
#include "specfw/projections.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <stdexcept>

namespace specfw {

namespace {

using Clock = std::chrono::steady_clock;

std::int64_t ns_since(const Clock::time_point& t0) {
  return std::chrono::duration_cast<std::chrono::nanoseconds>(Clock::now() - t0)
      .count();
}

double golden_min(const std::function<double(double)>& phi) {
  constexpr double invphi = 0.6180339887498949;
  double a = 0.0, b = 1.0;
  double x1 = b - invphi * (b - a);
  double x2 = a + invphi * (b - a);
  double f1 = phi(x1);
  double f2 = phi(x2);
  for (int i = 0; i < 78; ++i) {
    if (f1 <= f2) {
      b = x2;
      x2 = x1;
      f2 = f1;
      x1 = b - invphi * (b - a);
      f1 = phi(x1);
    } else {
      a = x1;
      x1 = x2;
      f1 = f2;
      x2 = a + invphi * (b - a);
      f2 = phi(x2);
    }
  }
  const double eta = 0.5 * (a + b);
  // Endpoint snap keeps linear objectives exact and guards descent.
  const double fe = phi(eta);
  const double f0 = phi(0.0);
  const double fl = phi(1.0);
  if (f0 <= fe && f0 <= fl) return 0.0;
  if (fl <= fe) return 1.0;
  return eta;
}

enum class StepRule { EXACT_LS, QUAD_MODEL, FWPG, REG_FIXED, REG_LS };

StepRule rule_for(Variant v) {
  switch (v) {
    case Variant::FW_LS_EXACT:
      return StepRule::EXACT_LS;
    case Variant::FW_LS_QUAD:
      return StepRule::QUAD_MODEL;
    case Variant::FWPG:
      return StepRule::FWPG;
    case Variant::REGFW:
      return StepRule::REG_FIXED;
    case Variant::REGFW_LS:
    case Variant::SMOOTHED_REGFW:
      return StepRule::REG_LS;
    default:
      throw std::invalid_argument("no step rule for this variant");
  }
}

bool needs_beta(StepRule r) { return r != StepRule::EXACT_LS; }

struct GradSpectrum {
  Eigen::VectorXd v;
  double nu1 = 0.0;
  double gap = 0.0;  // nu1 - nu2, clamped at 0
};

GradSpectrum top2_of_negated(const SymMatrix& grad, const SolverConfig& cfg) {
  SymMatrix neg((-grad.mat()).eval());
  const int k = std::min(2, grad.n());
  auto pairs = top_k_eigenpairs(neg, k, cfg.eigen_tol, cfg.eigen_max_iters);
  GradSpectrum s;
  s.v = std::move(pairs[0].vector);
  s.nu1 = pairs[0].value;
  s.gap = k > 1 ? std::max(0.0, pairs[0].value - pairs[1].value) : 0.0;
  return s;
}

// Dense iterate plus factored form plus (for structured objectives) the
// incrementally maintained image A X and linear-term value <C, X>.
class XState {
 public:
  XState(const Objective& obj, const SpectraPoint& x1, const SolverConfig& cfg)
      : obj_(obj),
        structured_(dynamic_cast<const StructuredObjective*>(&obj)),
        cfg_(cfg),
        scale_(x1.scale()),
        n_(x1.dim()),
        xd_(x1.dense().mat()),
        w_(x1.weights()),
        u_(x1.vectors()) {
    if (obj_.dim() != n_) {
      throw std::invalid_argument("solver: objective/point dimension mismatch");
    }
    if (structured_) {
      z_ = structured_->map().apply(x1.dense());
      lin_ = structured_->linear_term().dot(x1.dense());
    }
  }

  double scale() const { return scale_; }
  int n() const { return n_; }
  int rank() const { return static_cast<int>(w_.size()); }
  const Eigen::MatrixXd& dense() const { return xd_; }
  SymMatrix dense_sym() const { return SymMatrix(xd_); }

  double value() const {
    if (structured_) return structured_->g_value(z_) + lin_;
    return obj_.value(SymMatrix(xd_));
  }

  SymMatrix gradient() const {
    if (structured_) {
      SymMatrix adj = structured_->map().adjoint(structured_->g_gradient(z_));
      return adj + structured_->linear_term();
    }
    return obj_.gradient(SymMatrix(xd_));
  }

  // Exact line search toward the vertex scale * v v^T.
  double exact_step_to(const Eigen::VectorXd& v) const {
    if (structured_) {
      const Eigen::VectorXd zv = structured_->map().apply_rank_one(v, scale_);
      const double lin_v =
          scale_ * v.dot(structured_->linear_term().mat() * v);
      const Eigen::VectorXd d = zv - z_;
      const double dlin = lin_v - lin_;
      if (structured_->g_quadratic()) {
        const double dd = d.squaredNorm();
        if (dd <= 0.0) return dlin < 0.0 ? 1.0 : 0.0;
        const double eta =
            -((z_ - structured_->g_target()).dot(d) + dlin) / dd;
        return std::clamp(eta, 0.0, 1.0);
      }
      return golden_min([&](double eta) {
        return structured_->g_value(z_ + eta * d) + lin_ + eta * dlin;
      });
    }
    SymMatrix vtx((scale_ * (v * v.transpose())).eval());
    return line_search_exact(obj_, SymMatrix(xd_), vtx);
  }

  // <scale v v^T - X, grad> and ||scale v v^T - X||_F^2 for the quad model.
  void direction_stats(const Eigen::VectorXd& v, const SymMatrix& grad,
                       double* inner, double* dist_sq) const {
    const double vgv = v.dot(grad.mat() * v);
    *inner = scale_ * vgv - xd_.cwiseProduct(grad.mat()).sum();
    const double vxv = v.dot(xd_ * v);
    *dist_sq = scale_ * scale_ + xd_.squaredNorm() - 2.0 * scale_ * vxv;
  }

  void fw_update(double eta, const Eigen::VectorXd& v) {
    if (eta <= 0.0) return;
    if (structured_) {
      const Eigen::VectorXd zv = structured_->map().apply_rank_one(v, scale_);
      z_ = (1.0 - eta) * z_ + eta * zv;
      lin_ = (1.0 - eta) * lin_ +
             eta * scale_ * v.dot(structured_->linear_term().mat() * v);
    }
    xd_ *= (1.0 - eta);
    xd_.noalias() += (eta * scale_) * (v * v.transpose());
    if (eta >= 1.0) {
      w_.clear();
      u_.clear();
    } else {
      for (double& wi : w_) wi *= (1.0 - eta);
    }
    w_.push_back(eta * scale_);
    u_.push_back(v);
    compact_if_needed();
  }

  void pg_reset(const Eigen::VectorXd& top) {
    xd_ = scale_ * (top * top.transpose());
    w_.assign(1, scale_);
    u_.assign(1, top);
    refresh_caches();
  }

  SpectraPoint point() const {
    std::vector<double> w = w_;
    double sum = 0.0;
    for (double wi : w) sum += wi;
    for (double& wi : w) wi *= scale_ / sum;  // absorb rounding drift
    return SpectraPoint(scale_, std::move(w), u_);
  }

 private:
  void compact_if_needed() {
    if (rank() <= cfg_.compaction_factor * n_) return;
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(xd_);
    if (es.info() != Eigen::Success) {
      throw std::runtime_error("solver: compaction eigendecomposition failed");
    }
    w_.clear();
    u_.clear();
    for (int i = n_ - 1; i >= 0; --i) {
      if (es.eigenvalues()[i] > 0.0) {
        w_.push_back(es.eigenvalues()[i]);
        u_.push_back(es.eigenvectors().col(i));
      }
    }
    xd_ = Eigen::MatrixXd::Zero(n_, n_);
    for (std::size_t i = 0; i < w_.size(); ++i) {
      xd_.noalias() += w_[i] * (u_[i] * u_[i].transpose());
    }
    refresh_caches();
  }

  void refresh_caches() {
    if (structured_) {
      z_ = structured_->map().apply(SymMatrix(xd_));
      lin_ = structured_->linear_term().dot(SymMatrix(xd_));
    }
  }

  const Objective& obj_;
  const StructuredObjective* structured_;
  const SolverConfig& cfg_;
  double scale_;
  int n_;
  Eigen::MatrixXd xd_;
  std::vector<double> w_;
  std::vector<Eigen::VectorXd> u_;
  Eigen::VectorXd z_;
  double lin_ = 0.0;
};

SolveResult run_x_loop(const Objective& obj, const SpectraPoint& x1,
                       const SolverConfig& cfg, StepRule rule,
                       const SmoothedObjective* smoothed,
                       const IterObserver& observer) {
  cfg.validate();
  const auto t0 = Clock::now();
  XState st(obj, x1, cfg);
  const double scale = st.scale();

  double beta = cfg.beta_override.value_or(obj.beta());
  if (needs_beta(rule) && !(beta > 0.0)) {
    throw std::invalid_argument("solver: variant requires a positive beta");
  }

  double reg_eta = 0.0;  // fixed step / regularizer weight for REGFW family
  if (rule == StepRule::REG_FIXED || rule == StepRule::REG_LS) {
    const double dh = cfg.gap_estimate.value();
    reg_eta = dh / (2.0 * beta * scale);
    if (!(reg_eta > 0.0) || reg_eta > 1.0) {
      throw std::invalid_argument(
          "solver: gap estimate inconsistent with beta (step outside (0, 1])");
    }
  }

  SolveResult out{x1, 0.0, 0.0, StopReason::MAX_ITERS, {}, {}};
  out.trace.rows.reserve(static_cast<std::size_t>(std::min(cfg.max_iters, 4096)));
  double eff_tol = cfg.tol;

  for (int t = 1; t <= cfg.max_iters; ++t) {
    const double f = st.value();
    if (t == 1) eff_tol = std::max(cfg.tol, cfg.tol_rel * std::abs(f));
    const SymMatrix grad = st.gradient();
    const GradSpectrum gs = top2_of_negated(grad, cfg);
    const double gap =
        st.dense().cwiseProduct(grad.mat()).sum() -
        scale * gs.v.dot(grad.mat() * gs.v);

    IterateRecord rec;
    rec.iter = t;
    rec.f_value = f;
    rec.duality_gap = gap;
    rec.rank = st.rank();
    rec.grad_eigengap = gs.gap;
    rec.branch = Branch::FW;

    const bool stop = gap <= eff_tol;
    double eta = 0.0;
    Branch branch = Branch::FW;
    Eigen::VectorXd step_v = gs.v;
    bool pg_step = false;

    if (!stop) {
      switch (rule) {
        case StepRule::EXACT_LS:
          eta = st.exact_step_to(gs.v);
          break;
        case StepRule::QUAD_MODEL: {
          double inner, dist_sq;
          st.direction_stats(gs.v, grad, &inner, &dist_sq);
          eta = line_search_quad(inner, dist_sq, beta);
          break;
        }
        case StepRule::FWPG: {
          SymMatrix y((st.dense() - grad.mat() / beta).eval());
          const int k = std::min(2, st.n());
          auto top = top_k_eigenpairs(y, k, cfg.eigen_tol, cfg.eigen_max_iters);
          const double l1 = top[0].value;
          const double l2 = k > 1 ? top[1].value : l1 - scale;
          if (l1 >= scale + l2) {
            pg_step = true;
            branch = Branch::PG;
            step_v = top[0].vector;
            eta = 1.0;
          } else {
            double inner, dist_sq;
            st.direction_stats(gs.v, grad, &inner, &dist_sq);
            eta = line_search_quad(inner, dist_sq, beta);
          }
          break;
        }
        case StepRule::REG_FIXED:
        case StepRule::REG_LS: {
          SymMatrix regmat((-grad.mat() + (reg_eta * beta) * st.dense()).eval());
          auto pair = top_k_eigenpairs(regmat, 1, cfg.eigen_tol,
                                       cfg.eigen_max_iters);
          step_v = std::move(pair[0].vector);
          eta = rule == StepRule::REG_FIXED ? reg_eta
                                            : st.exact_step_to(step_v);
          break;
        }
      }
    }

    rec.step_size = eta;
    rec.branch = branch;
    rec.elapsed_ns = ns_since(t0);
    out.trace.rows.push_back(rec);
    if (smoothed) {
      out.true_values.push_back(smoothed->true_value(st.dense_sym()));
    }
    if (observer) {
      const SymMatrix xsym = st.dense_sym();
      IterationView view{t,   xsym,   scale, grad, gs.v,       f,
                         gap, gs.gap, eta,   rec.branch, nullptr};
      observer(view);
    }

    if (stop) {
      out.f_value = f;
      out.gap = gap;
      out.stop = StopReason::GAP_CONVERGED;
      out.x = st.point();
      return out;
    }

    if (pg_step) {
      st.pg_reset(step_v);
    } else {
      st.fw_update(eta, step_v);
    }
  }

  // Budget exhausted: report the state after the last update.
  const double f = st.value();
  const SymMatrix grad = st.gradient();
  const GradSpectrum gs = top2_of_negated(grad, cfg);
  out.f_value = f;
  out.gap = st.dense().cwiseProduct(grad.mat()).sum() -
            scale * gs.v.dot(grad.mat() * gs.v);
  out.stop = StopReason::MAX_ITERS;
  out.x = st.point();
  return out;
}

}  // namespace

const char* variant_name(Variant v) {
  switch (v) {
    case Variant::FW_LS_EXACT:
      return "fw-ls-exact";
    case Variant::FW_LS_QUAD:
      return "fw-ls-quad";
    case Variant::FWPG:
      return "fwpg";
    case Variant::REGFW:
      return "regfw";
    case Variant::REGFW_LS:
      return "regfw-ls";
    case Variant::MIXED:
      return "mixed";
    case Variant::SMOOTHED_REGFW:
      return "smoothed-regfw";
  }
  return "unknown";
}

std::optional<Variant> variant_from_name(const std::string& name) {
  for (Variant v :
       {Variant::FW_LS_EXACT, Variant::FW_LS_QUAD, Variant::FWPG,
        Variant::REGFW, Variant::REGFW_LS, Variant::MIXED,
        Variant::SMOOTHED_REGFW}) {
    if (name == variant_name(v)) return v;
  }
  return std::nullopt;
}

const char* branch_name(Branch b) {
  switch (b) {
    case Branch::FW:
      return "FW";
    case Branch::PG:
      return "PG";
    case Branch::BOTH:
      return "BOTH";
  }
  return "?";
}

void SolverConfig::validate() const {
  if (max_iters < 1) throw std::invalid_argument("config: max_iters must be >= 1");
  if (tol < 0.0) throw std::invalid_argument("config: tol must be >= 0");
  if (tol_rel < 0.0) throw std::invalid_argument("config: tol_rel must be >= 0");
  if (!(eigen_tol > 0.0)) throw std::invalid_argument("config: eigen_tol must be > 0");
  if (eigen_max_iters < 1) {
    throw std::invalid_argument("config: eigen_max_iters must be >= 1");
  }
  if (compaction_factor < 1) {
    throw std::invalid_argument("config: compaction_factor must be >= 1");
  }
  if (beta_override && !(*beta_override > 0.0)) {
    throw std::invalid_argument("config: beta override must be > 0");
  }
  const bool regularized = variant == Variant::REGFW ||
                           variant == Variant::REGFW_LS ||
                           variant == Variant::SMOOTHED_REGFW;
  if (regularized && (!gap_estimate || !(*gap_estimate > 0.0))) {
    throw std::invalid_argument("config: regularized variants need gap_estimate > 0");
  }
  if (variant == Variant::SMOOTHED_REGFW && !(smoothing_mu > 0.0)) {
    throw std::invalid_argument("config: SMOOTHED_REGFW needs smoothing_mu > 0");
  }
}

double line_search_quad(double inner, double dist_sq, double beta) {
  if (!(beta > 0.0)) throw std::invalid_argument("line_search_quad: beta must be > 0");
  if (dist_sq <= 0.0) return 0.0;
  return std::clamp(-inner / (beta * dist_sq), 0.0, 1.0);
}

double line_search_exact(const Objective& f, const SymMatrix& x,
                         const SymMatrix& v) {
  if (auto closed = f.exact_step(x, v)) return *closed;
  return golden_min([&](double eta) {
    return f.value(SymMatrix(((1.0 - eta) * x.mat() + eta * v.mat()).eval()));
  });
}

double duality_gap(const SpectraPoint& x, const SymMatrix& grad,
                   const Eigen::VectorXd& v) {
  return x.dense().dot(grad) - x.scale() * v.dot(grad.mat() * v);
}

SolveResult fw_solve(const Objective& f, const SpectraPoint& x1,
                     const SolverConfig& config, const IterObserver& observer) {
  if (config.variant != Variant::FW_LS_EXACT &&
      config.variant != Variant::FW_LS_QUAD) {
    throw std::invalid_argument("fw_solve: variant must be FW_LS_EXACT or FW_LS_QUAD");
  }
  return run_x_loop(f, x1, config, rule_for(config.variant), nullptr, observer);
}

SolveResult fwpg_solve(const Objective& f, const SpectraPoint& x1,
                       const SolverConfig& config, const IterObserver& observer) {
  if (config.variant != Variant::FWPG) {
    throw std::invalid_argument("fwpg_solve: variant must be FWPG");
  }
  return run_x_loop(f, x1, config, StepRule::FWPG, nullptr, observer);
}

SolveResult regfw_solve(const Objective& f, const SpectraPoint& x1,
                        const SolverConfig& config, const IterObserver& observer) {
  if (config.variant != Variant::REGFW && config.variant != Variant::REGFW_LS) {
    throw std::invalid_argument("regfw_solve: variant must be REGFW or REGFW_LS");
  }
  return run_x_loop(f, x1, config, rule_for(config.variant), nullptr, observer);
}

SolveResult smoothed_solve(const EntrywiseL1Objective& f, const SpectraPoint& x1,
                           const SolverConfig& config,
                           const IterObserver& observer) {
  if (config.variant != Variant::SMOOTHED_REGFW) {
    throw std::invalid_argument("smoothed_solve: variant must be SMOOTHED_REGFW");
  }
  config.validate();
  auto base = std::make_shared<const EntrywiseL1Objective>(f);
  SmoothedObjective smoothed = huber_smooth_l1(base, config.smoothing_mu);
  return run_x_loop(smoothed, x1, config, StepRule::REG_LS, &smoothed, observer);
}

MixedSolveResult mixed_solve(const MixedObjective& f, const MixedPoint& start,
                             const SolverConfig& config,
                             const IterObserver& observer) {
  if (config.variant != Variant::MIXED) {
    throw std::invalid_argument("mixed_solve: variant must be MIXED");
  }
  config.validate();
  const auto t0 = Clock::now();
  const double scale = start.x.scale();
  const int n = start.x.dim();
  if (f.dim() != n) {
    throw std::invalid_argument("mixed_solve: objective/point dimension mismatch");
  }
  if (start.y.size() != f.y_dim()) {
    throw std::invalid_argument("mixed_solve: y dimension mismatch");
  }
  const double s = f.l1_radius();
  if (start.y.size() > 0 && s >= 0.0 && start.y.lpNorm<1>() > s + 1e-9) {
    throw std::invalid_argument("mixed_solve: start y outside the l1 ball");
  }

  auto project_k = [&](const Eigen::VectorXd& v) -> Eigen::VectorXd {
    if (s <= 0.0) return Eigen::VectorXd::Zero(v.size());
    return project_l1_ball(v, s);
  };

  Eigen::MatrixXd xd = start.x.dense().mat();
  std::vector<double> w = start.x.weights();
  std::vector<Eigen::VectorXd> u = start.x.vectors();
  Eigen::VectorXd z = f.map().apply(start.x.dense());
  Eigen::VectorXd y = start.y;
  const double half_step = 1.0 / (2.0 * f.beta_g());

  MixedSolveResult out{{start.x, start.y}, 0.0, 0.0, StopReason::MAX_ITERS, {}};
  double eff_tol = config.tol;

  auto lin_of = [&](const Eigen::MatrixXd& m) {
    return f.linear_term().mat().cwiseProduct(m).sum();
  };

  auto compact = [&]() {
    if (static_cast<int>(w.size()) <= config.compaction_factor * n) return;
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(xd);
    if (es.info() != Eigen::Success) {
      throw std::runtime_error("mixed_solve: compaction eigendecomposition failed");
    }
    w.clear();
    u.clear();
    for (int i = n - 1; i >= 0; --i) {
      if (es.eigenvalues()[i] > 0.0) {
        w.push_back(es.eigenvalues()[i]);
        u.push_back(es.eigenvectors().col(i));
      }
    }
    xd = Eigen::MatrixXd::Zero(n, n);
    for (std::size_t i = 0; i < w.size(); ++i) {
      xd.noalias() += w[i] * (u[i] * u[i].transpose());
    }
    z = f.map().apply(SymMatrix(xd));
  };

  auto finish = [&](double fval, double gap, StopReason reason) {
    double sum = 0.0;
    for (double wi : w) sum += wi;
    std::vector<double> wn = w;
    for (double& wi : wn) wi *= scale / sum;
    out.point = MixedPoint{SpectraPoint(scale, std::move(wn), u), y};
    out.f_value = fval;
    out.gap = gap;
    out.stop = reason;
  };

  for (int t = 1; t <= config.max_iters; ++t) {
    const Eigen::VectorXd zfull = z + y;
    const double fval =
        f.g_value(zfull) + lin_of(xd) + f.y_linear_term().dot(y);
    if (t == 1) eff_tol = std::max(config.tol, config.tol_rel * std::abs(fval));

    const Eigen::VectorXd gy = f.g_gradient(zfull) + f.y_linear_term();
    SymMatrix gx = f.map().adjoint(f.g_gradient(zfull)) + f.linear_term();
    const GradSpectrum gs = top2_of_negated(gx, config);
    const double gap_x = xd.cwiseProduct(gx.mat()).sum() -
                         scale * gs.v.dot(gx.mat() * gs.v);
    const Eigen::VectorXd y_probe = project_k(y - gy);
    const double gap_y = (y - y_probe).dot(gy);
    const double gap = gap_x + gap_y;

    IterateRecord rec;
    rec.iter = t;
    rec.f_value = fval;
    rec.duality_gap = gap;
    rec.rank = static_cast<int>(w.size());
    rec.grad_eigengap = gs.gap;
    rec.branch = Branch::BOTH;

    const bool stop = gap <= eff_tol;
    double eta = 0.0;
    Eigen::VectorXd y_next = y;
    Eigen::VectorXd step_v = gs.v;

    if (!stop) {
      y_next = project_k(y - half_step * gy);
      const Eigen::VectorXd z_at_next = z + y_next;
      SymMatrix gx_next =
          f.map().adjoint(f.g_gradient(z_at_next)) + f.linear_term();
      SymMatrix neg((-gx_next.mat()).eval());
      auto vpair =
          top_k_eigenpairs(neg, 1, config.eigen_tol, config.eigen_max_iters);
      step_v = std::move(vpair[0].vector);

      // Exact line search at the updated y.
      const Eigen::VectorXd zv = f.map().apply_rank_one(step_v, scale);
      const Eigen::VectorXd d = zv - z;
      const double lin_x = lin_of(xd);
      const double lin_v =
          scale * step_v.dot(f.linear_term().mat() * step_v);
      const double dlin = lin_v - lin_x;
      if (f.g_quadratic()) {
        const double dd = d.squaredNorm();
        if (dd <= 0.0) {
          eta = dlin < 0.0 ? 1.0 : 0.0;
        } else {
          eta = std::clamp(
              -((z + y_next - f.g_target()).dot(d) + dlin) / dd, 0.0, 1.0);
        }
      } else {
        eta = golden_min([&](double e) {
          return f.g_value(z + e * d + y_next) + lin_x + e * dlin;
        });
      }
    }

    rec.step_size = eta;
    rec.elapsed_ns = ns_since(t0);
    out.trace.rows.push_back(rec);
    if (observer) {
      SymMatrix xsym(xd);
      IterationView view{t,   xsym,   scale, gx,  gs.v,         fval,
                         gap, gs.gap, eta,   rec.branch, &y};
      observer(view);
    }

    if (stop) {
      finish(fval, gap, StopReason::GAP_CONVERGED);
      return out;
    }

    y = y_next;
    if (eta > 0.0) {
      xd *= (1.0 - eta);
      xd.noalias() += (eta * scale) * (step_v * step_v.transpose());
      z = (1.0 - eta) * z + eta * f.map().apply_rank_one(step_v, scale);
      if (eta >= 1.0) {
        w.clear();
        u.clear();
      } else {
        for (double& wi : w) wi *= (1.0 - eta);
      }
      w.push_back(eta * scale);
      u.push_back(step_v);
      compact();
    }
  }

  const Eigen::VectorXd zfull = z + y;
  const double fval = f.g_value(zfull) + lin_of(xd) + f.y_linear_term().dot(y);
  SymMatrix gx = f.map().adjoint(f.g_gradient(zfull)) + f.linear_term();
  const GradSpectrum gs = top2_of_negated(gx, config);
  const Eigen::VectorXd gy = f.g_gradient(zfull) + f.y_linear_term();
  const double gap = xd.cwiseProduct(gx.mat()).sum() -
                     scale * gs.v.dot(gx.mat() * gs.v) +
                     (y - project_k(y - gy)).dot(gy);
  finish(fval, gap, StopReason::MAX_ITERS);
  return out;
}

SolveResult solve(const Objective& f, const SpectraPoint& x1,
                  const SolverConfig& config, const IterObserver& observer) {
  switch (config.variant) {
    case Variant::FW_LS_EXACT:
    case Variant::FW_LS_QUAD:
      return fw_solve(f, x1, config, observer);
    case Variant::FWPG:
      return fwpg_solve(f, x1, config, observer);
    case Variant::REGFW:
    case Variant::REGFW_LS:
      return regfw_solve(f, x1, config, observer);
    case Variant::MIXED:
      throw std::invalid_argument("solve: MIXED requires mixed_solve");
    case Variant::SMOOTHED_REGFW:
      throw std::invalid_argument(
          "solve: SMOOTHED_REGFW requires smoothed_solve on an l1 objective");
  }
  throw std::invalid_argument("solve: unknown variant");
}

}  // namespace specfw
