#pragma once

// Proximal splitting solvers for
//
//   min_S  l(S, A) + tau ||S||_* + gamma ||S||_1 + 1_C(S)
//
// Generalized Forward-Backward (parallel proxes on auxiliary copies, averaged)
// and Incremental Proximal Descent (gradient step then each prox in turn).

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <optional>
#include <random>
#include <string>
#include <string_view>
#include <vector>

#include "splr/losses.hpp"
#include "splr/prox.hpp"

namespace splr {

/// Regularization weights. tau weights the trace norm, gamma the l1 norm.
struct Penalty {
  double tau_trace = 0.0;
  double gamma_l1 = 0.0;
  ConstraintSet constraint = ConstraintSet::Unconstrained;

  void validate() const {
    detail::require_weight(tau_trace, "Penalty::tau_trace");
    detail::require_weight(gamma_l1, "Penalty::gamma_l1");
  }
};

enum class Algorithm { GFB, IPD };
enum class CycleOrder { Cyclic, Randomized };

/// Canonical: Z_i <- Z_i - S + prox(2S - Z_i - theta G) (relaxation 1).
/// AsPrinted: Z_i <- prox(2S - Z_i - theta G), without the memory term.
enum class GfbUpdate { Canonical, AsPrinted };

/// Constant keeps theta fixed. Continuation shrinks theta by
/// `continuation_factor` each time the fixed-point test passes, until
/// `min_step`; with a fixed step the incremental scheme settles at a point
/// whose distance to the minimizer is O(theta).
enum class StepSchedule { Constant, Continuation };

inline std::string_view to_string(Algorithm a) { return a == Algorithm::GFB ? "gfb" : "ipd"; }

struct SolverConfig {
  Algorithm algorithm = Algorithm::IPD;
  std::optional<double> step_theta;  // unset: default_step()
  int max_iters = 5000;
  double fp_tolerance = 1e-8;
  CycleOrder cycle_order = CycleOrder::Cyclic;
  std::uint64_t seed = 0;
  GfbUpdate gfb_update = GfbUpdate::Canonical;
  StepSchedule schedule = StepSchedule::Constant;
  double continuation_factor = 0.5;
  double min_step = 1e-5;
};

struct EstimateReport {
  Mat solution;
  /// Loss + penalties at every iterate (constraint indicator excluded, since
  /// averaged GFB iterates are only feasible in the limit).
  std::vector<double> objective_trace;
  int iterations_run = 0;
  bool converged = false;
  double final_residual = std::numeric_limits<double>::infinity();
  double initial_step = 0.0;
  double final_step = 0.0;
};

/// Constraint violation tolerance used by `objective`.
inline constexpr double kFeasibilityTol = 1e-8;

namespace detail {

struct PenaltyTerms {
  double trace_norm = 0.0;
  double l1_norm = 0.0;
  double min_eig = 0.0;  // only filled when needed
};

inline PenaltyTerms penalty_terms(const Mat& s, bool need_min_eig) {
  PenaltyTerms t;
  t.l1_norm = s.cwiseAbs().sum();
  if (s.size() == 0) return t;
  if (is_symmetric(s)) {
    const Vec ev = sym_eigenvalues(s);
    t.trace_norm = ev.cwiseAbs().sum();
    t.min_eig = ev(ev.size() - 1);
    return t;
  }
  t.trace_norm = singular_values(s).sum();
  if (need_min_eig) t.min_eig = min_sym_eigenvalue(s);
  return t;
}

inline double composite_value(const LossSpec& spec, const Mat& s, const Penalty& pen, const PenaltyTerms& t) {
  return loss_value(spec, s) + pen.tau_trace * t.trace_norm + pen.gamma_l1 * t.l1_norm;
}

inline double relative_change(const Mat& next, const Mat& prev) {
  return (next - prev).norm() / std::max(1.0, prev.norm());
}

}  // namespace detail

/// l(S, A) + tau ||S||_* + gamma ||S||_1, or +infinity when the PSD
/// constraint is active and the symmetric part of S has an eigenvalue
/// below -kFeasibilityTol.
inline double objective(const LossSpec& spec, const Mat& s, const Penalty& pen) {
  pen.validate();
  require_same_shape(s, spec.target(), "objective");
  require_finite(s, "objective");
  const bool psd = pen.constraint == ConstraintSet::PsdCone;
  if (psd) require_square(s, "objective");
  const auto terms = detail::penalty_terms(s, psd);
  if (psd && terms.min_eig < -kFeasibilityTol) return std::numeric_limits<double>::infinity();
  return detail::composite_value(spec, s, pen, terms);
}

/// Number of auxiliary variables GFB uses for this penalty.
inline int gfb_branches(const Penalty& pen) { return pen.constraint == ConstraintSet::PsdCone ? 3 : 2; }

/// 0.9 (2/L) / q for GFB, 0.9 / L for IPD.
inline double default_step(const LossSpec& spec, const Penalty& pen, Algorithm algorithm) {
  const double lip = spec.lipschitz();
  if (algorithm == Algorithm::GFB) return 0.9 * (2.0 / lip) / gfb_branches(pen);
  return 0.9 / lip;
}

namespace detail {

inline double resolve_step(const LossSpec& spec, const Penalty& pen, const SolverConfig& cfg) {
  const double theta = cfg.step_theta.value_or(default_step(spec, pen, cfg.algorithm));
  const double limit = 2.0 / spec.lipschitz();
  if (!(theta > 0.0) || !(theta < limit))
    throw InvalidArgument("step size theta=" + std::to_string(theta) + " must lie in (0, 2/L) = (0, " +
                          std::to_string(limit) + ")");
  return theta;
}

inline void validate_run(const LossSpec& spec, const Penalty& pen, const SolverConfig& cfg) {
  pen.validate();
  if (cfg.max_iters <= 0) throw InvalidArgument("max_iters must be positive");
  if (!(cfg.fp_tolerance > 0.0)) throw InvalidArgument("fp_tolerance must be positive");
  if (pen.constraint == ConstraintSet::PsdCone) require_square(spec.target(), "PSD-constrained solve");
  if (cfg.schedule == StepSchedule::Continuation) {
    if (!(cfg.continuation_factor > 0.0 && cfg.continuation_factor < 1.0))
      throw InvalidArgument("continuation_factor must lie in (0, 1)");
    if (!(cfg.min_step > 0.0)) throw InvalidArgument("min_step must be positive");
  }
}

// Shared stopping logic. Returns true when the run is finished.
inline bool on_fixed_point(const SolverConfig& cfg, double& theta) {
  if (cfg.schedule == StepSchedule::Continuation && theta > cfg.min_step) {
    theta = std::max(cfg.min_step, theta * cfg.continuation_factor);
    return false;
  }
  return true;
}

inline void check_iterate(const Mat& s, int iter) {
  if (!s.allFinite()) throw NumericalError("iterate became non-finite at iteration " + std::to_string(iter));
}

}  // namespace detail

/// Generalized Forward-Backward splitting. Branches: trace prox at weight
/// q theta tau, l1 prox at weight q theta gamma, and the constraint projection
/// (dropped when unconstrained, so q = 2).
inline EstimateReport solve_gfb(const LossSpec& spec, const Penalty& pen, const SolverConfig& cfg) {
  detail::validate_run(spec, pen, cfg);
  double theta = detail::resolve_step(spec, pen, cfg);
  const int q = gfb_branches(pen);
  const bool psd = pen.constraint == ConstraintSet::PsdCone;

  EstimateReport report;
  report.initial_step = theta;

  Mat s = spec.target();
  std::vector<Mat> z(static_cast<std::size_t>(q), s);

  for (int iter = 1; iter <= cfg.max_iters; ++iter) {
    const Mat grad = loss_gradient(spec, s);
    const Mat forward = 2.0 * s - theta * grad;
    Mat next = Mat::Zero(s.rows(), s.cols());
    for (int i = 0; i < q; ++i) {
      Mat& zi = z[static_cast<std::size_t>(i)];
      const Mat point = forward - zi;
      Mat p;
      switch (i) {
        case 0: p = sv_shrink(point, q * theta * pen.tau_trace); break;
        case 1: p = soft_threshold(point, q * theta * pen.gamma_l1); break;
        default: p = project_constraint(point, pen.constraint); break;
      }
      if (cfg.gfb_update == GfbUpdate::Canonical)
        zi += p - s;
      else
        zi = std::move(p);
      next += zi;
    }
    next /= static_cast<double>(q);
    detail::check_iterate(next, iter);

    const double residual = detail::relative_change(next, s);
    s = std::move(next);
    report.objective_trace.push_back(detail::composite_value(spec, s, pen, detail::penalty_terms(s, false)));
    report.iterations_run = iter;
    report.final_residual = residual;
    if (residual <= cfg.fp_tolerance && detail::on_fixed_point(cfg, theta)) {
      report.converged = true;
      break;
    }
  }
  // Averaged iterates reach the cone only in the limit.
  report.solution = psd ? project_psd(s) : std::move(s);
  report.final_step = theta;
  return report;
}

/// Incremental Proximal Descent: gradient step, then trace prox (theta tau),
/// l1 prox (theta gamma) and constraint projection in turn. Under the PSD
/// constraint the trace prox is the fused prox_trace_psd. With
/// CycleOrder::Randomized the two prox steps are shuffled each iteration from
/// `seed`; the projection always runs last so every iterate is feasible.
inline EstimateReport solve_ipd(const LossSpec& spec, const Penalty& pen, const SolverConfig& cfg) {
  detail::validate_run(spec, pen, cfg);
  double theta = detail::resolve_step(spec, pen, cfg);
  const bool psd = pen.constraint == ConstraintSet::PsdCone;

  EstimateReport report;
  report.initial_step = theta;

  std::mt19937_64 rng(cfg.seed);
  std::bernoulli_distribution coin(0.5);

  Mat s = spec.target();
  for (int iter = 1; iter <= cfg.max_iters; ++iter) {
    Mat y = s - theta * loss_gradient(spec, s);
    const bool l1_first = cfg.cycle_order == CycleOrder::Randomized && coin(rng);
    auto trace_step = [&] { y = psd ? prox_trace_psd(y, theta * pen.tau_trace) : sv_shrink(y, theta * pen.tau_trace); };
    auto l1_step = [&] { y = soft_threshold(y, theta * pen.gamma_l1); };
    if (l1_first) {
      l1_step();
      trace_step();
    } else {
      trace_step();
      l1_step();
    }
    if (psd) y = project_psd(y);
    detail::check_iterate(y, iter);

    const double residual = detail::relative_change(y, s);
    s = std::move(y);
    report.objective_trace.push_back(detail::composite_value(spec, s, pen, detail::penalty_terms(s, false)));
    report.iterations_run = iter;
    report.final_residual = residual;
    if (residual <= cfg.fp_tolerance && detail::on_fixed_point(cfg, theta)) {
      report.converged = true;
      break;
    }
  }
  report.solution = std::move(s);
  report.final_step = theta;
  return report;
}

inline EstimateReport solve(const LossSpec& spec, const Penalty& pen, const SolverConfig& cfg) {
  return cfg.algorithm == Algorithm::GFB ? solve_gfb(spec, pen, cfg) : solve_ipd(spec, pen, cfg);
}

/// Penalty meeting the conditions tau >= 2 alpha ||eps||_op and
/// gamma >= 2 (1 - alpha) ||eps||_inf with equality.
inline Penalty suggest_penalty(const Mat& noise, double alpha) {
  if (!(alpha >= 0.0 && alpha <= 1.0)) throw InvalidArgument("suggest_penalty: alpha must lie in [0, 1]");
  return {2.0 * alpha * norm(noise, NormKind::Operator), 2.0 * (1.0 - alpha) * norm(noise, NormKind::EntrywiseMax),
          ConstraintSet::Unconstrained};
}

/// Heuristic version from a noise level only, using the gaussian scalings
/// ||eps||_op ~ 2 sigma sqrt(n) and ||eps||_inf ~ 2 sigma sqrt(ln n).
inline Penalty suggest_penalty_from_sigma(double sigma, double alpha, Eigen::Index n) {
  if (!(alpha >= 0.0 && alpha <= 1.0)) throw InvalidArgument("suggest_penalty: alpha must lie in [0, 1]");
  if (!(sigma >= 0.0)) throw InvalidArgument("suggest_penalty: sigma must be nonnegative");
  if (n < 1) throw InvalidArgument("suggest_penalty: n must be positive");
  const double dn = static_cast<double>(n);
  return {2.0 * alpha * sigma * 2.0 * std::sqrt(dn), 2.0 * (1.0 - alpha) * sigma * 2.0 * std::sqrt(std::log(dn)),
          ConstraintSet::Unconstrained};
}

}  // namespace splr
