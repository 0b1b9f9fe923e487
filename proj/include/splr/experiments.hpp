#pragma once

// Experiment protocols built from the library pieces: the block-covariance
// denoising study and graph denoising / link prediction with baselines.

#include <cstdint>
#include <optional>
#include <random>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "splr/baselines.hpp"
#include "splr/datagen.hpp"
#include "splr/eval.hpp"
#include "splr/solvers.hpp"

namespace splr {

/// Geometric grid of `count` values from lo to hi, optionally preceded by 0.
inline std::vector<double> log_grid(double lo, double hi, int count, bool with_zero = false) {
  if (!(lo > 0.0 && hi >= lo) || count < 1) throw InvalidArgument("log_grid: need 0 < lo <= hi and count >= 1");
  std::vector<double> out;
  if (with_zero) out.push_back(0.0);
  for (int k = 0; k < count; ++k) {
    const double t = count == 1 ? 0.0 : static_cast<double>(k) / (count - 1);
    out.push_back(lo * std::pow(hi / lo, t));
  }
  return out;
}

// ---------------------------------------------------------------------------
// Covariance denoising

struct CovarianceExperiment {
  BlockCovSpec data;  // data.seed is ignored: replicates supply their own
  ConstraintSet constraint = ConstraintSet::PsdCone;
  SolverConfig solver;
};

/// Normalized RMSE of the estimate at (tau, gamma) on the instance drawn from `seed`.
inline double covariance_rmse(const CovarianceExperiment& exp, double tau, double gamma, std::uint64_t seed) {
  BlockCovSpec spec = exp.data;
  spec.seed = seed;
  const SynthInstance inst = gen_block_covariance(spec);
  const auto report = solve(LossSpec::squared_frobenius(inst.observation), {tau, gamma, exp.constraint}, exp.solver);
  return normalized_rmse(report.solution, inst.truth);
}

/// Monte-Carlo cross-validation: each replicate is a fresh instance, every
/// cell is scored against the ground truth of that instance.
inline CvResult covariance_cv(const CovarianceExperiment& exp, const CvGrid& grid) {
  return cv_select(grid, CvMetric::RMSE, [&](double tau, double gamma, std::uint64_t seed) {
    return covariance_rmse(exp, tau, gamma, seed);
  });
}

// ---------------------------------------------------------------------------
// Link prediction

enum class LinkMethod { SPLR, LR, SP, NN, Katz };

inline std::string_view to_string(LinkMethod m) {
  switch (m) {
    case LinkMethod::SPLR: return "splr";
    case LinkMethod::LR: return "lr";
    case LinkMethod::SP: return "sp";
    case LinkMethod::NN: return "nn";
    case LinkMethod::Katz: return "katz";
  }
  return "?";
}

inline bool is_penalized(LinkMethod m) { return m == LinkMethod::SPLR || m == LinkMethod::LR || m == LinkMethod::SP; }

/// Restricts a (tau, gamma) grid to the method: LR fixes gamma = 0, SP fixes tau = 0.
inline CvGrid method_grid(CvGrid grid, LinkMethod m) {
  if (m == LinkMethod::LR) grid.gamma_values = {0.0};
  if (m == LinkMethod::SP) grid.tau_values = {0.0};
  return grid;
}

/// Uniformly chosen round(fraction * n(n-1)/2) upper-triangle pairs.
inline Mask sample_pairs(Eigen::Index n, double fraction, std::uint64_t seed) {
  if (!(fraction > 0.0 && fraction < 1.0)) throw InvalidArgument("holdout fraction must lie in (0, 1)");
  std::vector<std::pair<Eigen::Index, Eigen::Index>> pairs;
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = i + 1; j < n; ++j) pairs.emplace_back(i, j);
  const auto count = static_cast<std::size_t>(std::llround(fraction * static_cast<double>(pairs.size())));
  std::mt19937_64 rng(seed);
  for (std::size_t k = 0; k < count; ++k) {
    std::uniform_int_distribution<std::size_t> pick(k, pairs.size() - 1);
    std::swap(pairs[k], pairs[pick(rng)]);
  }
  Mask m = Mask::Constant(n, n, false);
  for (std::size_t k = 0; k < count; ++k) m(pairs[k].first, pairs[k].second) = true;
  return m;
}

/// Observation with the held-out pairs (and their mirrors) set to 0: hidden
/// links look exactly like absent ones.
inline Mat hide_pairs(const Mat& a, const Mask& pairs) {
  Mat out = a;
  for (Eigen::Index j = 0; j < a.cols(); ++j)
    for (Eigen::Index i = 0; i < a.rows(); ++i)
      if (pairs(i, j)) {
        out(i, j) = 0.0;
        out(j, i) = 0.0;
      }
  return out;
}

/// Penalized denoising estimate of a graph: squared Frobenius loss, unconstrained.
inline Mat denoise_graph(const Mat& a, double tau, double gamma, const SolverConfig& solver) {
  return solve(LossSpec::squared_frobenius(a), {tau, gamma, ConstraintSet::Unconstrained}, solver).solution;
}

struct LinkPredConfig {
  double holdout = 0.1;
  SolverConfig solver;
  KatzParams katz;
};

/// Held-out AUC of the estimate at (tau, gamma): hide a random fraction of
/// pairs, fit on the rest, rank the hidden pairs against the observed labels.
inline double holdout_auc(const Mat& a, double tau, double gamma, std::uint64_t seed, const LinkPredConfig& cfg) {
  const Mask hidden = sample_pairs(a.rows(), cfg.holdout, seed);
  const Mat scores = denoise_graph(hide_pairs(a, hidden), tau, gamma, cfg.solver);
  return auc(scores, a, hidden);
}

inline CvResult linkpred_cv(const Mat& a, const CvGrid& grid, const LinkPredConfig& cfg) {
  return cv_select(grid, CvMetric::AUC, [&](double tau, double gamma, std::uint64_t seed) {
    return holdout_auc(a, tau, gamma, seed, cfg);
  });
}

/// Score matrix of `method` on the observed graph at the given weights
/// (ignored by the NN and Katz baselines).
inline Mat link_scores(const Mat& a, LinkMethod method, double tau, double gamma, const LinkPredConfig& cfg) {
  switch (method) {
    case LinkMethod::NN: return common_neighbors_scores(a);
    case LinkMethod::Katz: return katz_scores(a, cfg.katz);
    case LinkMethod::LR: return denoise_graph(a, tau, 0.0, cfg.solver);
    case LinkMethod::SP: return denoise_graph(a, 0.0, gamma, cfg.solver);
    case LinkMethod::SPLR: return denoise_graph(a, tau, gamma, cfg.solver);
  }
  throw InvalidArgument("unknown link prediction method");
}

struct LinkPredResult {
  LinkMethod method = LinkMethod::SPLR;
  double tau = 0.0;
  double gamma = 0.0;
  Mat scores;
  std::optional<CvResult> cv;
};

/// Selects the weights by held-out AUC (penalized methods only), then scores
/// the full observed graph.
inline LinkPredResult run_link_prediction(const Mat& a, LinkMethod method, const CvGrid& grid,
                                          const LinkPredConfig& cfg) {
  LinkPredResult out;
  out.method = method;
  if (is_penalized(method)) {
    out.cv = linkpred_cv(a, method_grid(grid, method), cfg);
    out.tau = out.cv->best_tau;
    out.gamma = out.cv->best_gamma;
  }
  out.scores = link_scores(a, method, out.tau, out.gamma, cfg);
  return out;
}

// ---------------------------------------------------------------------------
// Synthetic graph denoising study

struct GraphExperiment {
  Eigen::Index n = 100;
  Eigen::Index r_blocks = 5;
  double flip_fraction = 0.1;
  LinkPredConfig link;
};

/// Clean block-clique graph and its edge-flipped observation for one run.
inline SynthInstance graph_instance(const GraphExperiment& exp, std::uint64_t seed) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32), 0x6a7u};
  std::uint32_t words[4];
  seq.generate(words, words + 4);
  const std::uint64_t graph_seed = (static_cast<std::uint64_t>(words[0]) << 32) | words[1];
  const std::uint64_t noise_seed = (static_cast<std::uint64_t>(words[2]) << 32) | words[3];
  GraphNoiseSpec noise;
  noise.mode = GraphNoiseSpec::Mode::EdgeFlip;
  noise.fraction = exp.flip_fraction;
  noise.seed = noise_seed;
  return corrupt(gen_block_graph(exp.n, exp.r_blocks, graph_seed), noise);
}

/// AUC of the scores against the clean graph over all node pairs.
inline double denoising_auc(const Mat& scores, const Mat& clean) {
  return auc(scores, clean, upper_triangle_mask(clean.rows()));
}

/// Validation on independent replicate instances: each cell is scored by the
/// clean-graph AUC of its estimate on fresh draws from the same generator.
inline CvResult graph_replicate_cv(const GraphExperiment& exp, const CvGrid& grid) {
  return cv_select(grid, CvMetric::AUC, [&](double tau, double gamma, std::uint64_t seed) {
    const SynthInstance inst = graph_instance(exp, seed);
    return denoising_auc(denoise_graph(inst.observation, tau, gamma, exp.link.solver), inst.truth);
  });
}

}  // namespace splr
