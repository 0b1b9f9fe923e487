#pragma once

// Evaluation metrics and the (tau, gamma) cross-validation grid search.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numeric>
#include <random>
#include <string>
#include <utility>
#include <vector>

#include "splr/losses.hpp"
#include "splr/matrix.hpp"

namespace splr {

/// ||estimate - truth||_F / ||truth||_F.
inline double normalized_rmse(const Mat& estimate, const Mat& truth) {
  require_same_shape(estimate, truth, "normalized_rmse");
  const double scale = truth.norm();
  if (scale == 0.0) throw InvalidArgument("normalized_rmse: truth matrix is zero");
  return (estimate - truth).norm() / scale;
}

/// Strict upper triangle (i < j): the unordered node pairs of a graph.
inline Mask upper_triangle_mask(Eigen::Index n) {
  Mask m = Mask::Constant(n, n, false);
  for (Eigen::Index j = 0; j < n; ++j)
    for (Eigen::Index i = 0; i < j; ++i) m(i, j) = true;
  return m;
}

/// Area under the ROC curve over the masked entries, in Mann-Whitney form:
/// P(score of a random positive > score of a random negative), ties count 1/2.
inline double auc(const Mat& scores, const Mat& labels, const Mask& eval_mask) {
  require_same_shape(scores, labels, "auc");
  require_same_shape(scores, eval_mask, "auc");
  require_finite(scores, "auc");
  if (!is_binary(labels)) throw InvalidArgument("auc: labels must be binary");

  std::vector<std::pair<double, bool>> items;
  items.reserve(static_cast<std::size_t>(eval_mask.count()));
  for (Eigen::Index j = 0; j < scores.cols(); ++j)
    for (Eigen::Index i = 0; i < scores.rows(); ++i)
      if (eval_mask(i, j)) items.emplace_back(scores(i, j), labels(i, j) == 1.0);

  std::sort(items.begin(), items.end(), [](const auto& a, const auto& b) { return a.first < b.first; });
  double positives = 0.0;
  double positive_rank_sum = 0.0;
  for (std::size_t lo = 0; lo < items.size();) {
    std::size_t hi = lo;
    while (hi < items.size() && items[hi].first == items[lo].first) ++hi;
    const double mid_rank = 0.5 * static_cast<double>(lo + 1 + hi);  // average of ranks lo+1..hi
    for (std::size_t k = lo; k < hi; ++k)
      if (items[k].second) {
        positives += 1.0;
        positive_rank_sum += mid_rank;
      }
    lo = hi;
  }
  const double negatives = static_cast<double>(items.size()) - positives;
  if (positives == 0.0 || negatives == 0.0)
    throw InvalidArgument("auc: evaluation mask must select at least one positive and one negative");
  return (positive_rank_sum - positives * (positives + 1.0) / 2.0) / (positives * negatives);
}

struct SupportStats {
  double precision = 1.0;
  double recall = 1.0;
  Mask support;  // |estimate| > threshold
};

/// Support of the thresholded estimate against the nonzero pattern of truth.
/// An empty prediction has precision 1; an empty truth support has recall 1.
inline SupportStats support_recovery(const Mat& estimate, const Mat& truth, double threshold) {
  require_same_shape(estimate, truth, "support_recovery");
  if (!(threshold >= 0.0)) throw InvalidArgument("support_recovery: threshold must be nonnegative");
  SupportStats out;
  out.support = estimate.array().abs() > threshold;
  const Mask actual = truth.array() != 0.0;
  const double predicted = static_cast<double>(out.support.count());
  const double relevant = static_cast<double>(actual.count());
  const double hits = static_cast<double>((out.support && actual).count());
  out.precision = predicted > 0.0 ? hits / predicted : 1.0;
  out.recall = relevant > 0.0 ? hits / relevant : 1.0;
  return out;
}

struct CvGrid {
  std::vector<double> tau_values;
  std::vector<double> gamma_values;
  int replicates = 1;
  std::uint64_t seed = 0;

  void validate() const {
    if (tau_values.empty() || gamma_values.empty()) throw InvalidArgument("CvGrid: value lists must be nonempty");
    if (replicates < 1) throw InvalidArgument("CvGrid: replicates must be positive");
    for (double v : tau_values)
      if (!(v >= 0.0)) throw InvalidArgument("CvGrid: tau values must be nonnegative");
    for (double v : gamma_values)
      if (!(v >= 0.0)) throw InvalidArgument("CvGrid: gamma values must be nonnegative");
  }
};

enum class CvMetric { RMSE, AUC };

inline std::string_view to_string(CvMetric m) { return m == CvMetric::RMSE ? "rmse" : "auc"; }

struct CvResult {
  double best_tau = 0.0;
  double best_gamma = 0.0;
  Eigen::Index best_tau_index = 0;
  Eigen::Index best_gamma_index = 0;
  double best_score = 0.0;
  Mat surface;         // mean metric, rows = tau values, cols = gamma values
  Mat surface_stderr;  // standard error of the mean over replicates (0 for one replicate)
  /// per_replicate[r](i, j): metric of replicate r at cell (i, j).
  std::vector<Mat> per_replicate;
};

/// Seed of replicate `r`. Every cell sees the same replicate seeds, so the
/// comparison across cells uses common random numbers.
inline std::uint64_t replicate_seed(std::uint64_t grid_seed, int r) {
  std::seed_seq seq{static_cast<std::uint32_t>(grid_seed), static_cast<std::uint32_t>(grid_seed >> 32),
                    static_cast<std::uint32_t>(r)};
  std::uint32_t words[2];
  seq.generate(words, words + 2);
  return (static_cast<std::uint64_t>(words[0]) << 32) | words[1];
}

/// Evaluates `cell_score(tau, gamma, replicate_seed)` on every cell and
/// replicate, averages per cell and returns the best cell (minimum for RMSE,
/// maximum for AUC). Ties go to the smaller tau, then the smaller gamma.
/// A failure in any cell is rethrown with the cell coordinates prepended.
template <class CellScore>
CvResult cv_select(const CvGrid& grid, CvMetric metric, CellScore&& cell_score) {
  grid.validate();
  const auto nt = static_cast<Eigen::Index>(grid.tau_values.size());
  const auto ng = static_cast<Eigen::Index>(grid.gamma_values.size());

  CvResult out;
  out.per_replicate.assign(static_cast<std::size_t>(grid.replicates), Mat::Zero(nt, ng));
  for (int r = 0; r < grid.replicates; ++r) {
    const std::uint64_t seed = replicate_seed(grid.seed, r);
    for (Eigen::Index i = 0; i < nt; ++i)
      for (Eigen::Index j = 0; j < ng; ++j) {
        const double tau = grid.tau_values[static_cast<std::size_t>(i)];
        const double gamma = grid.gamma_values[static_cast<std::size_t>(j)];
        const std::string where = "cv cell (tau=" + std::to_string(tau) + ", gamma=" + std::to_string(gamma) +
                                  ", replicate=" + std::to_string(r) + "): ";
        double value;
        try {
          value = cell_score(tau, gamma, seed);
        } catch (const NumericalError& e) {
          throw NumericalError(where + e.what());
        } catch (const InvalidArgument& e) {
          throw InvalidArgument(where + e.what());
        } catch (const Error& e) {
          throw Error(where + e.what());
        }
        out.per_replicate[static_cast<std::size_t>(r)](i, j) = value;
      }
  }

  const double reps = static_cast<double>(grid.replicates);
  out.surface = Mat::Zero(nt, ng);
  for (const Mat& m : out.per_replicate) out.surface += m;
  out.surface /= reps;
  out.surface_stderr = Mat::Zero(nt, ng);
  if (grid.replicates > 1) {
    for (const Mat& m : out.per_replicate) out.surface_stderr += (m - out.surface).cwiseAbs2();
    out.surface_stderr = (out.surface_stderr / (reps - 1.0)).cwiseSqrt() / std::sqrt(reps);
  }

  bool have = false;
  for (Eigen::Index i = 0; i < nt; ++i)
    for (Eigen::Index j = 0; j < ng; ++j) {
      const double v = out.surface(i, j);
      const double tau = grid.tau_values[static_cast<std::size_t>(i)];
      const double gamma = grid.gamma_values[static_cast<std::size_t>(j)];
      bool take = !have;
      if (have) {
        const bool better = metric == CvMetric::RMSE ? v < out.best_score : v > out.best_score;
        const bool tie = v == out.best_score;
        take = better || (tie && (tau < out.best_tau || (tau == out.best_tau && gamma < out.best_gamma)));
      }
      if (take) {
        have = true;
        out.best_score = v;
        out.best_tau = tau;
        out.best_gamma = gamma;
        out.best_tau_index = i;
        out.best_gamma_index = j;
      }
    }
  return out;
}

}  // namespace splr
