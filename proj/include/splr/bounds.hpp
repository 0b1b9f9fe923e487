#pragma once

// Oracle inequality and link-prediction generalization bounds. Counting
// quantities are handled in log space so they stay finite for large n.

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>
#include <vector>

#include "splr/matrix.hpp"

namespace splr {

struct BoundInputs {
  double n = 1;               // matrix dimension
  double r = 1;               // rank budget
  double s = 1;               // sparsity budget ||U||_0 + ||V||_0
  double e_count = 1;         // observed entries |E|
  double delta = 0.05;        // confidence parameter
  double empirical_loss = 0;  // l_E(S, A)

  void validate() const {
    if (!(n >= 1)) throw InvalidArgument("bounds: n must be >= 1");
    if (!(r >= 1 && r <= n)) throw InvalidArgument("bounds: need 1 <= r <= n");
    if (!(e_count >= 1)) throw InvalidArgument("bounds: |E| must be >= 1");
    if (!(delta > 0 && delta < 1)) throw InvalidArgument("bounds: delta must lie in (0, 1)");
    if (!(empirical_loss >= 0 && empirical_loss <= 1)) throw InvalidArgument("bounds: empirical loss must lie in [0, 1]");
  }
};

/// log Delta(n, r) = 2nr log(8en/r): log-count of sign patterns of rank-r matrices.
inline double log_delta(double n, double r) {
  return 2.0 * n * r * (std::log(8.0) + 1.0 + std::log(n) - std::log(r));
}

/// log C(m, k) through log-gamma.
inline double log_binomial(double m, double k) {
  return std::lgamma(m + 1.0) - std::lgamma(k + 1.0) - std::lgamma(m - k + 1.0);
}

/// log Gamma(n, r, s) = s log(16 e n^2 / s) + log C(2nr, s): log-count of sign
/// patterns of UV^T with ||U||_0 + ||V||_0 <= s.
inline double log_gamma_count(double n, double r, double s) {
  if (!(s >= 1)) throw InvalidArgument("log_gamma_count: s must be >= 1");
  if (s > 2.0 * n * r) throw InvalidArgument("log_gamma_count: s must not exceed 2nr");
  return s * (std::log(16.0) + 1.0 + 2.0 * std::log(n) - std::log(s)) + log_binomial(2.0 * n * r, s);
}

namespace detail {
inline double slack(double log_count, double delta, double e_count) {
  return std::sqrt((log_count - std::log(delta)) / (2.0 * e_count));
}
}  // namespace detail

/// l_E + sqrt((log Delta(n, r) - log delta) / (2|E|)).
inline double gen_bound_lowrank(const BoundInputs& in) {
  in.validate();
  return in.empirical_loss + detail::slack(log_delta(in.n, in.r), in.delta, in.e_count);
}

/// l_E + sqrt((log Gamma(n, r, s) - log delta) / (2|E|)).
inline double gen_bound_sparse_lowrank(const BoundInputs& in) {
  in.validate();
  if (!(in.s >= 1 && in.s <= 2.0 * in.n * in.r)) throw InvalidArgument("bounds: need 1 <= s <= 2nr");
  return in.empirical_loss + detail::slack(log_gamma_count(in.n, in.r, in.s), in.delta, in.e_count);
}

/// log Delta(n, r_n) - log Gamma(n, r_n, s_n) with r_n = round(beta n),
/// s_n = round(alpha n), over an increasing grid of n.
inline std::vector<double> prop2_divergence_check(double beta, double alpha, const std::vector<double>& n_grid) {
  if (!(beta > 0 && beta <= 1)) throw InvalidArgument("prop2: beta must lie in (0, 1]");
  if (!(alpha > 0)) throw InvalidArgument("prop2: alpha must be positive");
  if (!std::is_sorted(n_grid.begin(), n_grid.end(), [](double a, double b) { return a <= b; }))
    throw InvalidArgument("prop2: n grid must be strictly increasing");
  std::vector<double> out;
  out.reserve(n_grid.size());
  for (double n : n_grid) {
    const double r = std::round(beta * n);
    const double s = std::round(alpha * n);
    if (r < 1 || s < 1) throw InvalidArgument("prop2: n=" + std::to_string(n) + " gives r_n or s_n below 1");
    if (s > 2.0 * n * r) throw InvalidArgument("prop2: n=" + std::to_string(n) + " violates s_n <= 2 n r_n");
    out.push_back(log_delta(n, r) - log_gamma_count(n, r, s));
  }
  return out;
}

/// min{ 2 tau ||S0||_* + 2 gamma ||S0||_1, (tau sqrt(rank S0) (sqrt2 + 1)/2 + gamma sqrt(||S0||_0))^2 }.
inline double oracle_bound(const Mat& s0, double tau, double gamma) {
  if (!(tau >= 0) || !(gamma >= 0)) throw InvalidArgument("oracle_bound: weights must be nonnegative");
  require_finite(s0, "oracle_bound");
  const Vec sigma = singular_values(s0);
  const double rank = static_cast<double>(numerical_rank(sigma));
  const double nnz = static_cast<double>(sparsity_index(s0));
  const double convex = 2.0 * tau * sigma.sum() + 2.0 * gamma * s0.cwiseAbs().sum();
  const double combinatorial = tau * std::sqrt(rank) * (std::numbers::sqrt2 + 1.0) / 2.0 + gamma * std::sqrt(nnz);
  return std::min(convex, combinatorial * combinatorial);
}

}  // namespace splr
