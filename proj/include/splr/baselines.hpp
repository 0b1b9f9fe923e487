#pragma once

// Link-prediction baselines: common neighbours and the Katz path index.

#include <cmath>
#include <string>

#include "splr/matrix.hpp"

namespace splr {

namespace detail {

inline void require_graph(const Mat& a, const char* what) {
  require_square(a, what);
  if (!(a.array() == 0.0 || a.array() == 1.0).all())
    throw InvalidArgument(std::string(what) + ": adjacency must be binary");
  if (!is_symmetric(a)) throw InvalidArgument(std::string(what) + ": adjacency must be symmetric");
}

}  // namespace detail

/// Entry (i,j) counts the common neighbours of i and j, i.e. A^2.
inline Mat common_neighbors_scores(const Mat& a) {
  detail::require_graph(a, "common_neighbors_scores");
  return a * a;
}

struct KatzParams {
  double beta = 0.05;
  int max_path_length = 20;
  /// Use (I - beta A)^{-1} - I instead of the truncated series.
  bool closed_form = false;
};

/// sum_{k=1..K} beta^k A^k, or (I - beta A)^{-1} - I in closed form.
inline Mat katz_scores(const Mat& a, const KatzParams& params = {}) {
  detail::require_graph(a, "katz_scores");
  if (!(params.beta > 0.0) || !std::isfinite(params.beta)) throw InvalidArgument("katz_scores: beta must be positive");
  const Eigen::Index n = a.rows();
  if (params.closed_form) {
    const double radius = n ? sym_eigenvalues(a).cwiseAbs().maxCoeff() : 0.0;
    if (params.beta * radius >= 1.0)
      throw NumericalError("katz_scores: series diverges, beta * spectral radius = " +
                           std::to_string(params.beta * radius) + " >= 1");
    const Mat m = Mat::Identity(n, n) - params.beta * a;
    Mat out = m.ldlt().solve(Mat::Identity(n, n));
    out.diagonal().array() -= 1.0;
    return 0.5 * (out + out.transpose());
  }
  if (params.max_path_length < 1) throw InvalidArgument("katz_scores: max_path_length must be >= 1");
  Mat term = params.beta * a;
  Mat out = term;
  for (int k = 2; k <= params.max_path_length; ++k) {
    term = params.beta * (term * a);
    out += term;
  }
  return 0.5 * (out + out.transpose());
}

}  // namespace splr
