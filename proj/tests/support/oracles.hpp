#pragma once

// Test-only reference computations. None of these call into the library's
// factorizations or prox operators; they use plain loops in long double.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <random>
#include <utility>
#include <vector>

#include "splr/matrix.hpp"

namespace oracle {

using splr::Mat;
using LMat = std::vector<std::vector<long double>>;

inline LMat to_long(const Mat& m) {
  LMat out(static_cast<std::size_t>(m.rows()), std::vector<long double>(static_cast<std::size_t>(m.cols())));
  for (Eigen::Index i = 0; i < m.rows(); ++i)
    for (Eigen::Index j = 0; j < m.cols(); ++j) out[i][j] = m(i, j);
  return out;
}

inline Mat to_double(const LMat& m) {
  Mat out(static_cast<Eigen::Index>(m.size()), static_cast<Eigen::Index>(m.empty() ? 0 : m[0].size()));
  for (Eigen::Index i = 0; i < out.rows(); ++i)
    for (Eigen::Index j = 0; j < out.cols(); ++j) out(i, j) = static_cast<double>(m[i][j]);
  return out;
}

struct Eig {
  std::vector<long double> values;  // unsorted
  LMat vectors;                     // column k pairs with values[k]
};

/// Cyclic Jacobi rotations on a symmetric matrix.
inline Eig jacobi_eigen(const Mat& sym) {
  const std::size_t n = static_cast<std::size_t>(sym.rows());
  LMat a = to_long(0.5 * (sym + sym.transpose()));
  LMat v(n, std::vector<long double>(n, 0.0L));
  for (std::size_t i = 0; i < n; ++i) v[i][i] = 1.0L;
  for (int sweep = 0; sweep < 100; ++sweep) {
    long double off = 0.0L;
    for (std::size_t p = 0; p < n; ++p)
      for (std::size_t q = p + 1; q < n; ++q) off += a[p][q] * a[p][q];
    if (off < 1e-36L) break;
    for (std::size_t p = 0; p < n; ++p)
      for (std::size_t q = p + 1; q < n; ++q) {
        if (std::fabs(a[p][q]) < 1e-300L) continue;
        const long double theta = (a[q][q] - a[p][p]) / (2.0L * a[p][q]);
        const long double t = (theta >= 0 ? 1.0L : -1.0L) / (std::fabs(theta) + std::sqrt(theta * theta + 1.0L));
        const long double c = 1.0L / std::sqrt(t * t + 1.0L), s = t * c;
        for (std::size_t k = 0; k < n; ++k) {
          const long double akp = a[k][p], akq = a[k][q];
          a[k][p] = c * akp - s * akq;
          a[k][q] = s * akp + c * akq;
        }
        for (std::size_t k = 0; k < n; ++k) {
          const long double apk = a[p][k], aqk = a[q][k];
          a[p][k] = c * apk - s * aqk;
          a[q][k] = s * apk + c * aqk;
        }
        for (std::size_t k = 0; k < n; ++k) {
          const long double vkp = v[k][p], vkq = v[k][q];
          v[k][p] = c * vkp - s * vkq;
          v[k][q] = s * vkp + c * vkq;
        }
      }
  }
  Eig out;
  for (std::size_t i = 0; i < n; ++i) out.values.push_back(a[i][i]);
  out.vectors = std::move(v);
  return out;
}

/// Q diag(f(lambda)) Q^T of the symmetric part.
inline Mat spectral_map(const Mat& sym, const std::function<long double(long double)>& f) {
  const Eig e = jacobi_eigen(sym);
  const std::size_t n = e.values.size();
  LMat out(n, std::vector<long double>(n, 0.0L));
  for (std::size_t k = 0; k < n; ++k) {
    const long double d = f(e.values[k]);
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j) out[i][j] += e.vectors[i][k] * d * e.vectors[j][k];
  }
  return to_double(out);
}

inline Mat psd_projection(const Mat& m) {
  return spectral_map(m, [](long double x) { return std::max(x, 0.0L); });
}

struct Svd {
  LMat u;  // columns normalized where sigma > 0
  std::vector<long double> sigma;
  LMat v;
};

/// One-sided (Hestenes) Jacobi SVD: rotate column pairs of A until orthogonal.
inline Svd jacobi_svd(const Mat& m) {
  const std::size_t rows = static_cast<std::size_t>(m.rows()), cols = static_cast<std::size_t>(m.cols());
  LMat u = to_long(m);
  LMat v(cols, std::vector<long double>(cols, 0.0L));
  for (std::size_t i = 0; i < cols; ++i) v[i][i] = 1.0L;
  for (int sweep = 0; sweep < 100; ++sweep) {
    bool rotated = false;
    for (std::size_t p = 0; p < cols; ++p)
      for (std::size_t q = p + 1; q < cols; ++q) {
        long double alpha = 0, beta = 0, gamma = 0;
        for (std::size_t k = 0; k < rows; ++k) {
          alpha += u[k][p] * u[k][p];
          beta += u[k][q] * u[k][q];
          gamma += u[k][p] * u[k][q];
        }
        if (std::fabs(gamma) <= 1e-30L * std::sqrt(alpha * beta) || gamma == 0) continue;
        rotated = true;
        const long double zeta = (beta - alpha) / (2.0L * gamma);
        const long double t = (zeta >= 0 ? 1.0L : -1.0L) / (std::fabs(zeta) + std::sqrt(1.0L + zeta * zeta));
        const long double c = 1.0L / std::sqrt(1.0L + t * t), s = c * t;
        for (std::size_t k = 0; k < rows; ++k) {
          const long double up = u[k][p], uq = u[k][q];
          u[k][p] = c * up - s * uq;
          u[k][q] = s * up + c * uq;
        }
        for (std::size_t k = 0; k < cols; ++k) {
          const long double vp = v[k][p], vq = v[k][q];
          v[k][p] = c * vp - s * vq;
          v[k][q] = s * vp + c * vq;
        }
      }
    if (!rotated) break;
  }
  Svd out;
  out.sigma.resize(cols);
  for (std::size_t j = 0; j < cols; ++j) {
    long double nrm = 0;
    for (std::size_t k = 0; k < rows; ++k) nrm += u[k][j] * u[k][j];
    nrm = std::sqrt(nrm);
    out.sigma[j] = nrm;
    if (nrm > 0)
      for (std::size_t k = 0; k < rows; ++k) u[k][j] /= nrm;
  }
  out.u = std::move(u);
  out.v = std::move(v);
  return out;
}

inline std::vector<long double> singular_values(const Mat& m) {
  auto s = jacobi_svd(m).sigma;
  std::sort(s.rbegin(), s.rend());
  return s;
}

/// U diag((sigma - tau)_+) V^T.
inline Mat sv_shrink(const Mat& m, double tau) {
  const Svd s = jacobi_svd(m);
  const std::size_t rows = s.u.size(), cols = s.v.size();
  LMat out(rows, std::vector<long double>(cols, 0.0L));
  for (std::size_t k = 0; k < cols; ++k) {
    const long double d = std::max(s.sigma[k] - static_cast<long double>(tau), 0.0L);
    if (d == 0) continue;
    for (std::size_t i = 0; i < rows; ++i)
      for (std::size_t j = 0; j < cols; ++j) out[i][j] += s.u[i][k] * d * s.v[j][k];
  }
  return to_double(out);
}

/// argmin_s 0.5 (s - z)^2 + gamma |s| by a grid of spacing `step` around z,
/// refined by ternary search on the bracketing cell pair.
inline double scalar_l1_prox(double z, double gamma, double step = 1e-3) {
  auto f = [&](long double s) { return 0.5L * (s - z) * (s - z) + gamma * std::fabs(s); };
  const double lo = std::min(z, 0.0) - 1.0, hi = std::max(z, 0.0) + 1.0;
  long double best = lo;
  for (long double s = lo; s <= hi; s += step)
    if (f(s) < f(best)) best = s;
  long double a = best - step, b = best + step;
  for (int it = 0; it < 200; ++it) {
    const long double m1 = a + (b - a) / 3, m2 = b - (b - a) / 3;
    if (f(m1) <= f(m2))
      b = m2;
    else
      a = m1;
  }
  const long double s = 0.5L * (a + b);
  return f(0.0L) <= f(s) ? 0.0 : static_cast<double>(s);
}

inline Mat entrywise_l1_prox(const Mat& z, double gamma) {
  Mat out(z.rows(), z.cols());
  for (Eigen::Index i = 0; i < z.rows(); ++i)
    for (Eigen::Index j = 0; j < z.cols(); ++j) out(i, j) = scalar_l1_prox(z(i, j), gamma);
  return out;
}

/// argmin over the PSD cone of 0.5 ||X - S||_F^2 + tau tr(X) by projected
/// gradient with step 0.5 (contraction factor 1/2 per step).
inline Mat psd_trace_prox_pg(const Mat& s, double tau, int iters = 200) {
  const Mat sym = 0.5 * (s + s.transpose());
  Mat x = Mat::Zero(s.rows(), s.cols());
  const Mat shift = tau * Mat::Identity(s.rows(), s.cols());
  for (int k = 0; k < iters; ++k) {
    const Mat grad = x - sym + shift;
    x = psd_projection(x - 0.5 * grad);
  }
  return x;
}

/// Central differences of f at S along every entry.
inline Mat finite_difference_gradient(const std::function<double(const Mat&)>& f, const Mat& s, double h = 1e-5) {
  Mat g(s.rows(), s.cols());
  Mat probe = s;
  for (Eigen::Index i = 0; i < s.rows(); ++i)
    for (Eigen::Index j = 0; j < s.cols(); ++j) {
      probe(i, j) = s(i, j) + h;
      const double up = f(probe);
      probe(i, j) = s(i, j) - h;
      const double down = f(probe);
      probe(i, j) = s(i, j);
      g(i, j) = (up - down) / (2.0 * h);
    }
  return g;
}

/// Fraction of (positive, negative) pairs ordered correctly, ties 1/2.
inline double brute_force_auc(const Mat& scores, const Mat& labels, const splr::Mask& mask) {
  std::vector<double> pos, neg;
  for (Eigen::Index i = 0; i < scores.rows(); ++i)
    for (Eigen::Index j = 0; j < scores.cols(); ++j)
      if (mask(i, j)) (labels(i, j) == 1.0 ? pos : neg).push_back(scores(i, j));
  long double hits = 0;
  for (double p : pos)
    for (double q : neg) hits += p > q ? 1.0L : (p == q ? 0.5L : 0.0L);
  return static_cast<double>(hits / (static_cast<long double>(pos.size()) * neg.size()));
}

/// Number of k with a(i,k) = a(k,j) = 1.
inline Mat two_path_counts(const Mat& a) {
  const Eigen::Index n = a.rows();
  Mat out = Mat::Zero(n, n);
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = 0; j < n; ++j)
      for (Eigen::Index k = 0; k < n; ++k)
        if (a(i, k) != 0 && a(k, j) != 0) out(i, j) += 1;
  return out;
}

/// sum_{k=1..K} beta^k A^k by naive long double products.
inline Mat katz_series(const Mat& a, double beta, int k_max) {
  const std::size_t n = static_cast<std::size_t>(a.rows());
  const LMat base = to_long(a);
  LMat power = base, sum(n, std::vector<long double>(n, 0.0L));
  long double scale = beta;
  for (int k = 1; k <= k_max; ++k) {
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j) sum[i][j] += scale * power[i][j];
    LMat next(n, std::vector<long double>(n, 0.0L));
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t l = 0; l < n; ++l)
        if (power[i][l] != 0)
          for (std::size_t j = 0; j < n; ++j) next[i][j] += power[i][l] * base[l][j];
    power = std::move(next);
    scale *= beta;
  }
  return to_double(sum);
}

/// Exact binomial coefficient for small arguments.
inline std::uint64_t binomial(std::uint64_t m, std::uint64_t k) {
  std::uint64_t out = 1;
  for (std::uint64_t i = 1; i <= k; ++i) out = out * (m - k + i) / i;  // exact at every step
  return out;
}

inline Mat random_matrix(std::mt19937_64& rng, Eigen::Index rows, Eigen::Index cols, double scale = 1.0) {
  std::normal_distribution<double> g(0.0, scale);
  Mat m(rows, cols);
  for (Eigen::Index j = 0; j < cols; ++j)
    for (Eigen::Index i = 0; i < rows; ++i) m(i, j) = g(rng);
  return m;
}

inline Mat random_symmetric(std::mt19937_64& rng, Eigen::Index n, double scale = 1.0) {
  const Mat m = random_matrix(rng, n, n, scale);
  return 0.5 * (m + m.transpose());
}

inline Mat random_graph(std::mt19937_64& rng, Eigen::Index n, double density) {
  std::bernoulli_distribution edge(density);
  Mat a = Mat::Zero(n, n);
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = i + 1; j < n; ++j)
      if (edge(rng)) a(i, j) = a(j, i) = 1.0;
  return a;
}

}  // namespace oracle
