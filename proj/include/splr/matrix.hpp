#pragma once

// Dense matrix type, the matrix norms used by the estimator, and thin
// wrappers around the SVD / symmetric eigendecomposition.

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <functional>
#include <string>
#include <string_view>

#include "splr/error.hpp"

namespace splr {

using Mat = Eigen::MatrixXd;
using Vec = Eigen::VectorXd;
/// Boolean matrix selecting entries (observed edges, evaluation pairs, supports).
using Mask = Eigen::Array<bool, Eigen::Dynamic, Eigen::Dynamic>;

/// Singular values below this fraction of the largest one count as zero in rank decisions.
inline constexpr double kRankRelTol = 1e-12;

enum class NormKind { L1, Trace, Frobenius, Operator, EntrywiseMax, SparsityIndex };

inline std::string_view to_string(NormKind kind) {
  switch (kind) {
    case NormKind::L1: return "l1";
    case NormKind::Trace: return "trace";
    case NormKind::Frobenius: return "frobenius";
    case NormKind::Operator: return "operator";
    case NormKind::EntrywiseMax: return "max";
    case NormKind::SparsityIndex: return "l0";
  }
  return "?";
}

inline void require_finite(const Mat& m, std::string_view what) {
  if (!m.allFinite()) throw InvalidArgument(std::string(what) + ": matrix has non-finite entries");
}

inline void require_square(const Mat& m, std::string_view what) {
  if (m.rows() != m.cols())
    throw DimensionMismatch(std::string(what) + ": expected a square matrix, got " +
                            std::to_string(m.rows()) + "x" + std::to_string(m.cols()));
}

inline void require_same_shape(const Mat& a, const Mat& b, std::string_view what) {
  if (a.rows() != b.rows() || a.cols() != b.cols())
    throw DimensionMismatch(std::string(what) + ": shape " + std::to_string(a.rows()) + "x" +
                            std::to_string(a.cols()) + " vs " + std::to_string(b.rows()) + "x" +
                            std::to_string(b.cols()));
}

inline void require_same_shape(const Mat& a, const Mask& b, std::string_view what) {
  if (a.rows() != b.rows() || a.cols() != b.cols())
    throw DimensionMismatch(std::string(what) + ": mask shape does not match matrix shape");
}

inline bool is_symmetric(const Mat& m) {
  if (m.rows() != m.cols()) return false;
  for (Eigen::Index j = 0; j < m.cols(); ++j)
    for (Eigen::Index i = j + 1; i < m.rows(); ++i)
      if (m(i, j) != m(j, i)) return false;
  return true;
}

inline Mat symmetric_part(const Mat& m) {
  require_square(m, "symmetric_part");
  return 0.5 * (m + m.transpose());
}

/// Frobenius inner product <A, B> = sum_ij A_ij B_ij.
inline double inner(const Mat& a, const Mat& b) {
  require_same_shape(a, b, "inner");
  return a.cwiseProduct(b).sum();
}

struct SvdFactors {
  Mat left;             // n x k, orthonormal columns
  Vec singular_values;  // nonincreasing, >= 0
  Mat right;            // m x k, orthonormal columns

  Mat reconstruct() const { return left * singular_values.asDiagonal() * right.transpose(); }
};

struct SymEig {
  Vec values;   // nonincreasing
  Mat vectors;  // orthonormal columns, vectors.col(i) pairs with values(i)

  Mat reconstruct() const { return vectors * values.asDiagonal() * vectors.transpose(); }
};

/// Thin SVD, singular values sorted nonincreasing.
inline SvdFactors svd(const Mat& m) {
  require_finite(m, "svd");
  if (m.size() == 0) throw InvalidArgument("svd: empty matrix");
  Eigen::BDCSVD<Mat> solver(m, Eigen::ComputeThinU | Eigen::ComputeThinV);
  if (solver.info() != Eigen::Success) throw FactorizationError("svd: factorization did not converge");
  return {solver.matrixU(), solver.singularValues(), solver.matrixV()};
}

/// Eigendecomposition of the symmetric part (M + M^T)/2, eigenvalues nonincreasing.
inline SymEig sym_eig(const Mat& m) {
  require_square(m, "sym_eig");
  require_finite(m, "sym_eig");
  if (m.size() == 0) throw InvalidArgument("sym_eig: empty matrix");
  Eigen::SelfAdjointEigenSolver<Mat> solver(symmetric_part(m));
  if (solver.info() != Eigen::Success) throw FactorizationError("sym_eig: factorization did not converge");
  // Eigen returns ascending order.
  return {solver.eigenvalues().reverse(), solver.eigenvectors().rowwise().reverse()};
}

/// Eigenvalues only of the symmetric part, nonincreasing.
inline Vec sym_eigenvalues(const Mat& m) {
  require_square(m, "sym_eigenvalues");
  require_finite(m, "sym_eigenvalues");
  if (m.size() == 0) return Vec();
  Eigen::SelfAdjointEigenSolver<Mat> solver(symmetric_part(m), Eigen::EigenvaluesOnly);
  if (solver.info() != Eigen::Success) throw FactorizationError("sym_eigenvalues: factorization did not converge");
  return solver.eigenvalues().reverse();
}

/// Singular values only, nonincreasing. Exactly symmetric input goes through
/// the (cheaper) symmetric eigensolver: sigma_i = |lambda_i|.
inline Vec singular_values(const Mat& m) {
  require_finite(m, "singular_values");
  if (m.size() == 0) return Vec();
  if (is_symmetric(m)) {
    Eigen::SelfAdjointEigenSolver<Mat> solver(m, Eigen::EigenvaluesOnly);
    if (solver.info() != Eigen::Success) throw FactorizationError("singular_values: factorization did not converge");
    Vec s = solver.eigenvalues().cwiseAbs();
    std::sort(s.begin(), s.end(), std::greater<>());
    return s;
  }
  Eigen::BDCSVD<Mat> solver(m);
  if (solver.info() != Eigen::Success) throw FactorizationError("singular_values: factorization did not converge");
  return solver.singularValues();
}

/// Number of singular values above kRankRelTol * sigma_max.
inline Eigen::Index numerical_rank(const Vec& sigma) {
  if (sigma.size() == 0) return 0;
  const double cutoff = kRankRelTol * sigma.maxCoeff();
  return static_cast<Eigen::Index>((sigma.array() > cutoff).count());
}

inline Eigen::Index numerical_rank(const Mat& m) { return numerical_rank(singular_values(m)); }

/// Exact count of nonzero entries.
inline Eigen::Index sparsity_index(const Mat& m) { return static_cast<Eigen::Index>((m.array() != 0.0).count()); }

inline double norm(const Mat& m, NormKind kind) {
  require_finite(m, "norm");
  if (m.size() == 0) return 0.0;
  switch (kind) {
    case NormKind::L1: return m.cwiseAbs().sum();
    case NormKind::Trace: return singular_values(m).sum();
    case NormKind::Frobenius: return m.norm();
    case NormKind::Operator: return singular_values(m)(0);
    case NormKind::EntrywiseMax: return m.cwiseAbs().maxCoeff();
    case NormKind::SparsityIndex: return static_cast<double>(sparsity_index(m));
  }
  throw InvalidArgument("norm: unknown norm kind");
}

}  // namespace splr
