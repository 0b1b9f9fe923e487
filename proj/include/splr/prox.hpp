#pragma once

// Closed-form proximal operators for the l1 norm, the trace norm, the PSD
// cone, and the trace norm restricted to the PSD cone.

#include <cmath>
#include <string>
#include <string_view>

#include "splr/matrix.hpp"

namespace splr {

enum class ConstraintSet { Unconstrained, PsdCone };

inline std::string_view to_string(ConstraintSet set) {
  return set == ConstraintSet::PsdCone ? "psd" : "none";
}

namespace detail {

inline void require_weight(double w, std::string_view what) {
  if (!(w >= 0.0) || !std::isfinite(w))
    throw InvalidArgument(std::string(what) + ": weight must be finite and nonnegative, got " + std::to_string(w));
}

inline double shrink(double x, double t) {
  const double mag = std::abs(x) - t;
  if (mag <= 0.0) return 0.0;
  return x > 0.0 ? mag : -mag;
}

// Q diag(d) Q^T, made exactly symmetric so downstream fast paths can detect it.
inline Mat sym_reconstruct(const Mat& q, const Vec& d) {
  Mat out = q * d.asDiagonal() * q.transpose();
  return 0.5 * (out + out.transpose());
}

}  // namespace detail

/// ST_gamma(Z) = sgn(Z) o (|Z| - gamma)_+, entrywise. Ties |Z_ij| = gamma map to 0.
inline Mat soft_threshold(const Mat& z, double gamma) {
  detail::require_weight(gamma, "soft_threshold");
  require_finite(z, "soft_threshold");
  if (gamma == 0.0) return z;
  return z.unaryExpr([gamma](double x) { return detail::shrink(x, gamma); });
}

/// SHR_tau(Z) = U diag((sigma - tau)_+) V^T.
///
/// Exactly symmetric input is factored with the symmetric eigensolver
/// (Z = Q diag(lambda) Q^T gives singular values |lambda|), which yields the
/// same operator at a fraction of the cost and keeps the output symmetric.
inline Mat sv_shrink(const Mat& z, double tau) {
  detail::require_weight(tau, "sv_shrink");
  require_finite(z, "sv_shrink");
  if (tau == 0.0 || z.size() == 0) return z;
  if (is_symmetric(z)) {
    const SymEig eig = sym_eig(z);
    const Vec d = eig.values.unaryExpr([tau](double l) { return detail::shrink(l, tau); });
    return detail::sym_reconstruct(eig.vectors, d);
  }
  const SvdFactors f = svd(z);
  const Vec s = (f.singular_values.array() - tau).max(0.0).matrix();
  return f.left * s.asDiagonal() * f.right.transpose();
}

/// Frobenius projection onto the symmetric PSD cone. Acts on the symmetric
/// part (Z + Z^T)/2 and clips negative eigenvalues.
inline Mat project_psd(const Mat& z) {
  require_square(z, "project_psd");
  if (z.size() == 0) return z;
  const SymEig eig = sym_eig(z);
  return detail::sym_reconstruct(eig.vectors, eig.values.cwiseMax(0.0));
}

/// prox of tau*||.||_* + indicator(PSD): equals project_psd(S - tau I).
inline Mat prox_trace_psd(const Mat& s, double tau) {
  require_square(s, "prox_trace_psd");
  detail::require_weight(tau, "prox_trace_psd");
  Mat shifted = s;
  shifted.diagonal().array() -= tau;
  return project_psd(shifted);
}

inline Mat project_constraint(const Mat& z, ConstraintSet set) {
  if (set == ConstraintSet::Unconstrained) return z;
  return project_psd(z);
}

/// Smallest eigenvalue of the symmetric part.
inline double min_sym_eigenvalue(const Mat& z) {
  const Vec ev = sym_eigenvalues(z);
  return ev.size() ? ev(ev.size() - 1) : 0.0;
}

}  // namespace splr
