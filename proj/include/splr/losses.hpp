#pragma once

// Data-fitting losses l(S, A) with the value / gradient / Lipschitz contract
// the splitting solvers consume, plus the zero-one link-prediction losses
// used for evaluation.

#include <optional>
#include <string>
#include <string_view>
#include <utility>

#include "splr/matrix.hpp"

namespace splr {

enum class LossKind { SquaredFrobenius, SmoothedHinge };

inline std::string_view to_string(LossKind kind) {
  return kind == LossKind::SquaredFrobenius ? "squared_frobenius" : "smoothed_hinge";
}

inline bool is_binary(const Mat& a) {
  return (a.array() == 0.0 || a.array() == 1.0).all();
}

/// A loss together with its observation A.
///
/// SquaredFrobenius: l(S) = ||S - A||_F^2.
/// SmoothedHinge:    l(S) = (1/|E|) sum_{(i,j) in E} max(0, 1 - (2A_ij - 1) S_ij)^2,
///                   E the observed mask, A binary.
class LossSpec {
 public:
  static LossSpec squared_frobenius(Mat target) {
    require_finite(target, "squared_frobenius");
    return LossSpec(LossKind::SquaredFrobenius, std::move(target), Mask());
  }

  static LossSpec smoothed_hinge(Mat target, Mask observed) {
    require_finite(target, "smoothed_hinge");
    require_same_shape(target, observed, "smoothed_hinge");
    if (!is_binary(target)) throw InvalidArgument("smoothed_hinge: target must be binary (entries in {0,1})");
    if (observed.count() == 0) throw InvalidArgument("smoothed_hinge: observed mask is empty");
    return LossSpec(LossKind::SmoothedHinge, std::move(target), std::move(observed));
  }

  LossKind kind() const noexcept { return kind_; }
  const Mat& target() const noexcept { return target_; }
  const Mask& mask() const noexcept { return mask_; }
  Eigen::Index rows() const noexcept { return target_.rows(); }
  Eigen::Index cols() const noexcept { return target_.cols(); }

  /// Gradient Lipschitz constant. For the hinge this is the per-entry bound 2,
  /// conservative by a factor |E| for the averaged loss.
  double lipschitz() const noexcept { return 2.0; }

 private:
  LossSpec(LossKind kind, Mat target, Mask mask)
      : kind_(kind), target_(std::move(target)), mask_(std::move(mask)) {
    if (kind_ == LossKind::SmoothedHinge) observed_ = static_cast<double>(mask_.count());
  }

  LossKind kind_;
  Mat target_;
  Mask mask_;
  double observed_ = 0.0;

  friend double loss_value(const LossSpec&, const Mat&);
  friend Mat loss_gradient(const LossSpec&, const Mat&);
};

struct LossEval {
  double value = 0.0;
  Mat gradient;
  double lipschitz = 0.0;
};

inline double loss_value(const LossSpec& spec, const Mat& s) {
  require_same_shape(s, spec.target_, "loss_value");
  if (spec.kind_ == LossKind::SquaredFrobenius) return (s - spec.target_).squaredNorm();
  const auto margin = (2.0 * spec.target_.array() - 1.0) * s.array();
  const auto slack = (1.0 - margin).max(0.0);
  return spec.mask_.select(slack.square(), 0.0).sum() / spec.observed_;
}

inline Mat loss_gradient(const LossSpec& spec, const Mat& s) {
  require_same_shape(s, spec.target_, "loss_gradient");
  if (spec.kind_ == LossKind::SquaredFrobenius) return 2.0 * (s - spec.target_);
  const auto sign = 2.0 * spec.target_.array() - 1.0;
  const auto slack = (1.0 - sign * s.array()).max(0.0);
  // d/dS_ij max(0, 1 - y S_ij)^2 = -2 y max(0, 1 - y S_ij)
  return spec.mask_.select(-2.0 * sign * slack / spec.observed_, 0.0).matrix();
}

inline LossEval loss_eval(const LossSpec& spec, const Mat& s) {
  require_finite(s, "loss_eval");
  return {loss_value(spec, s), loss_gradient(spec, s), spec.lipschitz()};
}

/// Fraction of entries (over `mask`, or all entries when absent) where
/// (A_ij - 1/2) * S_ij <= 0. A product of exactly zero counts as an error.
inline double zero_one_loss(const Mat& s, const Mat& a, const std::optional<Mask>& mask = std::nullopt) {
  require_same_shape(s, a, "zero_one_loss");
  if (!is_binary(a)) throw InvalidArgument("zero_one_loss: labels must be binary");
  const auto wrong = ((a.array() - 0.5) * s.array() <= 0.0);
  if (!mask) {
    if (s.size() == 0) throw InvalidArgument("zero_one_loss: empty matrix");
    return static_cast<double>(wrong.count()) / static_cast<double>(s.size());
  }
  require_same_shape(s, *mask, "zero_one_loss");
  const auto selected = mask->count();
  if (selected == 0) throw InvalidArgument("zero_one_loss: empty mask");
  return static_cast<double>((wrong && *mask).count()) / static_cast<double>(selected);
}

}  // namespace splr
