#pragma once

// Seeded synthetic instances: block-diagonal covariance with a noisy
// empirical estimate, block-clique graphs, and graph corruption models.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <random>
#include <string>
#include <utility>
#include <vector>

#include "splr/losses.hpp"
#include "splr/matrix.hpp"

namespace splr {

using Index = Eigen::Index;

struct BlockCovSpec {
  Index n = 100;
  Index r_blocks = 5;
  Index n_samples = 20;
  double noise_sigma = 0.6;
  std::uint64_t seed = 0;
};

struct GraphNoiseSpec {
  enum class Mode { UniformEntry, EdgeFlip };
  Mode mode = Mode::EdgeFlip;
  double fraction = 0.1;
  double eta = 0.0;  // UniformEntry only
  std::uint64_t seed = 0;
};

struct SynthInstance {
  Mat truth;
  Mat observation;
  /// Block offsets: block b spans [block_bounds[b], block_bounds[b+1]).
  std::vector<Index> block_bounds;
  /// Corrupted upper-triangle positions (i < j), sorted.
  std::vector<std::pair<Index, Index>> corrupted;
};

/// r_blocks random block sizes summing to n: r-1 distinct cut points drawn
/// uniformly from {1, ..., n-1}.
template <class Rng>
std::vector<Index> random_block_bounds(Index n, Index r_blocks, Rng& rng) {
  if (n < 1) throw InvalidArgument("block sizes: n must be positive");
  if (r_blocks < 1 || r_blocks > n)
    throw InvalidArgument("block sizes: need 1 <= r_blocks <= n, got r_blocks=" + std::to_string(r_blocks) +
                          ", n=" + std::to_string(n));
  std::vector<Index> candidates(static_cast<std::size_t>(n - 1));
  for (Index i = 0; i < n - 1; ++i) candidates[static_cast<std::size_t>(i)] = i + 1;
  // Partial Fisher-Yates.
  for (Index k = 0; k < r_blocks - 1; ++k) {
    std::uniform_int_distribution<Index> pick(k, n - 2);
    std::swap(candidates[static_cast<std::size_t>(k)], candidates[static_cast<std::size_t>(pick(rng))]);
  }
  std::vector<Index> bounds(candidates.begin(), candidates.begin() + (r_blocks - 1));
  std::sort(bounds.begin(), bounds.end());
  bounds.insert(bounds.begin(), 0);
  bounds.push_back(n);
  return bounds;
}

/// Sigma = blockdiag(v_b v_b^T) with v_b ~ U[-1,1]^{s_b}; the observation is
/// the empirical covariance (1/N) sum x x^T of N draws x ~ N(0, Sigma), plus
/// i.i.d. N(0, sigma^2) on every entry, then symmetrized.
inline SynthInstance gen_block_covariance(const BlockCovSpec& spec) {
  if (spec.n_samples < 1) throw InvalidArgument("gen_block_covariance: n_samples must be positive");
  if (!(spec.noise_sigma >= 0.0)) throw InvalidArgument("gen_block_covariance: noise_sigma must be nonnegative");
  std::mt19937_64 rng(spec.seed);
  SynthInstance inst;
  inst.block_bounds = random_block_bounds(spec.n, spec.r_blocks, rng);

  const Index n = spec.n;
  std::uniform_real_distribution<double> unif(-1.0, 1.0);
  // Columns of `factors` are the block vectors, zero outside their block.
  Mat factors = Mat::Zero(n, spec.r_blocks);
  for (Index b = 0; b < spec.r_blocks; ++b)
    for (Index i = inst.block_bounds[static_cast<std::size_t>(b)]; i < inst.block_bounds[static_cast<std::size_t>(b + 1)]; ++i)
      factors(i, b) = unif(rng);
  inst.truth = factors * factors.transpose();

  // x = sum_b z_b v_b with z ~ N(0, I_r) has covariance Sigma exactly.
  std::normal_distribution<double> gauss(0.0, 1.0);
  Mat z(spec.r_blocks, spec.n_samples);
  for (Index j = 0; j < z.cols(); ++j)
    for (Index i = 0; i < z.rows(); ++i) z(i, j) = gauss(rng);
  const Mat x = factors * z;
  Mat a = (x * x.transpose()) / static_cast<double>(spec.n_samples);

  if (spec.noise_sigma > 0.0) {
    for (Index j = 0; j < n; ++j)
      for (Index i = 0; i < n; ++i) a(i, j) += spec.noise_sigma * gauss(rng);
  }
  inst.observation = 0.5 * (a + a.transpose());
  return inst;
}

/// Union of cliques on random consecutive blocks; binary, symmetric, zero diagonal.
inline SynthInstance gen_block_graph(Index n, Index r_blocks, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  SynthInstance inst;
  inst.block_bounds = random_block_bounds(n, r_blocks, rng);
  inst.truth = Mat::Zero(n, n);
  for (std::size_t b = 0; b + 1 < inst.block_bounds.size(); ++b) {
    const Index lo = inst.block_bounds[b];
    const Index len = inst.block_bounds[b + 1] - lo;
    inst.truth.block(lo, lo, len, len).setOnes();
  }
  inst.truth.diagonal().setZero();
  inst.observation = inst.truth;
  return inst;
}

/// Corrupts round(fraction * n(n-1)/2) upper-triangle pairs chosen uniformly
/// without replacement, mirrored to keep the matrix symmetric; the diagonal
/// is never touched. UniformEntry adds U[0, eta]; EdgeFlip toggles 0 <-> 1.
inline SynthInstance corrupt(const SynthInstance& instance, const GraphNoiseSpec& noise) {
  const Mat& obs = instance.observation;
  require_square(obs, "corrupt");
  if (!(noise.fraction >= 0.0 && noise.fraction <= 1.0)) throw InvalidArgument("corrupt: fraction must lie in [0, 1]");
  if (noise.mode == GraphNoiseSpec::Mode::UniformEntry && !(noise.eta >= 0.0))
    throw InvalidArgument("corrupt: eta must be nonnegative");
  if (noise.mode == GraphNoiseSpec::Mode::EdgeFlip && !is_binary(obs))
    throw InvalidArgument("corrupt: edge flips need a binary observation");

  const Index n = obs.rows();
  std::vector<std::pair<Index, Index>> pairs;
  pairs.reserve(static_cast<std::size_t>(n * (n - 1) / 2));
  for (Index i = 0; i < n; ++i)
    for (Index j = i + 1; j < n; ++j) pairs.emplace_back(i, j);
  const auto count = static_cast<std::size_t>(std::llround(noise.fraction * static_cast<double>(pairs.size())));

  std::mt19937_64 rng(noise.seed);
  for (std::size_t k = 0; k < count; ++k) {
    std::uniform_int_distribution<std::size_t> pick(k, pairs.size() - 1);
    std::swap(pairs[k], pairs[pick(rng)]);
  }
  pairs.resize(count);
  std::sort(pairs.begin(), pairs.end());

  SynthInstance out = instance;
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  for (const auto& [i, j] : pairs) {
    double v = out.observation(i, j);
    if (noise.mode == GraphNoiseSpec::Mode::EdgeFlip)
      v = 1.0 - v;
    else
      v += noise.eta * unif(rng);
    out.observation(i, j) = v;
    out.observation(j, i) = v;
  }
  out.corrupted = std::move(pairs);
  return out;
}

}  // namespace splr
