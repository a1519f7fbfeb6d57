#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

namespace rgs::sampling {

// Counter-based stream built on Philox4x32-10 (Salmon et al., SC'11).
//
// The 64-bit master seed is the Philox key. The 128-bit counter is split into
// (block index, stream id), so streams with different ids walk disjoint
// counter ranges and cannot overlap. Each block yields four 32-bit words;
// each stream holds 2^64 blocks. Output is bit-identical on every platform
// because only fixed-width integer arithmetic is involved.
class RngStream {
 public:
  RngStream(std::uint64_t master_seed, std::uint64_t stream_id);

  std::uint32_t next_u32();
  std::uint64_t next_u64();
  // Uniform on [0, 1) with 53 random bits.
  double uniform();
  // Standard normal via Box-Muller; the second variate of each pair is cached.
  double gaussian();

  std::uint64_t master_seed() const noexcept { return seed_; }
  std::uint64_t stream_id() const noexcept { return stream_; }

  // Raw Philox4x32-10 block function, exposed for known-answer tests.
  static std::array<std::uint32_t, 4> philox(std::array<std::uint32_t, 4> counter,
                                             std::array<std::uint32_t, 2> key);

 private:
  void refill();

  std::uint64_t seed_;
  std::uint64_t stream_;
  std::uint64_t block_ = 0;
  std::array<std::uint32_t, 4> buffer_{};
  unsigned used_ = 4;
  bool has_spare_ = false;
  double spare_ = 0.0;
};

// Stream for one Monte Carlo trial: same key, trial id in the high counter half.
RngStream derive_stream(std::uint64_t master_seed, std::uint64_t trial_id);

// Sampling with probability proportional to nonnegative weights.
class DiscreteDistribution {
 public:
  explicit DiscreteDistribution(std::span<const double> weights);

  std::size_t size() const noexcept { return weights_.size(); }
  double total() const noexcept { return cumulative_.back(); }
  double probability(std::size_t i) const { return weights_.at(i) / total(); }
  const std::vector<double>& weights() const noexcept { return weights_; }
  const std::vector<double>& cumulative() const noexcept { return cumulative_; }
  const std::vector<std::size_t>& support() const noexcept { return support_; }

  // Inverse CDF on a given uniform draw in [0, 1): the smallest index whose
  // cumulative weight exceeds u * total. Zero-weight indices are never returned.
  std::size_t index_for(double u) const;
  std::size_t sample(RngStream& rng) const { return index_for(rng.uniform()); }

 private:
  std::vector<double> weights_;
  std::vector<double> cumulative_;
  std::vector<std::size_t> support_;
};

// Throws ContractViolation when every weight is zero.
DiscreteDistribution build_distribution(std::span<const double> sq_norms);

}  // namespace rgs::sampling
