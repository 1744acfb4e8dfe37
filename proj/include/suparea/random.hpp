#pragma once

#include <array>
#include <cmath>
#include <concepts>
#include <cstdint>
#include <limits>
#include <numbers>

#include "suparea/errors.hpp"

namespace suparea::numerics {

/// Philox4x32-10 block function (Salmon et al., Random123).
std::array<std::uint32_t, 4> philox4x32(std::array<std::uint32_t, 4> ctr,
                                        std::array<std::uint32_t, 2> key);

/// Counter-based random stream. The 64-bit seed is the Philox key; the 128-bit
/// counter is (block counter, stream_id), so (seed, stream_id) pins the whole
/// sequence and distinct stream_ids never share a block.
///
/// A stream is single-owner. Parallel workers take children via child().
class RandomStream {
 public:
  using result_type = std::uint64_t;

  explicit RandomStream(std::uint64_t seed, std::uint64_t stream_id = 0)
      : seed_(seed), stream_id_(stream_id) {}

  std::uint64_t seed() const { return seed_; }
  std::uint64_t stream_id() const { return stream_id_; }
  /// Number of 128-bit blocks generated so far.
  std::uint64_t counter() const { return counter_; }

  /// Independent stream for partition `index`, same seed, hashed stream id.
  RandomStream child(std::uint64_t index) const;

  std::uint64_t next_u64() {
    if (lane_ == 2) refill();
    return buffer_[lane_++];
  }

  /// Uniform on [0, 1) with 53 random bits.
  double uniform() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

  /// Uniform on (0, 1); safe to take the logarithm of.
  double uniform_open() {
    return (static_cast<double>(next_u64() >> 11) + 0.5) * 0x1.0p-53;
  }

  /// Standard normal by Box–Muller. Consumes exactly one block per pair.
  double normal() {
    if (has_spare_) {
      has_spare_ = false;
      return spare_;
    }
    const double r = std::sqrt(-2.0 * std::log(uniform_open()));
    const double theta = 2.0 * std::numbers::pi * uniform();
    spare_ = r * std::sin(theta);
    has_spare_ = true;
    return r * std::cos(theta);
  }

  // UniformRandomBitGenerator
  static constexpr result_type min() { return 0; }
  static constexpr result_type max() { return std::numeric_limits<result_type>::max(); }
  result_type operator()() { return next_u64(); }

 private:
  void refill();

  std::uint64_t seed_;
  std::uint64_t stream_id_;
  std::uint64_t counter_ = 0;
  std::array<std::uint64_t, 2> buffer_{};
  int lane_ = 2;
  bool has_spare_ = false;
  double spare_ = 0.0;
};

/// Anything that can feed the samplers: RandomStream, or a scripted stub in tests.
template <class R>
concept RandomSource = requires(R& r) {
  { r.uniform() } -> std::convertible_to<double>;
  { r.uniform_open() } -> std::convertible_to<double>;
  { r.normal() } -> std::convertible_to<double>;
};

inline double sample_standard_normal(RandomStream& stream) { return stream.normal(); }

/// Inverse CDF of Exp(rate).
inline double exponential_from_uniform(double u, double rate) {
  return -std::log1p(-u) / rate;
}

template <RandomSource R>
double sample_exponential(R& rng, double rate) {
  if (!(rate > 0.0)) throw DomainError("sample_exponential: rate must be positive");
  return -std::log(rng.uniform_open()) / rate;
}

/// Gamma(shape 1/2, rate), drawn as Z²/(2·rate).
template <RandomSource R>
double sample_gamma_half(R& rng, double rate) {
  if (!(rate > 0.0)) throw DomainError("sample_gamma_half: rate must be positive");
  const double z = rng.normal();
  return z * z / (2.0 * rate);
}

/// Exact draw from the density ∝ ℓ^(-3/2) e^(-λℓ) on [eps, ∞).
/// Proposal ℓ = eps/U² (Pareto, tail index 1/2), accepted with e^(-λ(ℓ-eps)).
/// lambda == 0 returns the proposal directly.
template <RandomSource R>
double sample_truncated_excursion_length(R& rng, double lambda, double eps,
                                         std::uint64_t max_attempts = 1'000'000) {
  if (!(lambda >= 0.0)) throw DomainError("truncated length: lambda must be >= 0");
  if (!(eps > 0.0)) throw DomainError("truncated length: eps must be positive");
  for (std::uint64_t i = 0; i < max_attempts; ++i) {
    const double u = rng.uniform_open();
    const double len = eps / (u * u);
    if (lambda == 0.0) return len;
    if (rng.uniform() < std::exp(-lambda * (len - eps))) return len;
  }
  throw BudgetError("truncated length: rejection budget exhausted");
}

}  // namespace suparea::numerics
