#pragma once

#include <array>
#include <cstdint>
#include <limits>

namespace branchregen {

/// Philox4x64-10 block function (Salmon et al., counter-based PRNG).
/// Maps a 256-bit counter and a 128-bit key to 256 pseudo-random bits.
std::array<std::uint64_t, 4> philox4x64(std::array<std::uint64_t, 4> counter,
                                        std::array<std::uint64_t, 2> key) noexcept;

/// A reproducible random stream identified by (master seed, stream index).
///
/// The pair is used as the Philox key, and the block counter walks from zero,
/// so streams with distinct indices never share a (key, counter) input.
/// Satisfies UniformRandomBitGenerator and can drive <random> distributions.
/// A stream must be owned by one thread at a time.
class RngStream {
 public:
  using result_type = std::uint64_t;

  RngStream(std::uint64_t seed, std::uint64_t index) noexcept
      : key_{seed, index} {}

  static constexpr result_type min() noexcept { return 0; }
  static constexpr result_type max() noexcept {
    return std::numeric_limits<result_type>::max();
  }

  result_type operator()() noexcept {
    if (lane_ == 4) {
      block_ = philox4x64({counter_, 0, 0, 0}, key_);
      ++counter_;
      lane_ = 0;
    }
    return block_[lane_++];
  }

  /// Uniform draw on (0, 1] with 53 random bits.
  double uniform_open0() noexcept {
    return static_cast<double>(((*this)() >> 11) + 1) * 0x1.0p-53;
  }

  /// Uniform draw on [0, 1) with 53 random bits.
  double uniform() noexcept {
    return static_cast<double>((*this)() >> 11) * 0x1.0p-53;
  }

  bool bernoulli(double p) noexcept { return uniform() < p; }

  std::uint64_t seed() const noexcept { return key_[0]; }
  std::uint64_t index() const noexcept { return key_[1]; }
  /// Number of 64-bit words drawn so far.
  std::uint64_t position() const noexcept { return counter_ * 4 - (4 - lane_); }

 private:
  std::array<std::uint64_t, 2> key_;
  std::uint64_t counter_ = 0;
  std::array<std::uint64_t, 4> block_{};
  unsigned lane_ = 4;
};

}  // namespace branchregen
