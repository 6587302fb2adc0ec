#pragma once

#include <array>
#include <cstdint>

#include "lazymat/types.hpp"

namespace lazymat {

/// Counter-indexed seed derivation: splitmix64 applied to
/// base + (index + 1) * golden-gamma. Distinct indices give distinct
/// seeds; this is how batch runs hand every trial its own base seed
/// in O(1) instead of jumping one engine index-many times.
std::uint64_t derive_seed(std::uint64_t base, std::uint64_t index);

/// xoshiro256++ engine (Blackman/Vigna, public domain reference
/// implementation). 256 bits of state, period 2^256 - 1, and a jump()
/// advancing by 2^128 steps, which is what the stream guarantee below
/// rests on. next() lives in the header so draw loops can inline it;
/// out-of-line it costs more than the whole output transform.
class Xoshiro256pp {
 public:
  explicit Xoshiro256pp(std::uint64_t seed);

  std::uint64_t next() {
    const std::uint64_t result = rotl(state_[0] + state_[3], 23) + state_[0];
    const std::uint64_t t = state_[1] << 17;
    state_[2] ^= state_[0];
    state_[3] ^= state_[1];
    state_[1] ^= state_[2];
    state_[0] ^= state_[3];
    state_[2] ^= t;
    state_[3] = rotl(state_[3], 45);
    return result;
  }

  /// Advance by 2^128 steps.
  void jump();

 private:
  static std::uint64_t rotl(std::uint64_t x, int k) {
    return (x << k) | (x >> (64 - k));
  }

  std::array<std::uint64_t, 4> state_;
};

/// Seedable source of standard normal draws, real and complex.
///
/// Stream `k` is the base sequence for `seed` jumped ahead k * 2^128
/// steps, so any two distinct streams of the same seed are non-overlapping
/// for far longer than any simulation can consume. One source per
/// Monte Carlo trial, derived by stream counter, is the intended use.
///
/// Complex draws are (a + ib)/sqrt(2) with a, b independent N(0,1), so a
/// complex standard normal here has unit total variance (E|z|^2 = 1).
class RandomSource {
 public:
  explicit RandomSource(std::uint64_t seed, std::uint64_t stream = 0,
                        Field field = Field::real);

  std::uint64_t seed() const { return seed_; }
  std::uint64_t stream() const { return stream_; }
  Field field() const { return field_; }

  /// Uniform in [0, 1).
  double uniform() {
    return static_cast<double>(engine_.next() >> 11) * 0x1.0p-53;
  }

  /// One N(0,1) draw (Marsaglia polar transform; exact, not tabulated).
  double normal();

  std::complex<double> normal_complex();

  /// len i.i.d. N(0,1) samples. len = 0 is an error.
  ///
  /// The vector fill draws through a 256-layer tabulated rejection
  /// sampler (a ziggurat): the tables only shape the proposal, borderline
  /// candidates fall through to explicit density comparisons, so the
  /// output law is exactly N(0,1) like the scalar path. The two paths
  /// consume the engine differently, though: normal_vector(k) is not
  /// elementwise equal to k normal() calls on a copy of the same source.
  /// Each is individually deterministic per seed.
  VecX normal_vector(Index len);

  /// len i.i.d. complex standard normals, unit total variance each.
  /// Built from one normal_vector(2 * len) batch: real parts first half,
  /// imaginary parts second half, both scaled by 1/sqrt(2).
  VecXc normal_complex_vector(Index len);

  /// Field-tagged draw: real sources give real vectors embedded in the
  /// requested scalar type, complex sources give complex standard normals.
  template <typename Scalar>
  Vec<Scalar> normals(Index len) {
    if constexpr (is_complex_v<Scalar>) {
      return normal_complex_vector(len);
    } else {
      return normal_vector(len);
    }
  }

  std::uint64_t next_u64() { return engine_.next(); }

 private:
  std::uint64_t seed_;
  std::uint64_t stream_;
  Field field_;
  Xoshiro256pp engine_;
  bool has_spare_ = false;
  double spare_ = 0.0;
};

}  // namespace lazymat
