#include "lazymat/random.hpp"

#include <bit>
#include <cmath>

namespace lazymat {

namespace {

// splitmix64, used only to expand a 64-bit seed into engine state.
std::uint64_t splitmix64(std::uint64_t& x) {
  std::uint64_t z = (x += 0x9e3779b97f4a7c15ULL);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

// 256-layer ziggurat covering of f(x) = exp(-x^2/2) (Marsaglia-Tsang
// layout). Strip s >= 1 is the rectangle [0, x_s] x [f(x_s), f(x_{s-1})]
// with x_0 = 0 at the mode; strip 0 is the base rectangle [0, v/f(R)] x
// [0, f(R)] whose overhang past x = R carries exactly the Gaussian tail
// mass. Every strip has area v, so a uniform 8-bit strip index plus a
// 52-bit horizontal coordinate proposes uniformly under the covering;
// candidates past the guaranteed-inside prefix k[s] fall through to an
// explicit density comparison (or the exact tail sampler), which keeps
// the output law exactly N(0,1). Tables are seed-independent pure math.
constexpr double kZigR = 3.6541528853610088;  // tail boundary for 256 strips
constexpr double kZigScale = 0x1.0p52;

struct ZigTables {
  std::array<double, 256> w;         // strip width
  std::array<double, 256> f;         // exp(-x_s^2 / 2) at the inner edge
  std::array<std::uint64_t, 256> k;  // guaranteed-accept bound on 52 bits
};

ZigTables make_zig_tables() {
  const double fr = std::exp(-0.5 * kZigR * kZigR);
  const double tail_mass =
      std::sqrt(1.5707963267948966) * std::erfc(kZigR / std::sqrt(2.0));
  const double v = kZigR * fr + tail_mass;  // common strip area

  std::array<double, 256> x;
  x[255] = kZigR;
  for (int s = 254; s >= 1; --s) {
    const double f_above = std::exp(-0.5 * x[s + 1] * x[s + 1]);
    x[s] = std::sqrt(-2.0 * std::log(v / x[s + 1] + f_above));
  }
  x[0] = 0.0;
  // The recurrence must close the covering at the mode; this only moves
  // if kZigR stops matching the 256-strip geometry.
  require(std::abs(v / x[1] + std::exp(-0.5 * x[1] * x[1]) - 1.0) < 1e-6,
          "ziggurat table generation drifted");

  ZigTables t;
  t.w[0] = v / fr;
  t.k[0] = static_cast<std::uint64_t>(kZigR * fr / v * kZigScale);
  t.f[0] = 1.0;
  for (int s = 1; s < 256; ++s) {
    t.w[s] = x[s];
    t.k[s] = static_cast<std::uint64_t>(x[s - 1] / x[s] * kZigScale);
    t.f[s] = std::exp(-0.5 * x[s] * x[s]);
  }
  return t;
}

const ZigTables& zig_tables() {
  static const ZigTables t = make_zig_tables();
  return t;
}

}  // namespace

std::uint64_t derive_seed(std::uint64_t base, std::uint64_t index) {
  std::uint64_t s = base + index * 0x9e3779b97f4a7c15ULL;
  return splitmix64(s);
}

Xoshiro256pp::Xoshiro256pp(std::uint64_t seed) {
  std::uint64_t s = seed;
  for (auto& w : state_) w = splitmix64(s);
}

void Xoshiro256pp::jump() {
  static constexpr std::uint64_t kJump[] = {0x180ec6d33cfd0abaULL, 0xd5a61266f0c9392cULL,
                                            0xa9582618e03fc9aaULL, 0x39abdc4529b1661cULL};
  std::uint64_t s0 = 0, s1 = 0, s2 = 0, s3 = 0;
  for (std::uint64_t jump : kJump) {
    for (int b = 0; b < 64; ++b) {
      if (jump & (1ULL << b)) {
        s0 ^= state_[0];
        s1 ^= state_[1];
        s2 ^= state_[2];
        s3 ^= state_[3];
      }
      next();
    }
  }
  state_ = {s0, s1, s2, s3};
}

RandomSource::RandomSource(std::uint64_t seed, std::uint64_t stream, Field field)
    : seed_(seed), stream_(stream), field_(field), engine_(seed) {
  for (std::uint64_t i = 0; i < stream; ++i) engine_.jump();
}

double RandomSource::normal() {
  if (has_spare_) {
    has_spare_ = false;
    return spare_;
  }
  double u, v, s;
  do {
    u = 2.0 * uniform() - 1.0;
    v = 2.0 * uniform() - 1.0;
    s = u * u + v * v;
  } while (s >= 1.0 || s == 0.0);
  const double f = std::sqrt(-2.0 * std::log(s) / s);
  spare_ = v * f;
  has_spare_ = true;
  return u * f;
}

std::complex<double> RandomSource::normal_complex() {
  constexpr double kInvSqrt2 = 0.7071067811865475244;
  const double a = normal();
  const double b = normal();
  return {a * kInvSqrt2, b * kInvSqrt2};
}

VecX RandomSource::normal_vector(Index len) {
  require(len >= 1, "normal_vector: len must be >= 1");
  const ZigTables& t = zig_tables();
  // Work on a local engine so its state lives in registers across the
  // fill instead of bouncing through the member on every draw.
  Xoshiro256pp eng = engine_;
  const auto u53 = [&eng] {
    return static_cast<double>(eng.next() >> 11) * 0x1.0p-53;
  };
  VecX out(len);
  for (Index i = 0; i < len; ++i) {
    for (;;) {
      const std::uint64_t bits = eng.next();
      const std::size_t s = bits & 0xFF;
      const std::uint64_t rabs = bits >> 12;  // 52 fresh bits
      // rabs * 2^-52, built by planting the bits in a [1, 2) mantissa;
      // the integer-to-double conversion instruction this dodges costs
      // as much as the rest of the accept path combined.
      const double u01 =
          std::bit_cast<double>(0x3FF0000000000000ULL | rabs) - 1.0;
      const double mag = u01 * t.w[s];
      const std::uint64_t sign = (bits & 0x100) << 55;  // IEEE sign bit
      if (rabs < t.k[s]) {  // inside the strip for sure
        out[i] = std::bit_cast<double>(std::bit_cast<std::uint64_t>(mag) ^ sign);
        break;
      }
      if (s == 0) {
        // Exact tail sample past kZigR (exponential majorizer rejection).
        double e1, e2;
        do {
          e1 = -std::log1p(-u53()) * (1.0 / kZigR);
          e2 = -std::log1p(-u53());
        } while (e2 + e2 <= e1 * e1);
        out[i] = std::bit_cast<double>(
            std::bit_cast<std::uint64_t>(kZigR + e1) ^ sign);
        break;
      }
      const double wedge = t.f[s] + u53() * (t.f[s - 1] - t.f[s]);
      if (wedge < std::exp(-0.5 * mag * mag)) {
        out[i] = std::bit_cast<double>(std::bit_cast<std::uint64_t>(mag) ^ sign);
        break;
      }
    }
  }
  engine_ = eng;
  return out;
}

VecXc RandomSource::normal_complex_vector(Index len) {
  require(len >= 1, "normal_complex_vector: len must be >= 1");
  constexpr double kInvSqrt2 = 0.7071067811865475244;
  const VecX parts = normal_vector(2 * len);
  VecXc out(len);
  for (Index i = 0; i < len; ++i) {
    out[i] = std::complex<double>(parts[i] * kInvSqrt2,
                                  parts[len + i] * kInvSqrt2);
  }
  return out;
}

}  // namespace lazymat
