#pragma once

#include <cmath>
#include <cstdint>
#include <stdexcept>

namespace rankdiff {

namespace detail {

// SplitMix64 finalizer; used to expand (seed, stream) pairs into generator state.
inline std::uint64_t mix64(std::uint64_t z) {
  z += 0x9E3779B97F4A7C15ULL;
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

inline std::uint64_t rotl64(std::uint64_t x, int k) {
  return (x << k) | (x >> (64 - k));
}

}  // namespace detail

// xoshiro256++ with hand-rolled distributions.  Everything here is fully
// specified by the seed, so results are reproducible across platforms and
// independent of any standard-library distribution internals.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) {
    std::uint64_t z = seed;
    for (auto& s : state_) s = detail::mix64(z++);
    if ((state_[0] | state_[1] | state_[2] | state_[3]) == 0) state_[0] = 1;
  }

  // Independent stream for one replicate: replicate k of a run with a given
  // master seed always sees the same draws, regardless of thread schedule.
  static Rng substream(std::uint64_t master_seed, std::uint64_t stream) {
    std::uint64_t z = detail::mix64(master_seed) + 0x9E3779B97F4A7C15ULL * stream;
    return Rng(detail::mix64(z));
  }

  std::uint64_t next_u64() {
    const std::uint64_t result = detail::rotl64(state_[0] + state_[3], 23) + state_[0];
    const std::uint64_t t = state_[1] << 17;
    state_[2] ^= state_[0];
    state_[3] ^= state_[1];
    state_[1] ^= state_[2];
    state_[0] ^= state_[3];
    state_[2] ^= t;
    state_[3] = detail::rotl64(state_[3], 45);
    return result;
  }

  // uniform on [0,1)
  double uniform01() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

  // uniform on (0,1]; safe as a log() argument
  double uniform_pos() {
    return static_cast<double>((next_u64() >> 11) + 1) * 0x1.0p-53;
  }

  // inverse-CDF exponential; rate > 0
  double exponential(double rate) { return -std::log(uniform_pos()) / rate; }

  double normal() {
    if (have_spare_) {
      have_spare_ = false;
      return spare_;
    }
    double u, v, s;
    do {
      u = 2.0 * uniform01() - 1.0;
      v = 2.0 * uniform01() - 1.0;
      s = u * u + v * v;
    } while (s >= 1.0 || s == 0.0);
    const double f = std::sqrt(-2.0 * std::log(s) / s);
    spare_ = v * f;
    have_spare_ = true;
    return u * f;
  }

  // Marsaglia-Tsang; unit scale.  Shapes below 1 are boosted, which keeps the
  // method accurate where a naive rejection scheme degrades.
  double gamma(double shape) {
    if (!(shape > 0.0)) throw std::invalid_argument("gamma: shape must be > 0");
    if (shape < 1.0) {
      return gamma(shape + 1.0) * boost_power(uniform_pos(), 1.0 / shape);
    }
    const double d = shape - 1.0 / 3.0;
    const double c = 1.0 / std::sqrt(9.0 * d);
    for (;;) {
      double x, v;
      do {
        x = normal();
        v = 1.0 + c * x;
      } while (v <= 0.0);
      v = v * v * v;
      const double u = uniform_pos();
      if (u < 1.0 - 0.0331 * x * x * x * x) return d * v;
      if (std::log(u) < 0.5 * x * x + d * (1.0 - v + std::log(v))) return d * v;
    }
  }

  double beta(double a, double b) {
    const double x = gamma(a);
    const double y = gamma(b);
    return x / (x + y);
  }

  // Inversion for small means, Hormann's PTRS transformed rejection otherwise.
  long long poisson(double mean);

 private:
  // u^e for the sub-1 gamma boost.  Reciprocal shapes land within an ulp of a
  // small integer whenever the shape is 1 - alpha for a round alpha, and the
  // multiply ladder is far cheaper than pow in that hot path (stick-breaking
  // draws millions of Beta(1-alpha, .) variables).
  static double boost_power(double u, double e) {
    const double k = std::nearbyint(e);
    if (std::fabs(e - k) > 1e-9 * k || k < 1.0 || k > 64.0) return std::pow(u, e);
    double base = u;
    double result = 1.0;
    for (auto m = static_cast<unsigned>(k); m != 0; m >>= 1) {
      if (m & 1U) result *= base;
      base *= base;
    }
    return result;
  }

  std::uint64_t state_[4];
  double spare_ = 0.0;
  bool have_spare_ = false;
};

// Builds a stream id out of a small block tag plus an index, so unrelated
// random consumers of the same master seed never share a substream.
inline std::uint64_t stream_id(std::uint32_t block, std::uint64_t index) {
  return (static_cast<std::uint64_t>(block) << 48) ^ index;
}

}  // namespace rankdiff
