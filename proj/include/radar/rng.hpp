#pragma once

#include <cmath>
#include <cstdint>
#include <string_view>

namespace radar::rng {

// splitmix64 finalizer; bijective on 64-bit words.
inline uint64_t mix64(uint64_t z) {
  z ^= z >> 30;
  z *= 0xBF58476D1CE4E5B9ull;
  z ^= z >> 27;
  z *= 0x94D049BB133111EBull;
  z ^= z >> 31;
  return z;
}

inline constexpr uint64_t kGamma = 0x9E3779B97F4A7C15ull;

// Stateless draw: a pure function of (seed, stream, counter). Two chained
// finalizer rounds decorrelate the three inputs; each (stream, counter) pair
// indexes an independent uniform deviate under a fixed seed.
inline uint64_t counter_bits(uint64_t seed, uint64_t stream, uint64_t counter) {
  uint64_t z = mix64(seed + kGamma + stream * 0xD1B54A32D192ED03ull);
  return mix64(z ^ (counter * kGamma + 0x8CB92BA72F3D8DD7ull));
}

// Maps 64 random bits onto the open interval (0, 1); never returns 0 or 1,
// so inverse-CDF transforms stay finite. Bin centers over 52 bits: every
// value is exactly representable, so neither endpoint can round in.
inline double to_unit(uint64_t bits) {
  return (static_cast<double>(bits >> 12) + 0.5) * 0x1.0p-52;
}

inline double uniform01(uint64_t seed, uint64_t stream, uint64_t counter) {
  return to_unit(counter_bits(seed, stream, counter));
}

// Inverse of the standard normal CDF (Acklam's rational approximation,
// relative error below 1.15e-9 across (0, 1)).
inline double inv_normal_cdf(double p) {
  static constexpr double a[6] = {-3.969683028665376e+01, 2.209460984245205e+02,
                                  -2.759285104469687e+02, 1.383577518672690e+02,
                                  -3.066479806614716e+01, 2.506628277459239e+00};
  static constexpr double b[5] = {-5.447609879822406e+01, 1.615858368580409e+02,
                                  -1.556989798598866e+02, 6.680131188771972e+01,
                                  -1.328068155288572e+01};
  static constexpr double c[6] = {-7.784894002430293e-03, -3.223964580411365e-01,
                                  -2.400758277161838e+00, -2.549732539343734e+00,
                                  4.374664141464968e+00,  2.938163982698783e+00};
  static constexpr double d[4] = {7.784695709041462e-03, 3.224671290700398e-01,
                                  2.445134137142996e+00, 3.754408661907416e+00};
  constexpr double p_low = 0.02425;

  if (p < p_low) {
    double q = std::sqrt(-2.0 * std::log(p));
    return (((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) /
           ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1.0);
  }
  if (p > 1.0 - p_low) {
    double q = std::sqrt(-2.0 * std::log(1.0 - p));
    return -(((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) /
           ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1.0);
  }
  double q = p - 0.5;
  double r = q * q;
  return (((((a[0] * r + a[1]) * r + a[2]) * r + a[3]) * r + a[4]) * r + a[5]) * q /
         (((((b[0] * r + b[1]) * r + b[2]) * r + b[3]) * r + b[4]) * r + 1.0);
}

// Inverse-CDF transforms; each consumes exactly one uniform deviate.
inline double normal_from_unit(double u, double mean, double sd) {
  return mean + sd * inv_normal_cdf(u);
}

inline double uniform_from_unit(double u, double lo, double hi) {
  return lo + u * (hi - lo);
}

inline double triangular_from_unit(double u, double lo, double mode, double hi) {
  double span = hi - lo;
  double cut = (mode - lo) / span;
  if (u < cut) return lo + std::sqrt(u * span * (mode - lo));
  return hi - std::sqrt((1.0 - u) * span * (hi - mode));
}

inline double exponential_from_unit(double u, double rate) {
  return -std::log1p(-u) / rate;
}

// FNV-1a; used for stable per-parameter stream identifiers.
inline uint64_t fnv1a(std::string_view s) {
  uint64_t h = 0xCBF29CE484222325ull;
  for (char ch : s) {
    h ^= static_cast<unsigned char>(ch);
    h *= 0x100000001B3ull;
  }
  return h;
}

// Small sequential generator for code that wants a stream of variates (the
// model generator, tests). Not used on the simulation hot path.
struct SplitMix64 {
  uint64_t state = 0;

  explicit SplitMix64(uint64_t seed = 0) : state(seed) {}

  uint64_t next() {
    state += kGamma;
    return mix64(state);
  }

  double next_unit() { return to_unit(next()); }

  double next_range(double lo, double hi) { return lo + next_unit() * (hi - lo); }

  // unbiased integer in [0, n) via rejection
  uint64_t next_below(uint64_t n) {
    uint64_t threshold = (0 - n) % n;
    for (;;) {
      uint64_t r = next();
      if (r >= threshold) return r % n;
    }
  }
};

}  // namespace radar::rng
