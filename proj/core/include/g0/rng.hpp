#pragma once

#include <array>
#include <cmath>
#include <cstdint>

namespace g0 {

// Philox4x32-10 counter-based generator. A generator is addressed by
// (seed, stream); advancing it only bumps a 64-bit block counter, so the
// state space holds 2^128 counters and independent streams are free. Monte
// Carlo code derives one stream per replication index, which is what makes
// reports identical for any number of workers.
class Philox {
 public:
  explicit Philox(std::uint64_t seed, std::uint64_t stream = 0)
      : key_{static_cast<std::uint32_t>(seed),
             static_cast<std::uint32_t>(seed >> 32)},
        counter_{0, 0, static_cast<std::uint32_t>(stream),
                 static_cast<std::uint32_t>(stream >> 32)} {}

  std::uint64_t next_u64() {
    if (idx_ == 0) generate();
    const int i = 4 - idx_;
    idx_ -= 2;
    return (static_cast<std::uint64_t>(out_[i + 1]) << 32) | out_[i];
  }

  // Uniform on the open interval (0,1); never returns an endpoint, so it is
  // always safe inside log().
  double next_double() {
    return (static_cast<double>(next_u64() >> 11) + 0.5) * 0x1.0p-53;
  }

 private:
  static std::uint64_t mulwide(std::uint32_t a, std::uint32_t b) {
    return static_cast<std::uint64_t>(a) * b;
  }

  void generate() {
    std::array<std::uint32_t, 4> c = counter_;
    std::uint32_t k0 = key_[0];
    std::uint32_t k1 = key_[1];
    for (int round = 0; round < 10; ++round) {
      const std::uint64_t p0 = mulwide(0xD2511F53u, c[0]);
      const std::uint64_t p1 = mulwide(0xCD9E8D57u, c[2]);
      c = {static_cast<std::uint32_t>(p1 >> 32) ^ c[1] ^ k0,
           static_cast<std::uint32_t>(p1),
           static_cast<std::uint32_t>(p0 >> 32) ^ c[3] ^ k1,
           static_cast<std::uint32_t>(p0)};
      k0 += 0x9E3779B9u;
      k1 += 0xBB67AE85u;
    }
    out_ = c;
    idx_ = 4;
    if (++counter_[0] == 0) ++counter_[1];  // 64-bit block counter
  }

  std::array<std::uint32_t, 2> key_;
  std::array<std::uint32_t, 4> counter_;
  std::array<std::uint32_t, 4> out_{};
  int idx_ = 0;
};

namespace rng {

// Standard normal via Box-Muller (cosine branch only, so the draw count per
// call is fixed at two uniforms).
inline double standard_normal(Philox& gen) {
  const double u1 = gen.next_double();
  const double u2 = gen.next_double();
  return std::sqrt(-2.0 * std::log(u1)) *
         std::cos(6.283185307179586476925286766559 * u2);
}

// Gamma(shape, scale 1) by the Marsaglia-Tsang squeeze method; shapes below
// one use the boosting identity X_{k+1} * U^{1/k}.
inline double gamma_variate(Philox& gen, double shape) {
  if (shape < 1.0) {
    const double g = gamma_variate(gen, shape + 1.0);
    return g * std::pow(gen.next_double(), 1.0 / shape);
  }
  const double d = shape - 1.0 / 3.0;
  const double c = 1.0 / std::sqrt(9.0 * d);
  for (;;) {
    double x;
    double v;
    do {
      x = standard_normal(gen);
      v = 1.0 + c * x;
    } while (v <= 0.0);
    v = v * v * v;
    const double u = gen.next_double();
    if (u < 1.0 - 0.0331 * (x * x) * (x * x)) return d * v;
    if (std::log(u) < 0.5 * x * x + d * (1.0 - v + std::log(v))) return d * v;
  }
}

}  // namespace rng
}  // namespace g0
