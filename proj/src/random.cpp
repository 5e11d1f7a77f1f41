#include "holo/random.hpp"

#include <cmath>

#include "holo/errors.hpp"

namespace holo {

namespace {
constexpr std::uint64_t kGolden = 0x9E3779B97F4A7C15ULL;

std::uint64_t mix64(std::uint64_t z) {
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

// log(k!) - exact table for small k, Stirling series beyond.
double log_factorial(std::uint64_t k) {
  static const double table[] = {
      0.0,
      0.0,
      0.6931471805599453,
      1.791759469228055,
      3.1780538303479458,
      4.787491742782046,
      6.579251212010101,
      8.525161361065415,
      10.60460290274525,
      12.801827480081469};
  if (k < 10) return table[k];
  const double x = double(k) + 1.0;
  const double inv = 1.0 / x;
  const double inv2 = inv * inv;
  return (x - 0.5) * std::log(x) - x + 0.9189385332046727 +
         inv * (1.0 / 12.0 - inv2 * (1.0 / 360.0 - inv2 / 1260.0));
}
}  // namespace

std::uint64_t mix_seed(std::uint64_t h, std::uint64_t x) {
  return mix64(h + kGolden + x);
}

std::uint64_t Rng::next_u64() {
  state_ += kGolden;
  return mix64(state_);
}

double Rng::uniform_pos() {
  return (double(next_u64() >> 11) + 0.5) * 0x1.0p-53;
}

double Rng::normal() {
  for (;;) {
    const double u = 2.0 * uniform_pos() - 1.0;
    const double v = 2.0 * uniform_pos() - 1.0;
    const double s = u * u + v * v;
    if (s > 0.0 && s < 1.0) return u * std::sqrt(-2.0 * std::log(s) / s);
  }
}

std::uint64_t Rng::poisson(double lambda) {
  if (!(lambda >= 0.0)) throw DomainError("poisson mean must be >= 0");
  if (lambda == 0.0) return 0;
  if (lambda < 10.0) {
    const double limit = std::exp(-lambda);
    std::uint64_t k = 0;
    double p = 1.0;
    do {
      ++k;
      p *= uniform_pos();
    } while (p > limit);
    return k - 1;
  }
  // Hoermann's PTRS transformed rejection.
  const double b = 0.931 + 2.53 * std::sqrt(lambda);
  const double a = -0.059 + 0.02483 * b;
  const double inv_alpha = 1.1239 + 1.1328 / (b - 3.4);
  const double v_r = 0.9277 - 3.6224 / (b - 2.0);
  const double log_lambda = std::log(lambda);
  for (;;) {
    const double u = uniform_pos() - 0.5;
    const double v = uniform_pos();
    const double us = 0.5 - std::abs(u);
    const double kf = std::floor((2.0 * a / us + b) * u + lambda + 0.43);
    if (us >= 0.07 && v <= v_r) return std::uint64_t(kf);
    if (kf < 0.0 || (us < 0.013 && v > us)) continue;
    const double lhs = std::log(v * inv_alpha / (a / (us * us) + b));
    const double rhs =
        kf * log_lambda - lambda - log_factorial(std::uint64_t(kf));
    if (lhs <= rhs) return std::uint64_t(kf);
  }
}

}  // namespace holo
