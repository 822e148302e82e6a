#include "ehmm/rng.hpp"

#include <cmath>
#include <stdexcept>

namespace ehmm {

double Rng::uniform() {
  // 53 random bits into [0, 1)
  return static_cast<double>(eng_() >> 11) * 0x1.0p-53;
}

double Rng::uniform_pos() {
  double u;
  do {
    u = uniform();
  } while (u <= 0.0);
  return u;
}

double Rng::normal() {
  if (have_spare_) {
    have_spare_ = false;
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
  have_spare_ = true;
  return u * f;
}

double Rng::gamma(double shape) {
  if (shape < 1.0) throw std::invalid_argument("Rng::gamma requires shape >= 1");
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

double Rng::log_gamma_draw(double shape, double scale) {
  if (!(shape > 0.0) || !(scale > 0.0))
    throw std::invalid_argument("log_gamma_draw requires positive shape and scale");
  double lg;
  do {
    if (shape >= 1.0) {
      double g;
      do {
        g = gamma(shape);
      } while (!(g > 0.0));
      lg = std::log(g);
    } else {
      // Gamma(a) = Gamma(a+1) * U^(1/a); stays finite in log space even for
      // very small shapes where a linear-space draw would underflow to zero.
      double g;
      do {
        g = gamma(shape + 1.0);
      } while (!(g > 0.0));
      lg = std::log(g) + std::log(uniform_pos()) / shape;
    }
  } while (!std::isfinite(lg));
  return lg + std::log(scale);
}

std::int64_t Rng::poisson(double mean) {
  if (!(mean >= 0.0)) throw std::invalid_argument("poisson requires mean >= 0");
  std::int64_t total = 0;
  // Split large means so the product method stays in floating-point range.
  while (mean > 30.0) {
    const double l = std::exp(-30.0);
    std::int64_t k = 0;
    double p = 1.0;
    do {
      ++k;
      p *= uniform();
    } while (p > l);
    total += k - 1;
    mean -= 30.0;
  }
  const double l = std::exp(-mean);
  std::int64_t k = 0;
  double p = 1.0;
  do {
    ++k;
    p *= uniform();
  } while (p > l);
  return total + k - 1;
}

std::uint64_t Rng::mix_seed(std::uint64_t base, std::uint64_t index) {
  std::uint64_t z = base + 0x9E3779B97F4A7C15ull * (index + 1);
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
  return z ^ (z >> 31);
}

}  // namespace ehmm
