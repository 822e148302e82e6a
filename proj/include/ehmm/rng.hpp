#pragma once

#include <cstdint>
#include <random>

namespace ehmm {

// Seeded random stream used by one chain. All draws are implemented on top of
// the raw 64-bit engine output so that a given seed reproduces the same
// stream regardless of platform library internals.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : eng_(seed) {}

  // Uniform on [0, 1).
  double uniform();

  // Uniform on (0, 1); never returns exactly zero.
  double uniform_pos();

  // Standard normal (Marsaglia polar, second value cached).
  double normal();

  // Gamma(shape, 1) for shape >= 1 (Marsaglia-Tsang squeeze).
  double gamma(double shape);

  // log of a Gamma(shape, scale) draw. Valid for any shape > 0; small shapes
  // are handled in log space via the boost Gamma(shape+1) * U^(1/shape)
  // composition, so the result is always finite.
  double log_gamma_draw(double shape, double scale);

  // Poisson with arbitrary mean >= 0 (Knuth product, split for large means).
  std::int64_t poisson(double mean);

  std::uint64_t raw() { return eng_(); }

  // Derives an independent stream for a sub-task (splitmix64 mix of the
  // given index with fresh engine output).
  static std::uint64_t mix_seed(std::uint64_t base, std::uint64_t index);

 private:
  std::mt19937_64 eng_;
  bool have_spare_ = false;
  double spare_ = 0.0;
};

}  // namespace ehmm
