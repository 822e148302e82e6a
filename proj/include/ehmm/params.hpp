#pragma once

#include <array>
#include <cmath>

namespace ehmm {

// Model parameters in sampling (log) space.
struct ParamVec {
  double log_r = 0.0;
  double log_sigma = 0.0;
  double log_phi = 0.0;

  double r() const { return std::exp(log_r); }
  double sigma() const { return std::exp(log_sigma); }
  double phi() const { return std::exp(log_phi); }

  std::array<double, 3> as_array() const { return {log_r, log_sigma, log_phi}; }

  static ParamVec from_array(const std::array<double, 3>& a) {
    return {a[0], a[1], a[2]};
  }
  static ParamVec from_natural(double r, double sigma, double phi) {
    return {std::log(r), std::log(sigma), std::log(phi)};
  }

  friend bool operator==(const ParamVec&, const ParamVec&) = default;
};

inline constexpr const char* kParamNames[3] = {"log_r", "log_sigma", "log_phi"};
inline constexpr const char* kNaturalNames[3] = {"r", "sigma", "phi"};

}  // namespace ehmm
