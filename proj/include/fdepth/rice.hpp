#pragma once

// Expected number of level upcrossings of a stationary Gaussian process.

#include <cmath>
#include <numbers>

#include "fdepth/core.hpp"
#include "fdepth/distributions.hpp"

namespace fdepth {

struct RiceSpec {
  double level = 0.0;
  double R0 = 1.0;             // R(0) = sigma^2
  double negR2 = 1.0;          // -R''(0)
  double domain_length = 1.0;  // lambda(V)

  static RiceSpec from_kernel(const KernelSpec& k, double level, double domain_length) {
    return {level, k.variance, k.neg_second_derivative(), domain_length};
  }
};

inline double rice_expected_upcrossings(const RiceSpec& s) {
  if (!(s.R0 > 0.0) || !(s.negR2 > 0.0)) throw ParameterError("R0 and -R''(0) must be positive");
  if (!(s.domain_length >= 0.0)) throw ParameterError("domain length must be nonnegative");
  return std::sqrt(s.negR2 / s.R0) * s.domain_length / (2.0 * std::numbers::pi) *
         std::exp(-s.level * s.level / (2.0 * s.R0));
}

/// Upcrossings of the linear interpolant: grid steps with x_i < u <= x_{i+1}.
inline std::size_t count_upcrossings(const Curve& x, double level) {
  std::size_t n = 0;
  for (std::size_t i = 0; i + 1 < x.size(); ++i) n += x[i] < level && x[i + 1] >= level;
  return n;
}

}  // namespace fdepth
