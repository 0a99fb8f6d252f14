#pragma once

#include <cmath>
#include <complex>
#include <cstdint>
#include <vector>

namespace anc {

using ComplexSample = std::complex<double>;
using SampleBuffer = std::vector<ComplexSample>;
using Bit = std::uint8_t;
using BitSeq = std::vector<Bit>;

inline constexpr double kPi = 3.141592653589793238462643383279502884;
inline constexpr double kHalfPi = kPi / 2.0;
inline constexpr double kTwoPi = 2.0 * kPi;

// Wrap to (-pi, pi].
inline double wrap_angle(double a) {
  double r = std::remainder(a, kTwoPi);
  if (r <= -kPi) r += kTwoPi;
  return r;
}

// Wrap to [0, 2*pi).
inline double wrap_angle_2pi(double a) {
  double r = std::fmod(a, kTwoPi);
  if (r < 0.0) r += kTwoPi;
  if (r >= kTwoPi) r = 0.0;
  return r;
}

// Absolute circular distance, result in [0, pi].
inline double angle_distance(double a, double b) {
  return std::abs(wrap_angle(a - b));
}

inline double squared_magnitude(const ComplexSample& s) { return std::norm(s); }

}  // namespace anc
