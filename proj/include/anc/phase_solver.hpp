#pragma once

#include <algorithm>
#include <array>
#include <cstddef>
#include <limits>
#include <stdexcept>
#include <string>

#include "anc/errors.hpp"
#include "anc/types.hpp"

namespace anc {

enum class Branch { plus, minus };

// One candidate (theta, phi) decomposition of an interfered sample.
struct PhasePairSolution {
  double theta = 0.0;  // phase of the amplitude-A component
  double phi = 0.0;    // phase of the amplitude-B component
  Branch branch = Branch::plus;
  double d_value = 0.0;  // cos(theta - phi) before clamping
};

// Decompose y = A*e^{i theta} + B*e^{i phi} given both magnitudes. The cosine
// of the phase difference is fixed by the sample energy; the sign of its sine
// is not, so exactly two candidate pairs come back. plus carries
// sin(theta - phi) = +sqrt(1 - D^2), minus the negative root.
//
// D slightly outside [-1, 1] is clamped (finite-precision and noise push it
// over); beyond 1 + clamp_tolerance the supplied amplitudes are rejected.
inline std::array<PhasePairSolution, 2> possible_phase_pairs(
    const ComplexSample& y, double a, double b, double clamp_tolerance = 0.25) {
  if (a <= 0.0 || b <= 0.0)
    throw std::invalid_argument("possible_phase_pairs: amplitudes must be > 0");
  if (clamp_tolerance < 0.0)
    throw std::invalid_argument("possible_phase_pairs: clamp_tolerance must be >= 0");

  const double d = (std::norm(y) - a * a - b * b) / (2.0 * a * b);
  if (std::abs(d) > 1.0 + clamp_tolerance)
    throw InconsistentAmplitudesError("possible_phase_pairs: |D| = " +
                                      std::to_string(std::abs(d)) +
                                      " exceeds 1 + clamp_tolerance");
  const double dc = std::clamp(d, -1.0, 1.0);
  const double root = std::sqrt(1.0 - dc * dc);

  std::array<PhasePairSolution, 2> out;
  out[0].theta = std::arg(y * ComplexSample(a + b * dc, b * root));
  out[0].phi = std::arg(y * ComplexSample(b + a * dc, -a * root));
  out[0].branch = Branch::plus;
  out[0].d_value = d;
  out[1].theta = std::arg(y * ComplexSample(a + b * dc, -b * root));
  out[1].phi = std::arg(y * ComplexSample(b + a * dc, a * root));
  out[1].branch = Branch::minus;
  out[1].d_value = d;
  return out;
}

// Outcome of matching consecutive-sample solution pairs against the known own
// phase step.
struct PairSelection {
  PhasePairSolution at_n;   // chosen solution at sample n
  PhasePairSolution at_n1;  // chosen solution at sample n+1
  double delta_theta = 0.0;  // own phase step of the chosen combination
  double delta_phi = 0.0;    // implied other-party phase step
  double err = 0.0;          // winning mismatch against known_delta_theta
  std::array<double, 4> err_values{};  // combos (x,y) in order 11,12,21,22
};

// Try all four pairings of the two solutions at n+1 (index x) with the two at
// n (index y); keep the one whose own phase step best matches
// known_delta_theta. Ties resolve to the lexicographically first (x, y).
inline PairSelection select_pair(const std::array<PhasePairSolution, 2>& at_n,
                                 const std::array<PhasePairSolution, 2>& at_n1,
                                 double known_delta_theta) {
  PairSelection sel;
  double best = std::numeric_limits<double>::infinity();
  std::size_t k = 0;
  for (std::size_t x = 0; x < 2; ++x) {
    for (std::size_t y = 0; y < 2; ++y, ++k) {
      const double dtheta = wrap_angle(at_n1[x].theta - at_n[y].theta);
      const double err = std::abs(wrap_angle(dtheta - known_delta_theta));
      sel.err_values[k] = err;
      if (err < best) {
        best = err;
        sel.at_n = at_n[y];
        sel.at_n1 = at_n1[x];
        sel.delta_theta = dtheta;
        sel.delta_phi = wrap_angle(at_n1[x].phi - at_n[y].phi);
        sel.err = err;
      }
    }
  }
  return sel;
}

}  // namespace anc
