#pragma once

#include <algorithm>
#include <cstddef>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "anc/errors.hpp"
#include "anc/types.hpp"

namespace anc {

// First and second moment statistics of interfered sample energies.
// mu estimates A^2 + B^2; sigma averages the above-mean half at double
// weight, which for two superposed MSK signals lands on
// A^2 + B^2 + 2AB|cos R| with R the initial angle between the components.
struct EnergyStats {
  double mu = 0.0;
  double sigma = 0.0;
  std::size_t n_samples = 0;
};

inline double mean_energy(std::span<const ComplexSample> span) {
  if (span.empty()) throw std::invalid_argument("mean_energy: empty span");
  double acc = 0.0;
  for (const auto& y : span) acc += std::norm(y);
  return acc / static_cast<double>(span.size());
}

inline double sigma_statistic(std::span<const ComplexSample> span, double mu) {
  if (span.empty()) throw std::invalid_argument("sigma_statistic: empty span");
  double acc = 0.0;
  for (const auto& y : span) {
    const double e = std::norm(y);
    if (e > mu) acc += e;
  }
  return 2.0 * acc / static_cast<double>(span.size());
}

inline EnergyStats compute_energy_stats(std::span<const ComplexSample> span) {
  EnergyStats s;
  s.mu = mean_energy(span);
  s.sigma = sigma_statistic(span, s.mu);
  s.n_samples = span.size();
  return s;
}

// Joint inversion of (mu, sigma) under the flawed assumption that
// cos(theta - phi) sweeps its full range within a packet, i.e.
// sigma = A^2 + B^2 + 4AB/pi. Kept as the baseline it is; with MSK the
// cosine takes only two values per packet, so this misestimates whenever
// |cos R| differs from 2/pi. Returns {larger, smaller}.
inline std::pair<double, double> legacy_joint_estimate(double mu, double sigma) {
  if (sigma < mu)
    throw std::invalid_argument("legacy_joint_estimate: sigma < mu");
  const double ab = kPi * (sigma - mu) / 4.0;
  if (ab <= 0.0)
    throw InconsistentStatisticsError("legacy_joint_estimate: derived AB <= 0");
  const double s_plus = mu + 2.0 * ab;
  const double s_minus = mu - 2.0 * ab;
  if (s_minus < 0.0)
    throw InconsistentStatisticsError("legacy_joint_estimate: mu - 2AB < 0");
  const double p = std::sqrt(s_plus);
  const double q = std::sqrt(s_minus);
  return {(p + q) / 2.0, (p - q) / 2.0};
}

// Robust scale of the noise on successive energy differences. Genuine
// transformations put roughly half the transitions in a large-jump cluster,
// so the 20th percentile of |jump| sits inside the quiet cluster; dividing by
// the matching folded-normal quantile (40th, 0.5244) recovers its std.
inline double jump_noise_scale(std::span<const ComplexSample> span) {
  if (span.size() < 3) return 0.0;
  std::vector<double> jumps(span.size() - 1);
  double prev = std::norm(span[0]);
  for (std::size_t n = 1; n < span.size(); ++n) {
    const double cur = std::norm(span[n]);
    jumps[n - 1] = std::abs(cur - prev);
    prev = cur;
  }
  auto q20 = jumps.begin() + static_cast<std::ptrdiff_t>(jumps.size() / 5);
  std::nth_element(jumps.begin(), q20, jumps.end());
  return *q20 / 0.5244;
}

// Indices n where the energy jumps by more than threshold_factor *
// (sigma - mu) relative to sample n-1. Consecutive indices are kept as-is.
// The threshold must clear both floors: noise_floor is relative to mu and
// catches the degenerate noiseless statistic, jump_guard scales the measured
// jump noise and catches thresholds that would fire on noise alone.
inline std::vector<std::size_t> detect_transformations(
    std::span<const ComplexSample> span, const EnergyStats& stats,
    double threshold_factor = 1.0, double noise_floor = 0.05,
    double jump_guard = 2.0) {
  if (span.size() < 2)
    throw std::invalid_argument("detect_transformations: need at least 2 samples");
  const double threshold = threshold_factor * (stats.sigma - stats.mu);
  const double floor =
      std::max(noise_floor * stats.mu, jump_guard * jump_noise_scale(span));
  if (threshold <= floor)
    throw UndetectableTransformationsError(
        "detect_transformations: threshold below noise floor");
  std::vector<std::size_t> out;
  double prev = std::norm(span[0]);
  for (std::size_t n = 1; n < span.size(); ++n) {
    const double cur = std::norm(span[n]);
    if (std::abs(cur - prev) > threshold) out.push_back(n);
    prev = cur;
  }
  return out;
}

// A sample pair around a detected energy jump. x1/x2 are the magnitudes
// before and after, angle is arg(X2 / X1) in [0, 2pi), self_next_bit the
// decoder's own bit driving the transition.
struct TransformationEvent {
  std::size_t index = 0;  // span index of X2
  double x1_mag = 0.0;
  double x2_mag = 0.0;
  double angle = 0.0;
  Bit self_next_bit = 0;
};

// Candidate squared-amplitude pair of one event:
//   P, Q = sqrt( (x1^2 + x2^2)/4  +/-  (x1 x2 / 2) sin(angle) ).
// Exact on a clean transformation event; which of P/Q belongs to which party
// is settled by assign_amplitudes. Tiny negative radicands are clamped.
inline std::pair<double, double> geometric_amplitudes(double x1_mag, double x2_mag,
                                                      double angle) {
  if (x1_mag <= 0.0 || x2_mag <= 0.0)
    throw std::invalid_argument("geometric_amplitudes: magnitudes must be > 0");
  const double base = 0.25 * (x1_mag * x1_mag + x2_mag * x2_mag);
  const double cross = 0.5 * x1_mag * x2_mag * std::sin(angle);
  const double p2 = std::max(0.0, base + cross);
  const double q2 = std::max(0.0, base - cross);
  if (p2 <= 0.0 && q2 <= 0.0)
    throw DegenerateEventError("geometric_amplitudes: event collapsed to zero");
  return {std::sqrt(p2), std::sqrt(q2)};
}

// Map the {plus, minus} pair onto (self, other). When the decoder's own next
// bit is 1 its component rotates +pi/2 across the event and the plus branch
// is its amplitude; when 0 the roles swap. Events with angle within
// tie_epsilon of {0, pi} (mod 2pi) cannot be assigned.
inline std::pair<double, double> assign_amplitudes(std::pair<double, double> pq,
                                                   double angle, Bit self_next_bit,
                                                   double tie_epsilon = 1e-3) {
  const double a = wrap_angle_2pi(angle);
  const double dist =
      std::min({a, std::abs(a - kPi), kTwoPi - a});
  if (dist < tie_epsilon)
    throw AmbiguousEventError("assign_amplitudes: angle within tie_epsilon of 0 or pi");
  if (self_next_bit) return {pq.first, pq.second};
  return {pq.second, pq.first};
}

enum class AmplitudeMethod { direct, legacy, geometric };

struct AmplitudeEstimate {
  double a_self = 0.0;
  double b_other = 0.0;
  AmplitudeMethod method = AmplitudeMethod::geometric;
  std::size_t n_events = 0;
  std::vector<std::pair<double, double>> event_pairs;  // diagnostics, opt-in
};

struct GeometricConfig {
  double threshold_factor = 1.0;
  double noise_floor = 0.05;  // relative to mu
  double jump_guard = 2.0;    // multiples of the measured jump noise scale
  double tie_epsilon = 1e-3;
  bool reject_outliers = false;  // drop events beyond 3 MAD from the median
  bool keep_event_pairs = false;
};

namespace detail {

inline double median_of(std::vector<double> v) {
  const std::size_t n = v.size();
  auto mid = v.begin() + static_cast<std::ptrdiff_t>(n / 2);
  std::nth_element(v.begin(), mid, v.end());
  if (n % 2 == 1) return *mid;
  double hi = *mid;
  double lo = *std::max_element(v.begin(), mid);
  return (hi + lo) / 2.0;
}

// Keep mask entries within 3 MAD of the median (with a relative floor so a
// near-exact cluster is never thinned by rounding noise).
inline void mad_filter(const std::vector<double>& v, std::vector<char>& keep) {
  const double med = median_of(v);
  std::vector<double> dev(v.size());
  for (std::size_t i = 0; i < v.size(); ++i) dev[i] = std::abs(v[i] - med);
  const double mad = median_of(dev);
  const double lim = std::max(3.0 * mad, 1e-9 * std::abs(med));
  for (std::size_t i = 0; i < v.size(); ++i)
    if (dev[i] > lim) keep[i] = 0;
}

}  // namespace detail

// Build events for the detected jump indices. self_next_bit_at(n) must return
// the decoder's own frame bit governing the transition into span index n.
template <typename NextBitFn>
std::vector<TransformationEvent> collect_events(std::span<const ComplexSample> span,
                                                const std::vector<std::size_t>& indices,
                                                NextBitFn&& self_next_bit_at) {
  std::vector<TransformationEvent> out;
  out.reserve(indices.size());
  for (std::size_t n : indices) {
    if (n == 0 || n >= span.size()) continue;
    TransformationEvent ev;
    ev.index = n;
    ev.x1_mag = std::abs(span[n - 1]);
    ev.x2_mag = std::abs(span[n]);
    if (ev.x1_mag <= 0.0 || ev.x2_mag <= 0.0) continue;
    ev.angle = wrap_angle_2pi(std::arg(span[n] * std::conj(span[n - 1])));
    ev.self_next_bit = self_next_bit_at(n);
    out.push_back(ev);
  }
  return out;
}

// Geometric joint estimator: detect energy jumps, solve each event for its
// candidate pair, assign by the own bit, average the survivors.
template <typename NextBitFn>
AmplitudeEstimate estimate_geometric(std::span<const ComplexSample> span,
                                     const EnergyStats& stats,
                                     NextBitFn&& self_next_bit_at,
                                     const GeometricConfig& cfg = {}) {
  std::vector<std::size_t> indices;
  try {
    indices = detect_transformations(span, stats, cfg.threshold_factor, cfg.noise_floor,
                                     cfg.jump_guard);
  } catch (const UndetectableTransformationsError& e) {
    throw EstimationFailedError(std::string("estimate_geometric: ") + e.what());
  }
  const auto events = collect_events(span, indices, self_next_bit_at);

  std::vector<double> as, bs;
  as.reserve(events.size());
  bs.reserve(events.size());
  for (const auto& ev : events) {
    try {
      const auto pq = geometric_amplitudes(ev.x1_mag, ev.x2_mag, ev.angle);
      const auto ab = assign_amplitudes(pq, ev.angle, ev.self_next_bit, cfg.tie_epsilon);
      as.push_back(ab.first);
      bs.push_back(ab.second);
    } catch (const Error&) {
      continue;  // ambiguous or degenerate event
    }
  }
  if (as.empty())
    throw EstimationFailedError("estimate_geometric: no usable events");

  std::vector<char> keep(as.size(), 1);
  if (cfg.reject_outliers && as.size() >= 5) {
    detail::mad_filter(as, keep);
    detail::mad_filter(bs, keep);
  }

  AmplitudeEstimate est;
  est.method = AmplitudeMethod::geometric;
  double sa = 0.0, sb = 0.0;
  std::size_t n = 0;
  for (std::size_t i = 0; i < as.size(); ++i) {
    if (!keep[i]) continue;
    sa += as[i];
    sb += bs[i];
    ++n;
    if (cfg.keep_event_pairs) est.event_pairs.emplace_back(as[i], bs[i]);
  }
  if (n == 0) throw EstimationFailedError("estimate_geometric: all events rejected");
  est.a_self = sa / static_cast<double>(n);
  est.b_other = sb / static_cast<double>(n);
  est.n_events = n;
  return est;
}

// RMS amplitude of an interference-free span. Under AWGN of variance v the
// expectation is sqrt(A^2 + v), a small positive bias.
inline double estimate_direct(std::span<const ComplexSample> span) {
  return std::sqrt(mean_energy(span));
}

}  // namespace anc
