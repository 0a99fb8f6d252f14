#pragma once

#include <algorithm>
#include <optional>
#include <stdexcept>

#include "anc/errors.hpp"
#include "anc/rng.hpp"
#include "anc/types.hpp"

namespace anc {

// Quasi-static flat fading: one complex gain per packet, fixed for the whole
// frame. noise_variance is total per complex sample (split evenly between the
// real and imaginary parts).
struct ChannelParams {
  double gain = 1.0;
  double phase_shift = 0.0;
  double noise_variance = 0.0;
};

inline SampleBuffer apply_channel(const SampleBuffer& in, const ChannelParams& p) {
  if (p.gain <= 0.0) throw std::invalid_argument("apply_channel: gain must be > 0");
  const ComplexSample h = std::polar(p.gain, p.phase_shift);
  SampleBuffer out(in.size());
  for (std::size_t i = 0; i < in.size(); ++i) out[i] = h * in[i];
  return out;
}

inline SampleBuffer add_awgn(const SampleBuffer& in, double noise_variance,
                             RngStream& rng) {
  if (noise_variance < 0.0)
    throw std::invalid_argument("add_awgn: variance must be >= 0");
  if (noise_variance == 0.0) return in;
  std::normal_distribution<double> dist(0.0, std::sqrt(noise_variance / 2.0));
  SampleBuffer out(in.size());
  for (std::size_t i = 0; i < in.size(); ++i) {
    double re = dist(rng);
    double im = dist(rng);
    out[i] = in[i] + ComplexSample(re, im);
  }
  return out;
}

// Noiseless per-index ground truth of an interfered frame, kept for
// diagnostics and tests only; decoders never look at it.
struct FrameTruth {
  double a = 0.0;  // magnitude of the first signal
  double b = 0.0;  // magnitude of the second signal
  std::vector<double> theta;  // first signal's phase, per overlap index
  std::vector<double> phi;    // second signal's phase, per overlap index
  double initial_angle = 0.0;  // theta - phi at overlap start, wrapped
};

struct InterferedFrame {
  SampleBuffer samples;
  std::size_t overlap_start = 0;  // inclusive
  std::size_t overlap_end = 0;    // exclusive
  std::optional<FrameTruth> truth;
};

// Sample-wise sum of two frames, the second delayed by offset samples.
// Assumes both inputs are constant-modulus (already faded) signals.
inline InterferedFrame superpose(const SampleBuffer& first,
                                 const SampleBuffer& second,
                                 std::size_t offset) {
  const std::size_t ov_start = std::min(offset, first.size());
  const std::size_t ov_end = std::min(first.size(), offset + second.size());
  if (ov_end <= ov_start)
    throw NoInterferenceError("superpose: signals do not overlap");

  InterferedFrame f;
  f.samples.assign(std::max(first.size(), offset + second.size()),
                   ComplexSample(0.0, 0.0));
  for (std::size_t i = 0; i < first.size(); ++i) f.samples[i] += first[i];
  for (std::size_t i = 0; i < second.size(); ++i) f.samples[offset + i] += second[i];
  f.overlap_start = ov_start;
  f.overlap_end = ov_end;

  FrameTruth t;
  t.a = std::abs(first[ov_start]);
  t.b = std::abs(second[ov_start - offset]);
  t.theta.resize(ov_end - ov_start);
  t.phi.resize(ov_end - ov_start);
  for (std::size_t i = ov_start; i < ov_end; ++i) {
    t.theta[i - ov_start] = std::arg(first[i]);
    t.phi[i - ov_start] = std::arg(second[i - offset]);
  }
  t.initial_angle = wrap_angle(t.theta.front() - t.phi.front());
  f.truth = t;
  return f;
}

}  // namespace anc
