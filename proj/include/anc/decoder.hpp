#pragma once

#include <cstddef>
#include <limits>
#include <span>
#include <stdexcept>

#include "anc/amplitude.hpp"
#include "anc/channel.hpp"
#include "anc/modem.hpp"
#include "anc/phase_solver.hpp"
#include "anc/types.hpp"

namespace anc {

enum class Strategy { direct, legacy, geometric };

struct DecoderConfig {
  Strategy strategy = Strategy::geometric;
  double clamp_tolerance = 0.25;
  double tie_epsilon = 1e-3;
  double threshold_factor = 1.0;
  double noise_floor = 0.05;
  double jump_guard = 2.0;
  BitSeq pilot = default_pilot();  // shared known pattern, both parties
  std::uint64_t other_scrambler_seed = 0;
  double demod_epsilon = 1e-12;
  bool allow_fallback = true;  // drop to direct when the chosen estimator fails
  bool keep_event_pairs = false;
};

struct DecodeResult {
  BitSeq other_bits;  // other party's payload after descrambling
  AmplitudeEstimate amplitude_estimate;
  // Mismatch of the chosen pairing per other frame bit; -1 where the bit came
  // from plain single-signal demodulation.
  std::vector<double> per_bit_err;
  bool fallback_used = false;
  bool first_bit_unreliable = false;
  // Index into other_bits of the first bit whose transition touches the
  // overlap; -1 when that bit lands in a pilot.
  std::ptrdiff_t flagged_payload_bit = -1;
  std::size_t clamped_samples = 0;  // |D| beyond 1 + clamp_tolerance
};

namespace detail {

inline double rms_of_segments(const SampleBuffer& y,
                              std::pair<std::size_t, std::size_t> seg1,
                              std::pair<std::size_t, std::size_t> seg2) {
  double acc = 0.0;
  std::size_t n = 0;
  for (auto [s, e] : {seg1, seg2})
    for (std::size_t i = s; i < e; ++i) {
      acc += std::norm(y[i]);
      ++n;
    }
  if (n == 0) return -1.0;
  return std::sqrt(acc / static_cast<double>(n));
}

}  // namespace detail

// Recover the other party's payload from an interfered frame using own
// transmitted bits as the phase reference. Noncoherent: nothing about own
// received phase, own received amplitude, or the channels is assumed known.
inline DecodeResult decode_packet(const InterferedFrame& frame, const Packet& own,
                                  std::size_t own_offset, const DecoderConfig& cfg) {
  const auto& y = frame.samples;
  const std::size_t ov_s = frame.overlap_start;
  const std::size_t ov_e = frame.overlap_end;
  const std::size_t own_len = frame_sample_count(own);
  const std::size_t own_end = own_offset + own_len;
  if (own_end > y.size())
    throw std::invalid_argument("decode_packet: own span exceeds frame");
  if (ov_e <= ov_s || ov_e > y.size())
    throw std::invalid_argument("decode_packet: bad overlap bounds");
  if (ov_s < own_offset || ov_e > own_end)
    throw std::invalid_argument("decode_packet: overlap outside own span");

  // The other party's samples run from the frame edge own does not cover.
  const std::size_t other_start = ov_s > own_offset ? ov_s : 0;
  const std::size_t other_end = ov_e < own_end ? ov_e : y.size();
  const std::size_t other_len = other_end - other_start;
  if (other_len < 2) throw DecodeFailedError("decode_packet: other span too short");
  const std::size_t other_nbits = other_len - 1;
  if (other_nbits < 2 * cfg.pilot.size() + 1)
    throw DecodeFailedError("decode_packet: other span shorter than its pilots");

  const BitSeq own_bits = frame_bits(own);
  const std::span<const ComplexSample> overlap(y.data() + ov_s, ov_e - ov_s);
  const EnergyStats stats = compute_energy_stats(overlap);

  const auto own_only = std::pair{std::pair{own_offset, ov_s}, std::pair{ov_e, own_end}};
  const auto other_only =
      std::pair{std::pair{other_start, ov_s}, std::pair{ov_e, other_end}};
  const double a_direct = detail::rms_of_segments(y, own_only.first, own_only.second);
  const double b_direct =
      detail::rms_of_segments(y, other_only.first, other_only.second);

  DecodeResult res;

  auto direct_estimate = [&]() -> AmplitudeEstimate {
    AmplitudeEstimate est;
    est.method = AmplitudeMethod::direct;
    est.n_events = 0;
    if (a_direct > 0.0)
      est.a_self = a_direct;
    else if (b_direct > 0.0 && stats.mu > b_direct * b_direct)
      est.a_self = std::sqrt(stats.mu - b_direct * b_direct);
    else
      throw DecodeFailedError("decode_packet: no clean segment for own amplitude");
    if (b_direct > 0.0)
      est.b_other = b_direct;
    else if (stats.mu > est.a_self * est.a_self)
      est.b_other = std::sqrt(stats.mu - est.a_self * est.a_self);
    else
      throw DecodeFailedError("decode_packet: no clean segment for other amplitude");
    return est;
  };

  auto own_bit_at = [&](std::size_t frame_idx) -> Bit {
    return own_bits[frame_idx - own_offset - 1];
  };

  switch (cfg.strategy) {
    case Strategy::direct:
      res.amplitude_estimate = direct_estimate();
      break;
    case Strategy::legacy:
      try {
        auto [hi, lo] = legacy_joint_estimate(stats.mu, stats.sigma);
        // The moment statistics cannot say which magnitude is whose; assign
        // larger-to-self by convention.
        res.amplitude_estimate.a_self = hi;
        res.amplitude_estimate.b_other = lo;
        res.amplitude_estimate.method = AmplitudeMethod::legacy;
        res.amplitude_estimate.n_events = 0;
      } catch (const std::exception&) {
        if (!cfg.allow_fallback) throw;
        res.amplitude_estimate = direct_estimate();
        res.fallback_used = true;
      }
      break;
    case Strategy::geometric: {
      GeometricConfig gcfg;
      gcfg.threshold_factor = cfg.threshold_factor;
      gcfg.noise_floor = cfg.noise_floor;
      gcfg.jump_guard = cfg.jump_guard;
      gcfg.tie_epsilon = cfg.tie_epsilon;
      gcfg.keep_event_pairs = cfg.keep_event_pairs;
      // Own frame bit driving the transition into overlap-local index n.
      auto bit_at = [&](std::size_t n) -> Bit { return own_bit_at(ov_s + n); };
      try {
        res.amplitude_estimate = estimate_geometric(overlap, stats, bit_at, gcfg);
      } catch (const EstimationFailedError&) {
        if (!cfg.allow_fallback) throw;
        res.amplitude_estimate = direct_estimate();
        res.fallback_used = true;
      }
      break;
    }
  }

  const double a_est = res.amplitude_estimate.a_self;
  const double b_est = res.amplitude_estimate.b_other;
  if (!(a_est > 0.0) || !(b_est > 0.0))
    throw DecodeFailedError("decode_packet: nonpositive amplitude estimate");

  // Candidate decompositions for every overlap sample, clamp always; gross
  // energy mismatches are tallied instead of aborting the packet.
  std::vector<std::array<PhasePairSolution, 2>> sols(ov_e - ov_s);
  for (std::size_t i = ov_s; i < ov_e; ++i) {
    sols[i - ov_s] =
        possible_phase_pairs(y[i], a_est, b_est, std::numeric_limits<double>::infinity());
    if (std::abs(sols[i - ov_s][0].d_value) > 1.0 + cfg.clamp_tolerance)
      ++res.clamped_samples;
  }

  auto interfered = [&](std::size_t i) { return i >= ov_s && i < ov_e; };

  BitSeq other_frame_bits(other_nbits);
  res.per_bit_err.assign(other_nbits, -1.0);
  std::ptrdiff_t first_touch = -1;

  for (std::size_t k = 0; k < other_nbits; ++k) {
    const std::size_t t0 = other_start + k;
    const std::size_t t1 = t0 + 1;
    const bool in0 = interfered(t0);
    const bool in1 = interfered(t1);
    Bit bit = 0;
    double err = -1.0;
    if (in0 && in1) {
      const Bit own_bit = own_bit_at(t1);
      const double own_step = own_bit ? kHalfPi : -kHalfPi;
      const PairSelection sel =
          select_pair(sols[t0 - ov_s], sols[t1 - ov_s], own_step);
      bit = sel.delta_phi > 0.0 ? 1 : 0;
      err = sel.err;
    } else if (!in0 && !in1) {
      if (std::abs(y[t0]) >= cfg.demod_epsilon && std::abs(y[t1]) >= cfg.demod_epsilon)
        bit = std::arg(y[t1] * std::conj(y[t0])) > 0.0 ? 1 : 0;
    } else {
      // One endpoint clean: two candidate steps, keep the one closest to a
      // legal MSK step of +-pi/2.
      double best = std::numeric_limits<double>::infinity();
      double best_step = 0.0;
      for (std::size_t x = 0; x < 2; ++x) {
        double step;
        if (in1)
          step = wrap_angle(sols[t1 - ov_s][x].phi - std::arg(y[t0]));
        else
          step = wrap_angle(std::arg(y[t1]) - sols[t0 - ov_s][x].phi);
        const double e = std::min(angle_distance(step, kHalfPi),
                                  angle_distance(step, -kHalfPi));
        if (e < best) {
          best = e;
          best_step = step;
        }
      }
      bit = best_step > 0.0 ? 1 : 0;
      err = best;
    }
    if ((in0 || in1) && first_touch < 0) first_touch = static_cast<std::ptrdiff_t>(k);
    other_frame_bits[k] = bit;
    res.per_bit_err[k] = err;
  }

  const std::size_t pilot_len = cfg.pilot.size();
  const std::size_t payload_len = other_nbits - 2 * pilot_len;
  BitSeq scrambled(other_frame_bits.begin() + static_cast<std::ptrdiff_t>(pilot_len),
                   other_frame_bits.begin() +
                       static_cast<std::ptrdiff_t>(pilot_len + payload_len));
  res.other_bits = scramble(scrambled, cfg.other_scrambler_seed);

  if (first_touch >= 0) {
    res.first_bit_unreliable = true;
    const std::ptrdiff_t p = first_touch - static_cast<std::ptrdiff_t>(pilot_len);
    if (p >= 0 && p < static_cast<std::ptrdiff_t>(payload_len))
      res.flagged_payload_bit = p;
  }
  return res;
}

}  // namespace anc
