#pragma once

#include <cstddef>
#include <stdexcept>

#include "anc/errors.hpp"
#include "anc/types.hpp"

namespace anc {

// 16-bit maximal-length Fibonacci LFSR, taps 16,14,13,11
// (x^16 + x^14 + x^13 + x^11 + 1), period 65535.
class Lfsr16 {
 public:
  explicit Lfsr16(std::uint64_t seed) : state_(fold(seed)) {}

  Bit next() {
    Bit out = static_cast<Bit>(state_ & 1u);
    unsigned fb = ((state_ >> 0) ^ (state_ >> 2) ^ (state_ >> 3) ^ (state_ >> 5)) & 1u;
    state_ = static_cast<std::uint16_t>((state_ >> 1) | (fb << 15));
    return out;
  }

 private:
  // XOR-fold a 64-bit seed onto the 16-bit state; the all-zero fixed point is
  // remapped so every seed yields a running sequence.
  static std::uint16_t fold(std::uint64_t seed) {
    auto s = static_cast<std::uint16_t>(seed ^ (seed >> 16) ^ (seed >> 32) ^ (seed >> 48));
    return s == 0 ? 0xACE1u : s;
  }

  std::uint16_t state_;
};

inline BitSeq pn_sequence(std::size_t n, std::uint64_t seed) {
  BitSeq out(n);
  Lfsr16 gen(seed);
  for (auto& b : out) b = gen.next();
  return out;
}

// XOR with the seed-selected PN sequence. Applying twice restores the input.
inline BitSeq scramble(const BitSeq& bits, std::uint64_t seed) {
  BitSeq out(bits.size());
  Lfsr16 gen(seed);
  for (std::size_t i = 0; i < bits.size(); ++i)
    out[i] = static_cast<Bit>((bits[i] ^ gen.next()) & 1u);
  return out;
}

inline constexpr std::uint64_t kPilotPatternSeed = 0xBEEF;

// Known pilot pattern shared by all transmitters. The first bit is pinned to 1
// so the opening phase step of every frame is the same system-wide.
inline BitSeq default_pilot(std::size_t n = 64) {
  BitSeq p(n);
  if (n == 0) return p;
  p[0] = 1;
  Lfsr16 gen(kPilotPatternSeed);
  for (std::size_t i = 1; i < n; ++i) p[i] = gen.next();
  return p;
}

// What a sender knows about its own transmission.
struct Packet {
  BitSeq payload;
  BitSeq pilot = default_pilot();
  std::uint64_t scrambler_seed = 0;
  double amplitude = 1.0;
  double initial_phase = 0.0;
};

// On-air bit layout: pilot, scrambled payload, pilot again.
inline BitSeq frame_bits(const Packet& p) {
  BitSeq out;
  out.reserve(2 * p.pilot.size() + p.payload.size());
  out.insert(out.end(), p.pilot.begin(), p.pilot.end());
  BitSeq body = scramble(p.payload, p.scrambler_seed);
  out.insert(out.end(), body.begin(), body.end());
  out.insert(out.end(), p.pilot.begin(), p.pilot.end());
  return out;
}

inline std::size_t frame_bit_count(const Packet& p) {
  return 2 * p.pilot.size() + p.payload.size();
}

inline std::size_t frame_sample_count(const Packet& p) {
  return frame_bit_count(p) + 1;
}

// MSK at one sample per bit: bit 1 advances the phase by +pi/2, bit 0 by
// -pi/2. N bits produce N+1 samples; the phase step lives between samples.
// Steps are applied as exact quarter-turn rotations so no phase drift
// accumulates over long frames.
inline SampleBuffer modulate_bits(const BitSeq& bits, double amplitude,
                                  double initial_phase) {
  if (amplitude <= 0.0) throw std::invalid_argument("modulate_bits: amplitude must be > 0");
  const ComplexSample c0 = std::polar(amplitude, initial_phase);
  const ComplexSample quarter[4] = {c0, c0 * ComplexSample(0.0, 1.0), -c0,
                                    c0 * ComplexSample(0.0, -1.0)};
  SampleBuffer out(bits.size() + 1);
  unsigned k = 0;
  out[0] = quarter[0];
  for (std::size_t n = 0; n < bits.size(); ++n) {
    k = (k + (bits[n] ? 1u : 3u)) & 3u;
    out[n + 1] = quarter[k];
  }
  return out;
}

inline SampleBuffer msk_modulate(const Packet& p) {
  return modulate_bits(frame_bits(p), p.amplitude, p.initial_phase);
}

// Noncoherent demodulation: the sign of the phase increment between
// consecutive samples decides the bit. Needs no absolute phase or amplitude.
inline BitSeq msk_demodulate(const SampleBuffer& samples, double eps = 1e-12) {
  if (samples.size() < 2)
    throw std::invalid_argument("msk_demodulate: need at least 2 samples");
  BitSeq out(samples.size() - 1);
  for (std::size_t n = 0; n + 1 < samples.size(); ++n) {
    if (std::abs(samples[n]) < eps || std::abs(samples[n + 1]) < eps)
      throw DegenerateSampleError("msk_demodulate: sample magnitude below epsilon");
    double step = std::arg(samples[n + 1] * std::conj(samples[n]));
    out[n] = step > 0.0 ? 1 : 0;
  }
  return out;
}

}  // namespace anc
