#include <gtest/gtest.h>

#include "anc/channel.hpp"
#include "anc/modem.hpp"
#include "anc/rng.hpp"

using namespace anc;

namespace {

// Reference PN generator, written against the register diagram instead of the
// shifted-word form the library uses: 16 bit cells, feedback from taps
// 16,14,13,11 into the top, output from the bottom.
struct ReferenceLfsr {
  int cell[16];
  explicit ReferenceLfsr(std::uint16_t init) {
    for (int i = 0; i < 16; ++i) cell[i] = (init >> i) & 1;
  }
  int step() {
    int out = cell[0];
    int fb = cell[0] ^ cell[2] ^ cell[3] ^ cell[5];
    for (int i = 0; i < 15; ++i) cell[i] = cell[i + 1];
    cell[15] = fb;
    return out;
  }
};

std::uint16_t fold16(std::uint64_t seed) {
  auto s = static_cast<std::uint16_t>(seed ^ (seed >> 16) ^ (seed >> 32) ^ (seed >> 48));
  return s == 0 ? 0xACE1u : s;
}

}  // namespace

TEST(Pn, MatchesReferenceGenerator) {
  for (std::uint64_t seed : {1ull, 7ull, 0xBEEFull, 0ull, 0x123456789ABCDEFull}) {
    ReferenceLfsr ref(fold16(seed));
    const BitSeq got = pn_sequence(64, seed);
    for (int i = 0; i < 64; ++i) EXPECT_EQ(got[i], ref.step()) << "seed " << seed << " bit " << i;
  }
}

TEST(Pn, SeedSevenPrefixFrozen) {
  const BitSeq expect{1, 1, 1, 0, 0, 0, 0, 0};
  EXPECT_EQ(pn_sequence(8, 7), expect);
}

TEST(Pn, FullPeriod) {
  Lfsr16 g(1);
  BitSeq first(65535);
  for (auto& b : first) b = g.next();
  BitSeq second(65535);
  for (auto& b : second) b = g.next();
  EXPECT_EQ(first, second);
  std::size_t ones = 0;
  for (Bit b : first) ones += b;
  EXPECT_EQ(ones, 32768u);  // maximal-length balance
}

TEST(Scramble, SeedSevenAllOnes) {
  const BitSeq in(8, 1);
  const BitSeq expect{0, 0, 0, 1, 1, 1, 1, 1};
  EXPECT_EQ(scramble(in, 7), expect);
}

TEST(Scramble, Involution) {
  auto rng = make_stream(42);
  std::uniform_int_distribution<int> bit(0, 1);
  for (std::uint64_t seed : {0ull, 7ull, 999ull}) {
    BitSeq in(501);
    for (auto& b : in) b = static_cast<Bit>(bit(rng));
    EXPECT_EQ(scramble(scramble(in, seed), seed), in);
  }
}

TEST(Scramble, SeedsDiffer) {
  const BitSeq zeros(64, 0);
  EXPECT_NE(scramble(zeros, 1), scramble(zeros, 2));
}

TEST(Pilot, FirstBitFixedAndDeterministic) {
  const BitSeq p = default_pilot(64);
  ASSERT_EQ(p.size(), 64u);
  EXPECT_EQ(p[0], 1);
  EXPECT_EQ(default_pilot(64), p);
  EXPECT_EQ(default_pilot(16), BitSeq(p.begin(), p.begin() + 16));
}

TEST(Modulate, SingleOneBit) {
  const SampleBuffer s = modulate_bits({1}, 1.0, 0.0);
  ASSERT_EQ(s.size(), 2u);
  EXPECT_NEAR(std::abs(s[0] - ComplexSample(1, 0)), 0.0, 1e-15);
  EXPECT_NEAR(std::abs(s[1] - ComplexSample(0, 1)), 0.0, 1e-15);
}

TEST(Modulate, UpDownPair) {
  const SampleBuffer s = modulate_bits({1, 0}, 2.0, 0.0);
  ASSERT_EQ(s.size(), 3u);
  EXPECT_NEAR(std::abs(s[0] - ComplexSample(2, 0)), 0.0, 1e-15);
  EXPECT_NEAR(std::abs(s[1] - ComplexSample(0, 2)), 0.0, 1e-15);
  EXPECT_NEAR(std::abs(s[2] - ComplexSample(2, 0)), 0.0, 1e-15);
}

TEST(Modulate, ConstantModulusLongFrame) {
  auto rng = make_stream(3);
  std::uniform_int_distribution<int> bit(0, 1);
  BitSeq bits(4000);
  for (auto& b : bits) b = static_cast<Bit>(bit(rng));
  const double amp = 1.7;
  const SampleBuffer s = modulate_bits(bits, amp, 0.9);
  ASSERT_EQ(s.size(), bits.size() + 1);
  for (const auto& y : s) EXPECT_DOUBLE_EQ(std::abs(y), amp);
}

TEST(Modulate, PhaseStepsAreExactQuarterTurns) {
  auto rng = make_stream(4);
  std::uniform_int_distribution<int> bit(0, 1);
  BitSeq bits(512);
  for (auto& b : bits) b = static_cast<Bit>(bit(rng));
  const SampleBuffer s = modulate_bits(bits, 1.0, 2.1);
  for (std::size_t n = 0; n < bits.size(); ++n) {
    const double step = std::arg(s[n + 1] * std::conj(s[n]));
    EXPECT_NEAR(step, bits[n] ? kHalfPi : -kHalfPi, 1e-12);
  }
}

TEST(Modulate, RejectsNonPositiveAmplitude) {
  EXPECT_THROW(modulate_bits({1}, 0.0, 0.0), std::invalid_argument);
  EXPECT_THROW(modulate_bits({1}, -1.0, 0.0), std::invalid_argument);
}

TEST(Demodulate, KnownTriple) {
  const SampleBuffer s{{1, 0}, {0, 1}, {1, 0}};
  EXPECT_EQ(msk_demodulate(s), (BitSeq{1, 0}));
}

TEST(Demodulate, InvertsModulate) {
  auto rng = make_stream(5);
  std::uniform_int_distribution<int> bit(0, 1);
  std::uniform_real_distribution<double> ph(0.0, kTwoPi);
  std::uniform_real_distribution<double> amp(0.1, 3.0);
  for (int trial = 0; trial < 20; ++trial) {
    BitSeq bits(257);
    for (auto& b : bits) b = static_cast<Bit>(bit(rng));
    EXPECT_EQ(msk_demodulate(modulate_bits(bits, amp(rng), ph(rng))), bits);
  }
}

TEST(Demodulate, FadingInvariant) {
  auto rng = make_stream(6);
  std::uniform_int_distribution<int> bit(0, 1);
  std::uniform_real_distribution<double> ph(0.0, kTwoPi);
  BitSeq bits(300);
  for (auto& b : bits) b = static_cast<Bit>(bit(rng));
  const SampleBuffer s = modulate_bits(bits, 1.0, 0.0);
  for (int trial = 0; trial < 10; ++trial) {
    ChannelParams p{0.05 + trial * 0.4, ph(rng), 0.0};
    EXPECT_EQ(msk_demodulate(apply_channel(s, p)), bits);
  }
}

TEST(Demodulate, DegenerateSampleThrows) {
  const SampleBuffer s{{1, 0}, {0, 0}, {1, 0}};
  EXPECT_THROW(msk_demodulate(s), DegenerateSampleError);
}

TEST(Demodulate, TooShortThrows) {
  EXPECT_THROW(msk_demodulate(SampleBuffer{{1, 0}}), std::invalid_argument);
}

TEST(Frame, LayoutAndSampleCount) {
  Packet p;
  p.payload = BitSeq{1, 0, 1, 1};
  p.pilot = BitSeq{1, 0};
  p.scrambler_seed = 7;
  const BitSeq fb = frame_bits(p);
  ASSERT_EQ(fb.size(), 8u);
  EXPECT_EQ(BitSeq(fb.begin(), fb.begin() + 2), p.pilot);
  EXPECT_EQ(BitSeq(fb.end() - 2, fb.end()), p.pilot);
  EXPECT_EQ(BitSeq(fb.begin() + 2, fb.begin() + 6), scramble(p.payload, 7));
  EXPECT_EQ(frame_sample_count(p), 9u);
  EXPECT_EQ(msk_modulate(p).size(), 9u);
}

TEST(Frame, PayloadRoundTripThroughScrambler) {
  Packet p;
  p.payload = BitSeq{0, 1, 1, 0, 1, 0, 0, 1};
  p.scrambler_seed = 1234;
  const BitSeq fb = frame_bits(p);
  const std::size_t n = p.pilot.size();
  const BitSeq body(fb.begin() + static_cast<std::ptrdiff_t>(n),
                    fb.end() - static_cast<std::ptrdiff_t>(n));
  EXPECT_EQ(scramble(body, p.scrambler_seed), p.payload);
}
