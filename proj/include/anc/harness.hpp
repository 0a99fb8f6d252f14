#pragma once

#include <charconv>
#include <cstdint>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "anc/channel.hpp"
#include "anc/decoder.hpp"
#include "anc/errors.hpp"
#include "anc/modem.hpp"
#include "anc/rng.hpp"

namespace anc {

inline constexpr std::uint64_t kAliceScramblerSeed = 0xA11CE;
inline constexpr std::uint64_t kBobScramblerSeed = 0xB0B5;

struct SweepConfig {
  std::vector<double> snr_db{20, 22, 24, 26, 28, 30};
  std::vector<double> sir_db{-3, -2, -1, 0, 1, 2, 3};
  std::size_t packet_bits = 2048;
  std::size_t pilot_bits = 64;
  double mean_overlap = 0.8;
  std::size_t trials = 98;  // 98 * 2048 > 2e5 payload bits per grid point
  std::uint64_t seed = 1;
  Strategy strategy = Strategy::geometric;
  std::string out_path;
  std::size_t threads = 1;
  DecoderConfig decoder;  // strategy field is overridden per sweep
};

struct PartyTally {
  std::uint64_t bits = 0;
  std::uint64_t errors = 0;
  double amp_rel_err = 0.0;
  bool decode_failed = false;
};

struct TrialResult {
  PartyTally alice;
  PartyTally bob;
};

struct BerRecord {
  double snr_db = 0.0;
  double sir_db = 0.0;
  std::string party;
  std::string strategy;
  std::uint64_t bits_total = 0;
  std::uint64_t bit_errors = 0;
  double ber = 0.0;
  double mean_amp_rel_err = 0.0;
  std::uint64_t trials = 0;

  bool operator==(const BerRecord&) const = default;
};

inline const char* strategy_name(Strategy s) {
  switch (s) {
    case Strategy::direct: return "direct";
    case Strategy::legacy: return "legacy";
    case Strategy::geometric: return "geometric";
  }
  return "?";
}

namespace detail {

inline void tally_party(PartyTally& t, const DecodeResult& res, const BitSeq& sent,
                        double true_self, double true_other) {
  std::uint64_t errs = 0;
  std::uint64_t counted = 0;
  for (std::size_t i = 0; i < sent.size(); ++i) {
    if (static_cast<std::ptrdiff_t>(i) == res.flagged_payload_bit) continue;
    ++counted;
    if (res.other_bits[i] != sent[i]) ++errs;
  }
  t.bits = counted;
  t.errors = errs;
  const auto& est = res.amplitude_estimate;
  t.amp_rel_err = 0.5 * (std::abs(est.a_self - true_self) / true_self +
                         std::abs(est.b_other - true_other) / true_other);
}

inline void tally_failure(PartyTally& t, std::size_t payload_bits) {
  t.bits = payload_bits;
  t.errors = payload_bits;
  t.amp_rel_err = 1.0;
  t.decode_failed = true;
}

}  // namespace detail

// One packet exchange at the given operating point. Both parties transmit
// equal-length frames; the interferer lags by a random offset drawn so the
// mean overlap matches the configured fraction; each receiver sees its own
// independent noise realization of the same superposed frame.
inline TrialResult run_trial(double snr_db, double sir_db, const SweepConfig& cfg,
                             std::uint64_t seed) {
  RngStream rng(seed);
  const double a_amp = 1.0;
  const double b_amp = std::pow(10.0, -sir_db / 20.0);
  const double noise_var = std::pow(10.0, -snr_db / 10.0);

  std::uniform_int_distribution<int> bit(0, 1);
  Packet alice, bob;
  alice.pilot = default_pilot(cfg.pilot_bits);
  bob.pilot = alice.pilot;
  alice.scrambler_seed = kAliceScramblerSeed;
  bob.scrambler_seed = kBobScramblerSeed;
  alice.payload.resize(cfg.packet_bits);
  bob.payload.resize(cfg.packet_bits);
  for (auto& b : alice.payload) b = static_cast<Bit>(bit(rng));
  for (auto& b : bob.payload) b = static_cast<Bit>(bit(rng));

  std::uniform_real_distribution<double> phase(0.0, kTwoPi);
  const ChannelParams ch_a{a_amp, phase(rng), 0.0};
  const ChannelParams ch_b{b_amp, phase(rng), 0.0};
  const SampleBuffer sig_a = apply_channel(msk_modulate(alice), ch_a);
  const SampleBuffer sig_b = apply_channel(msk_modulate(bob), ch_b);

  const std::size_t frame_len = sig_a.size();
  const auto mean_gap =
      static_cast<std::size_t>((1.0 - cfg.mean_overlap) * static_cast<double>(frame_len) + 0.5);
  std::size_t offset = 0;
  if (mean_gap > 0) {
    std::uniform_int_distribution<std::size_t> off(1, std::max<std::size_t>(1, 2 * mean_gap - 1));
    offset = off(rng);
  }
  const bool alice_first = bit(rng) == 1;

  const InterferedFrame clean = alice_first ? superpose(sig_a, sig_b, offset)
                                            : superpose(sig_b, sig_a, offset);
  InterferedFrame rx_alice = clean;
  rx_alice.samples = add_awgn(clean.samples, noise_var, rng);
  InterferedFrame rx_bob = clean;
  rx_bob.samples = add_awgn(clean.samples, noise_var, rng);

  DecoderConfig dc = cfg.decoder;
  dc.strategy = cfg.strategy;
  dc.pilot = alice.pilot;

  TrialResult out;
  dc.other_scrambler_seed = bob.scrambler_seed;
  try {
    const DecodeResult r =
        decode_packet(rx_alice, alice, alice_first ? 0 : offset, dc);
    detail::tally_party(out.alice, r, bob.payload, a_amp, b_amp);
  } catch (const Error&) {
    detail::tally_failure(out.alice, cfg.packet_bits);
  }
  dc.other_scrambler_seed = alice.scrambler_seed;
  try {
    const DecodeResult r = decode_packet(rx_bob, bob, alice_first ? offset : 0, dc);
    detail::tally_party(out.bob, r, alice.payload, b_amp, a_amp);
  } catch (const Error&) {
    detail::tally_failure(out.bob, cfg.packet_bits);
  }
  return out;
}

// Full grid sweep. Work is split across threads by grid point; per-point
// trials stay sequential and every accumulation has a fixed order, so the
// records (and any CSV written from them) are identical for any thread count.
inline std::vector<BerRecord> sweep(const SweepConfig& cfg,
                                    std::uint64_t* decode_failures = nullptr) {
  if (cfg.snr_db.empty() || cfg.sir_db.empty())
    throw std::invalid_argument("sweep: empty grid");
  if (cfg.packet_bits == 0 || cfg.trials == 0)
    throw std::invalid_argument("sweep: packet_bits and trials must be > 0");
  if (cfg.pilot_bits == 0)
    throw std::invalid_argument("sweep: pilot_bits must be > 0");
  if (!(cfg.mean_overlap > 0.0) || cfg.mean_overlap > 1.0)
    throw std::invalid_argument("sweep: mean_overlap must be in (0, 1]");
  if (cfg.threads == 0) throw std::invalid_argument("sweep: threads must be > 0");

  if (!cfg.out_path.empty()) {
    std::ofstream probe(cfg.out_path, std::ios::app);
    if (!probe) throw IoError("sweep: cannot write " + cfg.out_path);
  }

  const std::size_t n_points = cfg.snr_db.size() * cfg.sir_db.size();
  std::vector<BerRecord> records(2 * n_points);
  std::vector<std::uint64_t> failures(cfg.threads, 0);

  auto run_point = [&](std::size_t p, std::uint64_t& fail_acc) {
    const double snr = cfg.snr_db[p / cfg.sir_db.size()];
    const double sir = cfg.sir_db[p % cfg.sir_db.size()];
    PartyTally alice, bob;
    double amp_a = 0.0, amp_b = 0.0;
    for (std::size_t t = 0; t < cfg.trials; ++t) {
      const TrialResult tr = run_trial(snr, sir, cfg, derive_seed(cfg.seed, p, t));
      alice.bits += tr.alice.bits;
      alice.errors += tr.alice.errors;
      amp_a += tr.alice.amp_rel_err;
      bob.bits += tr.bob.bits;
      bob.errors += tr.bob.errors;
      amp_b += tr.bob.amp_rel_err;
      fail_acc += (tr.alice.decode_failed ? 1 : 0) + (tr.bob.decode_failed ? 1 : 0);
    }
    const char* strat = strategy_name(cfg.strategy);
    BerRecord& ra = records[2 * p];
    ra = {snr, sir, "alice", strat, alice.bits, alice.errors,
          static_cast<double>(alice.errors) / static_cast<double>(alice.bits),
          amp_a / static_cast<double>(cfg.trials), cfg.trials};
    BerRecord& rb = records[2 * p + 1];
    rb = {snr, sir, "bob", strat, bob.bits, bob.errors,
          static_cast<double>(bob.errors) / static_cast<double>(bob.bits),
          amp_b / static_cast<double>(cfg.trials), cfg.trials};
  };

  if (cfg.threads == 1) {
    for (std::size_t p = 0; p < n_points; ++p) run_point(p, failures[0]);
  } else {
    std::vector<std::thread> pool;
    pool.reserve(cfg.threads);
    for (std::size_t w = 0; w < cfg.threads; ++w)
      pool.emplace_back([&, w] {
        for (std::size_t p = w; p < n_points; p += cfg.threads) run_point(p, failures[w]);
      });
    for (auto& th : pool) th.join();
  }
  if (decode_failures) {
    *decode_failures = 0;
    for (auto f : failures) *decode_failures += f;
  }
  return records;
}

inline constexpr const char* kCsvHeader =
    "snr_db,sir_db,party,strategy,bits_total,bit_errors,ber,mean_amp_rel_err,trials";

namespace detail {

inline std::string format_double(double v) {
  char buf[32];
  auto [end, ec] = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, end);
}

}  // namespace detail

inline std::string csv_string(const std::vector<BerRecord>& records) {
  std::string out(kCsvHeader);
  out.push_back('\n');
  for (const auto& r : records) {
    out += detail::format_double(r.snr_db);
    out.push_back(',');
    out += detail::format_double(r.sir_db);
    out.push_back(',');
    out += r.party;
    out.push_back(',');
    out += r.strategy;
    out.push_back(',');
    out += std::to_string(r.bits_total);
    out.push_back(',');
    out += std::to_string(r.bit_errors);
    out.push_back(',');
    out += detail::format_double(r.ber);
    out.push_back(',');
    out += detail::format_double(r.mean_amp_rel_err);
    out.push_back(',');
    out += std::to_string(r.trials);
    out.push_back('\n');
  }
  return out;
}

inline void emit_csv(const std::vector<BerRecord>& records, const std::string& path) {
  std::ofstream f(path, std::ios::binary | std::ios::trunc);
  if (!f) throw IoError("emit_csv: cannot open " + path);
  f << csv_string(records);
  if (!f) throw IoError("emit_csv: write failed for " + path);
}

// Strict inverse of emit_csv; to_chars round-trips every double exactly.
inline std::vector<BerRecord> parse_csv(std::istream& in) {
  std::string line;
  if (!std::getline(in, line) || line != kCsvHeader)
    throw IoError("parse_csv: bad header");
  std::vector<BerRecord> out;
  auto num = [](const std::string& s, double& v) {
    auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc() || p != s.data() + s.size())
      throw IoError("parse_csv: bad number " + s);
  };
  auto unum = [](const std::string& s, std::uint64_t& v) {
    auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc() || p != s.data() + s.size())
      throw IoError("parse_csv: bad count " + s);
  };
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::vector<std::string> f;
    std::size_t start = 0;
    for (std::size_t i = 0; i <= line.size(); ++i)
      if (i == line.size() || line[i] == ',') {
        f.push_back(line.substr(start, i - start));
        start = i + 1;
      }
    if (f.size() != 9) throw IoError("parse_csv: expected 9 columns");
    BerRecord r;
    num(f[0], r.snr_db);
    num(f[1], r.sir_db);
    r.party = f[2];
    r.strategy = f[3];
    unum(f[4], r.bits_total);
    unum(f[5], r.bit_errors);
    num(f[6], r.ber);
    num(f[7], r.mean_amp_rel_err);
    unum(f[8], r.trials);
    out.push_back(std::move(r));
  }
  return out;
}

inline std::vector<BerRecord> load_csv(const std::string& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw IoError("load_csv: cannot open " + path);
  return parse_csv(f);
}

}  // namespace anc
