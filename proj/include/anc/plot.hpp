#pragma once

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <set>
#include <string>
#include <vector>

#include "anc/errors.hpp"
#include "anc/harness.hpp"

namespace anc {
namespace detail {

struct Rgb {
  int r, g, b;
};

// Three-stop ramp, dark blue -> amber -> red, t in [0, 1].
inline Rgb ramp(double t) {
  t = std::clamp(t, 0.0, 1.0);
  const Rgb lo{25, 60, 150}, mid{240, 180, 40}, hi{200, 30, 30};
  auto lerp = [](const Rgb& a, const Rgb& b, double u) {
    return Rgb{static_cast<int>(a.r + (b.r - a.r) * u + 0.5),
               static_cast<int>(a.g + (b.g - a.g) * u + 0.5),
               static_cast<int>(a.b + (b.b - a.b) * u + 0.5)};
  };
  return t < 0.5 ? lerp(lo, mid, 2.0 * t) : lerp(mid, hi, 2.0 * t - 1.0);
}

inline std::string fmt(const char* f, double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), f, v);
  return buf;
}

}  // namespace detail

// Per-party BER heatmaps over the (SIR, SNR) grid as a standalone SVG.
// The CSV remains the machine-readable artifact; this is for eyeballs.
inline void emit_plot(const std::vector<BerRecord>& records, const std::string& path) {
  std::set<double> snr_set, sir_set;
  std::set<std::string> parties;
  for (const auto& r : records) {
    snr_set.insert(r.snr_db);
    sir_set.insert(r.sir_db);
    parties.insert(r.party);
  }
  const std::vector<double> snrs(snr_set.begin(), snr_set.end());
  const std::vector<double> sirs(sir_set.begin(), sir_set.end());
  std::map<std::string, std::map<std::pair<double, double>, double>> ber;
  std::string strategy = records.empty() ? "" : records.front().strategy;
  for (const auto& r : records) ber[r.party][{r.snr_db, r.sir_db}] = r.ber;

  const int cell_w = 58, cell_h = 34, mx = 70, my = 58, gap = 60;
  const int panel_w = mx + cell_w * static_cast<int>(sirs.size()) + 14;
  const int panel_h = my + cell_h * static_cast<int>(snrs.size()) + 46;
  const int width = panel_w * static_cast<int>(parties.size()) +
                    gap * (static_cast<int>(parties.size()) - 1) + 10;

  const double lmin = -4.0, lmax = std::log10(0.5);
  std::string svg;
  svg += "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" + std::to_string(width) +
         "\" height=\"" + std::to_string(panel_h) + "\" font-family=\"sans-serif\">\n";
  svg += "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";

  int panel = 0;
  for (const auto& party : parties) {
    const int ox = panel * (panel_w + gap);
    svg += "<text x=\"" + std::to_string(ox + mx) + "\" y=\"24\" font-size=\"16\">" +
           party + " (" + strategy + ")</text>\n";
    for (std::size_t yi = 0; yi < snrs.size(); ++yi) {
      for (std::size_t xi = 0; xi < sirs.size(); ++xi) {
        const auto it = ber[party].find({snrs[yi], sirs[xi]});
        const int x = ox + mx + static_cast<int>(xi) * cell_w;
        const int y = my + static_cast<int>(snrs.size() - 1 - yi) * cell_h;
        std::string fill = "#ddd";
        std::string label = "-";
        if (it != ber[party].end()) {
          const double b = it->second;
          const double t = (std::log10(std::max(b, 1e-6)) - lmin) / (lmax - lmin);
          const auto c = detail::ramp(t);
          char cb[16];
          std::snprintf(cb, sizeof(cb), "#%02x%02x%02x", c.r, c.g, c.b);
          fill = cb;
          label = b == 0.0 ? "0" : detail::fmt("%.2g%%", 100.0 * b);
        }
        svg += "<rect x=\"" + std::to_string(x) + "\" y=\"" + std::to_string(y) +
               "\" width=\"" + std::to_string(cell_w - 2) + "\" height=\"" +
               std::to_string(cell_h - 2) + "\" fill=\"" + fill + "\"/>\n";
        svg += "<text x=\"" + std::to_string(x + cell_w / 2 - 1) + "\" y=\"" +
               std::to_string(y + cell_h / 2 + 4) +
               "\" font-size=\"11\" fill=\"white\" text-anchor=\"middle\">" + label +
               "</text>\n";
      }
    }
    for (std::size_t yi = 0; yi < snrs.size(); ++yi)
      svg += "<text x=\"" + std::to_string(ox + mx - 8) + "\" y=\"" +
             std::to_string(my + static_cast<int>(snrs.size() - 1 - yi) * cell_h +
                            cell_h / 2 + 4) +
             "\" font-size=\"12\" text-anchor=\"end\">" + detail::fmt("%g", snrs[yi]) +
             "</text>\n";
    for (std::size_t xi = 0; xi < sirs.size(); ++xi)
      svg += "<text x=\"" +
             std::to_string(ox + mx + static_cast<int>(xi) * cell_w + cell_w / 2 - 1) +
             "\" y=\"" + std::to_string(my + static_cast<int>(snrs.size()) * cell_h + 16) +
             "\" font-size=\"12\" text-anchor=\"middle\">" + detail::fmt("%g", sirs[xi]) +
             "</text>\n";
    svg += "<text x=\"" + std::to_string(ox + mx - 40) + "\" y=\"" +
           std::to_string(my - 12) + "\" font-size=\"12\">SNR dB</text>\n";
    svg += "<text x=\"" +
           std::to_string(ox + mx + cell_w * static_cast<int>(sirs.size()) / 2) +
           "\" y=\"" + std::to_string(panel_h - 10) +
           "\" font-size=\"12\" text-anchor=\"middle\">SIR dB</text>\n";
    ++panel;
  }
  svg += "</svg>\n";

  std::ofstream f(path, std::ios::binary | std::ios::trunc);
  if (!f) throw IoError("emit_plot: cannot open " + path);
  f << svg;
  if (!f) throw IoError("emit_plot: write failed for " + path);
}

}  // namespace anc
