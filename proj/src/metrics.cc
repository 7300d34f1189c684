// Copyright 2026 The htsd Authors. All Rights Reserved.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "htsd/metrics.h"

#include <fmt/format.h>

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "htsd/errors.h"

namespace htsd {
namespace {

double Db(double ratio) {
  if (ratio <= 0.0) return -std::numeric_limits<double>::infinity();
  return 10.0 * std::log10(ratio);
}

struct Band {
  size_t lo = 0;
  size_t hi = 0;
};

Band InBand(const Spectrum& s, double bw, const ToneAnalysisOptions& opt) {
  const size_t k_max = s.power.size() - 1;
  Band band;
  band.lo = static_cast<size_t>(opt.dc_guard_bins) + 1;
  band.hi = std::min(k_max, static_cast<size_t>(
                                std::floor(bw / s.BinWidth() + 1e-9)));
  if (band.hi < band.lo + 2 * opt.signal_half_width + 2) {
    throw InputError("tone analysis: too few in-band bins");
  }
  return band;
}

}  // namespace

double FindTone(const Spectrum& s, double bw, const ToneAnalysisOptions& opt) {
  const Band band = InBand(s, bw, opt);
  size_t best = band.lo;
  for (size_t k = band.lo; k <= band.hi; ++k) {
    if (s.power[k] > s.power[best]) best = k;
  }
  return s.Frequency(best);
}

ToneMetrics AnalyzeTone(const Spectrum& s, double f_tone, double bw,
                        const ToneAnalysisOptions& opt) {
  const Band band = InBand(s, bw, opt);
  const double df = s.BinWidth();
  const long hw = opt.signal_half_width;

  const long guess = std::lround(f_tone / df);
  if (guess < static_cast<long>(band.lo) ||
      guess > static_cast<long>(band.hi)) {
    throw InputError("tone analysis: tone frequency outside the band");
  }
  size_t k0 = static_cast<size_t>(guess);
  for (long k = guess - 2; k <= guess + 2; ++k) {
    if (k < static_cast<long>(band.lo) || k > static_cast<long>(band.hi)) {
      continue;
    }
    if (s.power[k] > s.power[k0]) k0 = static_cast<size_t>(k);
  }
  if (static_cast<long>(k0) - hw < static_cast<long>(band.lo)) {
    throw InputError("tone analysis: tone too close to DC for the window");
  }

  std::vector<double> inband(s.power.begin() + band.lo,
                             s.power.begin() + band.hi + 1);
  std::nth_element(inband.begin(), inband.begin() + inband.size() / 2,
                   inband.end());
  const double median = inband[inband.size() / 2];
  if (!(s.power[k0] >= median * std::pow(10.0, opt.min_prominence_db / 10.0))) {
    throw NoSignalToneError("no signal tone above the in-band floor");
  }

  // 0 = free, 1 = signal, h = harmonic h.
  std::vector<int> owner(s.power.size(), 0);
  auto claim = [&](long center, int tag) {
    for (long k = center - hw; k <= center + hw; ++k) {
      if (k < static_cast<long>(band.lo) || k > static_cast<long>(band.hi)) {
        continue;
      }
      if (owner[k] == 0) owner[k] = tag;
    }
  };
  claim(static_cast<long>(k0), 1);
  const double f0 = s.Frequency(k0);
  for (int h = 2; h <= opt.max_harmonic; ++h) {
    double fh = std::fmod(h * f0, s.sample_rate);
    if (fh > s.sample_rate / 2.0) fh = s.sample_rate - fh;
    const long kh = std::lround(fh / df);
    if (kh >= static_cast<long>(band.lo) && kh <= static_cast<long>(band.hi)) {
      claim(kh, h);
    }
  }

  double noise_sum = 0.0;
  size_t noise_bins = 0;
  double max_noise_bin = 0.0;
  for (size_t k = band.lo; k <= band.hi; ++k) {
    if (owner[k] != 0) continue;
    noise_sum += s.power[k];
    max_noise_bin = std::max(max_noise_bin, s.power[k]);
    ++noise_bins;
  }
  if (noise_bins == 0) throw InputError("tone analysis: no noise bins left");
  const double floor = noise_sum / static_cast<double>(noise_bins);

  std::vector<double> group(opt.max_harmonic + 1, 0.0);
  std::vector<size_t> group_bins(opt.max_harmonic + 1, 0);
  for (size_t k = band.lo; k <= band.hi; ++k) {
    if (owner[k] == 0) continue;
    group[owner[k]] += s.power[k];
    ++group_bins[owner[k]];
  }

  ToneMetrics m;
  m.tone_frequency = f0;
  m.signal_power = std::max(0.0, group[1] - floor * group_bins[1]);
  if (!(m.signal_power > 0.0)) {
    throw NoSignalToneError("signal tone does not rise above the noise floor");
  }
  m.noise_power = floor * static_cast<double>(band.hi);
  double max_spur = max_noise_bin;
  for (int h = 2; h <= opt.max_harmonic; ++h) {
    if (group_bins[h] == 0) continue;
    m.distortion_power += std::max(0.0, group[h] - floor * group_bins[h]);
    max_spur = std::max(max_spur, group[h]);
  }
  m.snr_db = Db(m.signal_power / m.noise_power);
  m.sinad_db = Db(m.signal_power / (m.noise_power + m.distortion_power));
  m.thd_db = Db(m.distortion_power / m.signal_power);
  m.sfdr_db = Db(m.signal_power / max_spur);
  return m;
}

Spectrum CompensateDroop(Spectrum s, double input_rate,
                         const DecimatorConfig& cfg) {
  for (size_t k = 1; k < s.power.size(); ++k) {
    const double droop_db = PassbandDroopDb(s.Frequency(k), input_rate, cfg);
    s.power[k] /= std::pow(10.0, droop_db / 10.0);
  }
  return s;
}

double SchreierFom(double sinad_db, double bw_hz, double power_w) {
  if (!(bw_hz > 0.0) || !(power_w > 0.0)) {
    throw ConfigError("fom: bandwidth and power must be > 0");
  }
  return sinad_db + 10.0 * std::log10(bw_hz / power_w);
}

std::string_view LineFitName(LineFit fit) {
  return fit == LineFit::kEndpoint ? "endpoint" : "least-squares";
}

LineFit ParseLineFit(std::string_view name) {
  if (name == "least-squares" || name == "lsq") return LineFit::kLeastSquares;
  if (name == "endpoint") return LineFit::kEndpoint;
  throw ConfigError("unknown INL fit '" + std::string(name) + "'");
}

InlResult InlFromSweep(std::span<const double> levels,
                       std::span<const double> codes, LineFit fit,
                       double input_range, double monotone_tolerance) {
  if (levels.size() != codes.size()) {
    throw InputError("inl: levels and codes differ in length");
  }
  if (levels.size() < 33) throw InputError("inl: need at least 33 points");

  std::vector<size_t> order(levels.size());
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(),
            [&](size_t a, size_t b) { return levels[a] < levels[b]; });
  const double lo = levels[order.front()];
  const double hi = levels[order.back()];
  if (input_range > 0.0 && hi - lo < 0.8 * input_range * (1.0 - 1e-9)) {
    throw InputError("inl: sweep spans less than 80 % of the input range");
  }

  InlResult r;
  if (fit == LineFit::kEndpoint) {
    r.gain = (codes[order.back()] - codes[order.front()]) / (hi - lo);
    r.offset = codes[order.front()] - r.gain * lo;
  } else {
    const double n = static_cast<double>(levels.size());
    const double mx = std::accumulate(levels.begin(), levels.end(), 0.0) / n;
    const double my = std::accumulate(codes.begin(), codes.end(), 0.0) / n;
    double sxx = 0.0, sxy = 0.0;
    for (size_t i = 0; i < levels.size(); ++i) {
      sxx += (levels[i] - mx) * (levels[i] - mx);
      sxy += (levels[i] - mx) * (codes[i] - my);
    }
    r.gain = sxy / sxx;
    r.offset = my - r.gain * mx;
  }

  r.curve.resize(levels.size());
  for (size_t i = 0; i < levels.size(); ++i) {
    r.curve[i] = codes[i] - (r.gain * levels[i] + r.offset);
    r.worst = std::max(r.worst, std::abs(r.curve[i]));
  }
  for (size_t i = 1; i < order.size(); ++i) {
    if (codes[order[i]] < codes[order[i - 1]] - monotone_tolerance) {
      r.gross_failure = true;
    }
  }
  return r;
}

void MetricsReport::SetTone(const ToneMetrics& tone) {
  snr = tone.snr_db;
  sinad = tone.sinad_db;
  thd = tone.thd_db;
  sfdr = tone.sfdr_db;
  enob = Enob(sinad);
  tone_frequency = tone.tone_frequency;
}

void MetricsReport::UpdateFom() {
  fom_schreier = (bw > 0.0 && power > 0.0)
                     ? SchreierFom(sinad, bw, power)
                     : std::numeric_limits<double>::quiet_NaN();
}

std::string ReportText(const MetricsReport& r, std::string_view preamble) {
  std::string out(preamble);
  out += fmt::format("snr_db: {:.3f}\n", r.snr);
  out += fmt::format("sinad_db: {:.3f}\n", r.sinad);
  out += fmt::format("thd_dbc: {:.3f}\n", r.thd);
  out += fmt::format("sfdr_db: {:.3f}\n", r.sfdr);
  out += fmt::format("enob_bits: {:.4f}\n", r.enob);
  out += fmt::format("inl_worst_v: {:.6e}\n", r.inl_worst);
  out += fmt::format("inl_gross_failure: {}\n", r.inl_gross_failure);
  out += fmt::format("fom_schreier_db: {:.3f}\n", r.fom_schreier);
  out += fmt::format("bw_hz: {:.4f}\n", r.bw);
  out += fmt::format("power_w: {:.6e}\n", r.power);
  out += fmt::format("supply_current_a: {:.6e}\n", r.supply_current);
  out += fmt::format("tone_frequency_hz: {:.6f}\n", r.tone_frequency);
  return out;
}

std::string ReportCsvHeader() {
  return "snr_db,sinad_db,thd_dbc,sfdr_db,enob_bits,inl_worst_v,"
         "inl_gross_failure,fom_schreier_db,bw_hz,power_w,supply_current_a,tone_frequency_hz\n";
}

std::string ReportCsvRow(const MetricsReport& r) {
  return fmt::format("{:.4f},{:.4f},{:.4f},{:.4f},{:.5f},{:.6e},{:d},{:.4f},"
                     "{:.4f},{:.6e},{:.6e},{:.6f}\n",
                     r.snr, r.sinad, r.thd, r.sfdr, r.enob, r.inl_worst,
                     static_cast<int>(r.inl_gross_failure), r.fom_schreier, r.bw, r.power, r.supply_current,
                     r.tone_frequency);
}

}  // namespace htsd
