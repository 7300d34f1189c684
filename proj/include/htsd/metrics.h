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

#ifndef HTSD_METRICS_H_
#define HTSD_METRICS_H_

#include <memory>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "htsd/decimator.h"
#include "htsd/spectrum.h"

namespace htsd {

struct ToneAnalysisOptions {
  int signal_half_width = 3;  // bins each side of the tone peak
  int max_harmonic = 9;
  int dc_guard_bins = 1;      // bins excluded after DC
  double min_prominence_db = 6.0;
};

struct ToneMetrics {
  double snr_db = 0.0;
  double sinad_db = 0.0;
  double thd_db = 0.0;   // dBc; -inf when no harmonic rises above the floor
  double sfdr_db = 0.0;
  double tone_frequency = 0.0;
  double signal_power = 0.0;  // relative to full-scale power
  double noise_power = 0.0;
  double distortion_power = 0.0;
};

// In-band tone analysis over (dc_guard, bw]. The noise density is the mean of
// the bins not claimed by the tone or its harmonics, extrapolated over the
// whole band; harmonic power is measured above that floor. Throws
// NoSignalToneError when the peak near f_tone is not min_prominence_db above
// the median in-band bin.
ToneMetrics AnalyzeTone(const Spectrum& s, double f_tone, double bw,
                        const ToneAnalysisOptions& opt = {});

// Largest in-band bin above the DC guard, Hz.
double FindTone(const Spectrum& s, double bw,
                const ToneAnalysisOptions& opt = {});

// Divides every bin by the decimator's magnitude response at its frequency.
// `input_rate` is the modulator rate the filter ran at.
Spectrum CompensateDroop(Spectrum s, double input_rate,
                         const DecimatorConfig& cfg);

inline double Enob(double sinad_db) { return (sinad_db - 1.76) / 6.02; }

// SINAD + 10 log10(BW / P).
double SchreierFom(double sinad_db, double bw_hz, double power_w);

enum class LineFit { kLeastSquares, kEndpoint };

std::string_view LineFitName(LineFit fit);
LineFit ParseLineFit(std::string_view name);

struct InlResult {
  double worst = 0.0;          // V
  std::vector<double> curve;   // codes - fitted line, V
  double gain = 1.0;
  double offset = 0.0;
  bool gross_failure = false;  // codes not monotone within tolerance
};

// Static INL of a DC sweep. Requires at least 33 points; when input_range is
// positive, the levels must span at least 80 % of it.
InlResult InlFromSweep(std::span<const double> levels,
                       std::span<const double> codes, LineFit fit,
                       double input_range = 0.0,
                       double monotone_tolerance = 1e-3);

struct MetricsReport {
  double snr = 0.0;
  double sinad = 0.0;
  double thd = 0.0;
  double sfdr = 0.0;
  double enob = 0.0;
  double inl_worst = 0.0;  // V; NaN when no DC sweep was run
  bool inl_gross_failure = false;
  double fom_schreier = 0.0;
  double bw = 0.0;
  double power = 0.0;      // W
  double tone_frequency = 0.0;
  double supply_current = 0.0;
  std::shared_ptr<const Spectrum> spectrum;

  // Fills snr..sfdr and enob from a tone analysis.
  void SetTone(const ToneMetrics& tone);
  // Recomputes fom_schreier from sinad, bw and power.
  void UpdateFom();
};

// "key: value" lines, preceded by `preamble` (resolved config, seed).
std::string ReportText(const MetricsReport& r, std::string_view preamble = {});

std::string ReportCsvHeader();
std::string ReportCsvRow(const MetricsReport& r);

}  // namespace htsd

#endif  // HTSD_METRICS_H_
