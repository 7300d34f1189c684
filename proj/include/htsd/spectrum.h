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

#ifndef HTSD_SPECTRUM_H_
#define HTSD_SPECTRUM_H_

#include <cstddef>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "htsd/modulator.h"

namespace htsd {

enum class Window { kRectangular, kHann, kBlackman };

std::string_view WindowName(Window w);
// Throws ConfigError on an unknown name.
Window ParseWindow(std::string_view name);

// Periodic (DFT-even) window of length n.
std::vector<double> MakeWindow(Window w, size_t n);

// Equivalent noise bandwidth in bins: n * sum(w^2) / sum(w)^2.
double Enbw(std::span<const double> window);

// One-sided averaged periodogram. power[k] is the mean-square contribution
// of bin k relative to a full-scale sine (full_scale^2 / 2), so a coherent
// full-scale tone sums to 1 (0 dBFS) over its bins and the total equals the
// record's mean square over full-scale power.
struct Spectrum {
  std::vector<double> power;  // n_fft / 2 + 1 bins
  double sample_rate = 0.0;
  double full_scale = 1.0;
  Window window = Window::kHann;
  size_t n_fft = 0;
  size_t averages = 0;
  double enbw = 1.0;  // bins

  double BinWidth() const { return sample_rate / static_cast<double>(n_fft); }
  double Frequency(size_t k) const { return k * BinWidth(); }
  double PowerDb(size_t k) const;
  double TotalPower() const;
};

// Splits x into floor(len / n_fft) non-overlapping segments and averages
// their periodograms. n_fft must be a power of two and <= x.size().
Spectrum ComputePsd(std::span<const double> x, double sample_rate,
                    double full_scale, Window window, size_t n_fft);

// Bitstream in volts against a full scale of v_ref.
Spectrum ComputePsd(const Bitstream& bs, Window window, size_t n_fft);

// Least-squares slope of the dB spectrum against log10(f) over
// [f_lo, f_hi], dB/decade.
double FitSlopeDbPerDecade(const Spectrum& s, double f_lo, double f_hi);

// Two-column CSV: frequency_hz,power_dbfs.
std::string SpectrumCsv(const Spectrum& s, std::string_view preamble = {});

}  // namespace htsd

#endif  // HTSD_SPECTRUM_H_
