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

#include "htsd/spectrum.h"

#include <fftw3.h>
#include <fmt/format.h>

#include <bit>
#include <cmath>
#include <complex>
#include <limits>
#include <mutex>
#include <numbers>
#include <numeric>

#include "htsd/errors.h"

namespace htsd {
namespace {

// FFTW planning is not thread-safe; execution on distinct buffers is.
std::mutex& PlannerMutex() {
  static std::mutex m;
  return m;
}

class RealFft {
 public:
  explicit RealFft(size_t n)
      : n_(n),
        in_(fftw_alloc_real(n)),
        out_(fftw_alloc_complex(n / 2 + 1)) {
    std::lock_guard lock(PlannerMutex());
    plan_ = fftw_plan_dft_r2c_1d(static_cast<int>(n), in_, out_,
                                 FFTW_ESTIMATE);
  }
  ~RealFft() {
    std::lock_guard lock(PlannerMutex());
    fftw_destroy_plan(plan_);
    fftw_free(in_);
    fftw_free(out_);
  }
  RealFft(const RealFft&) = delete;
  RealFft& operator=(const RealFft&) = delete;

  double* input() { return in_; }
  void Execute() { fftw_execute(plan_); }
  double Norm(size_t k) const {
    return out_[k][0] * out_[k][0] + out_[k][1] * out_[k][1];
  }

 private:
  size_t n_;
  double* in_;
  fftw_complex* out_;
  fftw_plan plan_;
};

}  // namespace

std::string_view WindowName(Window w) {
  switch (w) {
    case Window::kRectangular:
      return "rectangular";
    case Window::kHann:
      return "hann";
    case Window::kBlackman:
      return "blackman";
  }
  return "unknown";
}

Window ParseWindow(std::string_view name) {
  if (name == "rectangular" || name == "rect") return Window::kRectangular;
  if (name == "hann") return Window::kHann;
  if (name == "blackman") return Window::kBlackman;
  throw ConfigError("unknown window '" + std::string(name) + "'");
}

std::vector<double> MakeWindow(Window w, size_t n) {
  std::vector<double> out(n, 1.0);
  const double step = 2.0 * std::numbers::pi / static_cast<double>(n);
  for (size_t i = 0; i < n; ++i) {
    const double x = step * static_cast<double>(i);
    switch (w) {
      case Window::kRectangular:
        break;
      case Window::kHann:
        out[i] = 0.5 - 0.5 * std::cos(x);
        break;
      case Window::kBlackman:
        out[i] = 0.42 - 0.5 * std::cos(x) + 0.08 * std::cos(2.0 * x);
        break;
    }
  }
  return out;
}

double Enbw(std::span<const double> window) {
  double sum = 0.0, sum_sq = 0.0;
  for (double v : window) {
    sum += v;
    sum_sq += v * v;
  }
  return static_cast<double>(window.size()) * sum_sq / (sum * sum);
}

double Spectrum::PowerDb(size_t k) const {
  return 10.0 * std::log10(power[k]);
}

double Spectrum::TotalPower() const {
  return std::accumulate(power.begin(), power.end(), 0.0);
}

Spectrum ComputePsd(std::span<const double> x, double sample_rate,
                    double full_scale, Window window, size_t n_fft) {
  if (n_fft < 4 || !std::has_single_bit(n_fft)) {
    throw ConfigError("psd: n_fft must be a power of two >= 4");
  }
  if (x.size() < n_fft) throw InputError("psd: input shorter than n_fft");
  if (!(sample_rate > 0.0) || !(full_scale > 0.0)) {
    throw ConfigError("psd: sample rate and full scale must be > 0");
  }

  const std::vector<double> w = MakeWindow(window, n_fft);
  const double sum_sq = std::inner_product(w.begin(), w.end(), w.begin(), 0.0);
  const size_t bins = n_fft / 2 + 1;
  const size_t segments = x.size() / n_fft;

  Spectrum s;
  s.power.assign(bins, 0.0);
  s.sample_rate = sample_rate;
  s.full_scale = full_scale;
  s.window = window;
  s.n_fft = n_fft;
  s.averages = segments;
  s.enbw = Enbw(w);

  const double fs_power = 0.5 * full_scale * full_scale;
  const double norm = 1.0 / (static_cast<double>(n_fft) * sum_sq * fs_power *
                             static_cast<double>(segments));
  RealFft fft(n_fft);
  for (size_t seg = 0; seg < segments; ++seg) {
    const double* src = x.data() + seg * n_fft;
    double* in = fft.input();
    for (size_t i = 0; i < n_fft; ++i) in[i] = src[i] * w[i];
    fft.Execute();
    for (size_t k = 0; k < bins; ++k) {
      const double one_sided = (k == 0 || k == bins - 1) ? 1.0 : 2.0;
      s.power[k] += one_sided * fft.Norm(k) * norm;
    }
  }
  return s;
}

Spectrum ComputePsd(const Bitstream& bs, Window window, size_t n_fft) {
  const std::vector<double> volts = bs.ToVolts();
  return ComputePsd(volts, bs.f_s, bs.v_ref, window, n_fft);
}

double FitSlopeDbPerDecade(const Spectrum& s, double f_lo, double f_hi) {
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  size_t n = 0;
  for (size_t k = 1; k < s.power.size(); ++k) {
    const double f = s.Frequency(k);
    if (f < f_lo || f > f_hi || !(s.power[k] > 0.0)) continue;
    const double x = std::log10(f);
    const double y = s.PowerDb(k);
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
    ++n;
  }
  if (n < 3) throw InputError("slope fit: fewer than 3 bins in range");
  const double dn = static_cast<double>(n);
  return (dn * sxy - sx * sy) / (dn * sxx - sx * sx);
}

std::string SpectrumCsv(const Spectrum& s, std::string_view preamble) {
  std::string out(preamble);
  out += "frequency_hz,power_dbfs\n";
  for (size_t k = 0; k < s.power.size(); ++k) {
    const double db = s.power[k] > 0.0 ? s.PowerDb(k)
                                       : -std::numeric_limits<double>::infinity();
    out += fmt::format("{:.6f},{:.4f}\n", s.Frequency(k), db);
  }
  return out;
}

}  // namespace htsd
