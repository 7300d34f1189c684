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

#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>

#include "htsd/errors.h"

namespace htsd {
namespace {

constexpr double kFs = 1000.0;
constexpr size_t kN = size_t{1} << 16;
constexpr double kBw = 250.0;

// Tone of `amplitude` at bin `bin` plus optional third harmonic and noise.
std::vector<double> Synth(double amplitude, size_t bin, double h3_dbc,
                          double sigma, uint64_t seed) {
  std::mt19937_64 gen(seed);
  std::normal_distribution<double> normal(0.0, sigma);
  const double h3 = amplitude * std::pow(10.0, h3_dbc / 20.0);
  std::vector<double> x(kN);
  for (size_t i = 0; i < kN; ++i) {
    const double phase = 2.0 * std::numbers::pi * bin * i / kN;
    x[i] = amplitude * std::sin(phase) + h3 * std::sin(3.0 * phase) +
           (sigma > 0.0 ? normal(gen) : 0.0);
  }
  return x;
}

// Noise sigma giving `snr_db` for a unit-amplitude tone over (0, kBw].
double SigmaFor(double snr_db) {
  return std::sqrt(0.5 / std::pow(10.0, snr_db / 10.0) / (kBw / (kFs / 2.0)));
}

ToneMetrics Analyze(const std::vector<double>& x, Window w = Window::kHann,
                    size_t bin = 1000) {
  return AnalyzeTone(ComputePsd(x, kFs, 1.0, w, kN), bin * kFs / kN, kBw);
}

TEST(ToneTest, RecoversConstructedSnr) {
  const ToneMetrics m = Analyze(Synth(1.0, 1000, -400, SigmaFor(80.0), 1));
  EXPECT_NEAR(m.snr_db, 80.0, 0.5);
  EXPECT_LE(m.sinad_db, m.snr_db);
  EXPECT_NEAR(10.0 * std::log10(m.signal_power), 0.0, 0.01);
}

TEST(ToneTest, RecoversConstructedHarmonic) {
  const double sigma = SigmaFor(100.0);
  const ToneMetrics clean = Analyze(Synth(1.0, 1000, -400, sigma, 2));
  const ToneMetrics m = Analyze(Synth(1.0, 1000, -90.0, sigma, 2));
  EXPECT_NEAR(m.thd_db, -90.0, 0.5);
  EXPECT_NEAR(m.snr_db, clean.snr_db, 0.1);
  EXPECT_NEAR(m.sfdr_db, 90.0, 0.5);
  EXPECT_LT(m.sinad_db, m.snr_db);
}

TEST(ToneTest, FoldedHarmonicIsFound) {
  // 3 * 300 Hz folds to 100 Hz at a 1 kHz rate.
  const size_t bin = static_cast<size_t>(300.0 * kN / kFs);
  const std::vector<double> x = Synth(1.0, bin, -80.0, SigmaFor(110.0), 3);
  const Spectrum s = ComputePsd(x, kFs, 1.0, Window::kHann, kN);
  const ToneMetrics m = AnalyzeTone(s, bin * kFs / kN, 490.0);
  EXPECT_NEAR(m.thd_db, -80.0, 0.5);
}

TEST(ToneTest, NoToneIsAnError) {
  const std::vector<double> x = Synth(0.0, 1000, -400, 1e-3, 4);
  EXPECT_THROW(Analyze(x), NoSignalToneError);
  EXPECT_THROW(AnalyzeTone(ComputePsd(Synth(1.0, 1000, -400, 1e-5, 4), kFs, 1.0,
                                      Window::kHann, kN),
                           400.0, kBw),
               InputError);
}

TEST(ToneTest, SinadNeverExceedsSnr) {
  std::mt19937_64 gen(9);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  for (int i = 0; i < 20; ++i) {
    const double amp = 0.1 + 0.9 * unit(gen);
    const double h3 = -60.0 - 50.0 * unit(gen);
    const size_t bin = 200 + 40 * i;
    const ToneMetrics m = Analyze(
        Synth(amp, bin, h3, SigmaFor(70.0 + 40.0 * unit(gen)), i), Window::kHann, bin);
    EXPECT_LE(m.sinad_db, m.snr_db);
  }
}

TEST(ToneTest, WindowInvariance) {
  const std::vector<double> x = Synth(0.7, 1234, -400, SigmaFor(85.0), 5);
  EXPECT_NEAR(Analyze(x, Window::kHann, 1234).snr_db,
              Analyze(x, Window::kBlackman, 1234).snr_db, 1.0);
}

TEST(ToneTest, ScalingInvariance) {
  std::vector<double> x = Synth(0.4, 777, -85.0, SigmaFor(90.0), 6);
  const ToneMetrics a = Analyze(x, Window::kHann, 777);
  for (double& v : x) v *= 2.5;
  const ToneMetrics b = Analyze(x, Window::kHann, 777);
  EXPECT_NEAR(a.snr_db, b.snr_db, 1e-9);
  EXPECT_NEAR(a.sinad_db, b.sinad_db, 1e-9);
  EXPECT_NEAR(a.thd_db, b.thd_db, 1e-9);
  EXPECT_NEAR(a.sfdr_db, b.sfdr_db, 1e-9);
  EXPECT_NEAR(Enob(a.sinad_db), Enob(b.sinad_db), 1e-9);
}

TEST(ToneTest, FindToneLocatesPeak) {
  const Spectrum s =
      ComputePsd(Synth(0.5, 640, -400, 1e-5, 7), kFs, 1.0, Window::kHann, kN);
  EXPECT_DOUBLE_EQ(FindTone(s, kBw), 640 * kFs / kN);
}

TEST(EnobTest, Formula) {
  EXPECT_DOUBLE_EQ(Enob(1.76), 0.0);
  EXPECT_NEAR(Enob(74.5), 12.08, 0.005);
  EXPECT_NEAR(Enob(98.08), 16.0, 1e-12);
}

TEST(FomTest, TableValues) {
  EXPECT_NEAR(SchreierFom(74.5, 146.48, 44e-6), 139.7, 0.05);
  EXPECT_NEAR(SchreierFom(68.0, 100e3, 26.3e-3), 133.8, 0.05);
  EXPECT_DOUBLE_EQ(SchreierFom(71.0, 5.0, 5.0), 71.0);
  EXPECT_THROW(SchreierFom(70.0, 0.0, 1.0), ConfigError);
  EXPECT_THROW(SchreierFom(70.0, 1.0, -1.0), ConfigError);
}

std::vector<double> Levels(int n, double a) {
  std::vector<double> v(n);
  for (int i = 0; i < n; ++i) v[i] = -a + 2.0 * a * i / (n - 1);
  return v;
}

TEST(InlTest, LinearTransferHasNoInl) {
  const std::vector<double> x = Levels(41, 1.44);
  std::vector<double> y(x.size());
  for (size_t i = 0; i < x.size(); ++i) y[i] = 0.97 * x[i] + 0.003;
  for (LineFit fit : {LineFit::kLeastSquares, LineFit::kEndpoint}) {
    const InlResult r = InlFromSweep(x, y, fit, 3.6);
    EXPECT_LT(r.worst, 1e-12);
    EXPECT_NEAR(r.gain, 0.97, 1e-12);
    EXPECT_FALSE(r.gross_failure);
  }
}

TEST(InlTest, CubicMatchesClosedForm) {
  // For c*x^3 sampled at symmetric levels, the least-squares line has slope
  // c * k with k = sum x^4 / sum x^2, leaving c * a * (a^2 - k) at the ends.
  // The endpoint line leaves 2 / (3 sqrt 3) c a^3 at x = a / sqrt 3.
  const double a = 1.44, target = 0.5e-3;
  const std::vector<double> x = Levels(41, a);
  double s2 = 0.0, s4 = 0.0;
  for (double v : x) {
    s2 += v * v;
    s4 += v * v * v * v;
  }
  const double c = target / (a * (a * a - s4 / s2));
  std::vector<double> y(x.size());
  for (size_t i = 0; i < x.size(); ++i) y[i] = x[i] + c * x[i] * x[i] * x[i];
  EXPECT_NEAR(InlFromSweep(x, y, LineFit::kLeastSquares).worst, target,
              0.05 * target);
  const double endpoint = 2.0 / (3.0 * std::sqrt(3.0)) * c * a * a * a;
  EXPECT_NEAR(InlFromSweep(x, y, LineFit::kEndpoint).worst, endpoint,
              0.05 * endpoint);
}

TEST(InlTest, NonMonotoneIsFlaggedButReported) {
  const std::vector<double> x = Levels(33, 1.0);
  std::vector<double> y = x;
  y[10] = y[9] - 0.01;
  const InlResult r = InlFromSweep(x, y, LineFit::kLeastSquares);
  EXPECT_TRUE(r.gross_failure);
  EXPECT_GT(r.worst, 0.0);
}

TEST(InlTest, PreconditionsRejected) {
  const std::vector<double> x = Levels(32, 1.0);
  EXPECT_THROW(InlFromSweep(x, x, LineFit::kLeastSquares), InputError);
  const std::vector<double> narrow = Levels(41, 1.0);
  EXPECT_THROW(InlFromSweep(narrow, narrow, LineFit::kLeastSquares, 3.6),
               InputError);
  EXPECT_NO_THROW(InlFromSweep(Levels(41, 1.44), Levels(41, 1.44),
                               LineFit::kLeastSquares, 3.6));
  EXPECT_EQ(ParseLineFit("endpoint"), LineFit::kEndpoint);
  EXPECT_THROW(ParseLineFit("spline"), ConfigError);
}

TEST(DroopCompensationTest, UndoesFilterResponse) {
  Spectrum s;
  s.sample_rate = 150e3 / 512;
  s.n_fft = 1024;
  s.power.assign(513, 1.0);
  const DecimatorConfig dec;
  const Spectrum c = CompensateDroop(s, 150e3, dec);
  EXPECT_DOUBLE_EQ(c.power[0], 1.0);
  EXPECT_NEAR(10.0 * std::log10(c.power[512]),
              -PassbandDroopDb(s.Frequency(512), 150e3, dec), 1e-9);
}

TEST(ReportTest, CsvAndTextAgree) {
  MetricsReport r;
  ToneMetrics t;
  t.snr_db = 93.4;
  t.sinad_db = 74.5;
  t.thd_db = -74.6;
  t.sfdr_db = 75.0;
  r.SetTone(t);
  r.bw = 146.48;
  r.power = 44e-6;
  r.UpdateFom();
  EXPECT_DOUBLE_EQ(r.enob, Enob(74.5));
  EXPECT_NEAR(r.fom_schreier, 139.7, 0.05);
  const std::string header = ReportCsvHeader(), row = ReportCsvRow(r);
  EXPECT_EQ(std::count(header.begin(), header.end(), ','),
            std::count(row.begin(), row.end(), ','));
  EXPECT_NE(ReportText(r, "# seed = 1\n").find("sinad_db: 74.500"), std::string::npos);
}

}  // namespace
}  // namespace htsd
