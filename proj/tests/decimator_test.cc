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

#include "htsd/decimator.h"

#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "htsd/errors.h"
#include "htsd/metrics.h"
#include "htsd/spectrum.h"
#include "htsd/thermal.h"

namespace htsd {
namespace {

double Choose2(long n) { return n < 2 ? 0.0 : 0.5 * n * (n - 1); }

// Number of ways to write k as a sum of three integers in [0, n).
double TripleBoxcar(long k, long n) {
  if (k < 0 || k > 3 * (n - 1)) return 0.0;
  return Choose2(k + 2) - 3.0 * Choose2(k - n + 2) + 3.0 * Choose2(k - 2 * n + 2);
}

Bitstream Constant(int8_t bit, size_t n) {
  Bitstream bs;
  bs.f_s = 150e3;
  bs.v_ref = 1.8;
  bs.bits.assign(n, bit);
  return bs;
}

TEST(CicTapsTest, ClosedFormMatchesBruteForce) {
  DecimatorConfig cfg;
  cfg.osr = 8;
  const std::vector<double> taps = CicTaps(cfg);
  std::vector<double> brute(3 * 7 + 1, 0.0);
  for (int i = 0; i < 8; ++i)
    for (int j = 0; j < 8; ++j)
      for (int l = 0; l < 8; ++l) brute[i + j + l] += 1.0;
  ASSERT_EQ(taps.size(), brute.size());
  for (size_t k = 0; k < taps.size(); ++k) {
    EXPECT_EQ(taps[k], brute[k]);
    EXPECT_EQ(TripleBoxcar(static_cast<long>(k), 8), brute[k]);
  }
}

TEST(DecimateTest, ConstantBitsGiveReference) {
  const DecimatorConfig cfg;
  const std::vector<double> pos = Decimate(Constant(1, 8 * 512), cfg);
  for (size_t m = cfg.SettledOffset(); m < pos.size(); ++m) {
    EXPECT_DOUBLE_EQ(pos[m], 1.8);
  }
  const std::vector<double> neg = Decimate(Constant(-1, 16 * 512), cfg);
  for (size_t m = cfg.SettledOffset(); m < neg.size(); ++m) {
    EXPECT_DOUBLE_EQ(neg[m], -1.8);
  }
}

TEST(DecimateTest, AlternatingBitsAreNulled) {
  Bitstream bs = Constant(1, 16 * 512);
  for (size_t n = 1; n < bs.size(); n += 2) bs.bits[n] = -1;
  const std::vector<double> y = Decimate(bs, {});
  for (size_t m = DecimatorConfig{}.SettledOffset(); m < y.size(); ++m) {
    EXPECT_LT(std::abs(y[m]), 1e-6 * bs.v_ref);
  }
}

TEST(DecimateTest, ImpulseResponseIsTripleBoxcar) {
  const DecimatorConfig raw{3, 512, false};
  const long n = 512;
  std::vector<double> response(3 * (n - 1) + 1, -1.0);
  const Bitstream base = Constant(-1, 8 * 512);
  const std::vector<double> y0 = Decimate(base, raw);
  // Flipping one bit from -1 to +1 adds an impulse of height 2.
  for (long p = 0; p < n; ++p) {
    Bitstream bs = base;
    bs.bits[p] = 1;
    const std::vector<double> y = Decimate(bs, raw);
    for (size_t m = 0; m < y.size(); ++m) {
      const long k = static_cast<long>((m + 1) * n - 1) - p;
      if (k < static_cast<long>(response.size())) response[k] = (y[m] - y0[m]) / 2.0;
    }
  }
  for (long k = 0; k < static_cast<long>(response.size()); ++k) {
    ASSERT_EQ(response[k], TripleBoxcar(k, n)) << "k = " << k;
  }
}

TEST(DecimateTest, IntegerPathEqualsFirPath) {
  std::mt19937_64 gen(5);
  Bitstream bs = Constant(1, 20 * 512);
  for (auto& b : bs.bits) b = (gen() & 1) ? 1 : -1;
  const std::vector<double> a = Decimate(bs, {});
  const std::vector<double> b = DecimateSamples(bs.ToVolts(), {});
  ASSERT_EQ(a.size(), b.size());
  for (size_t m = 0; m < a.size(); ++m) EXPECT_NEAR(a[m], b[m], 1e-12);
}

TEST(DecimateTest, Linear) {
  std::mt19937_64 gen(8);
  std::normal_distribution<double> normal;
  std::vector<double> x(10 * 512), y(x.size()), z(x.size());
  const double a = 0.7, b = -1.3;
  for (size_t i = 0; i < x.size(); ++i) {
    x[i] = normal(gen);
    y[i] = normal(gen);
    z[i] = a * x[i] + b * y[i];
  }
  const auto dx = DecimateSamples(x, {}), dy = DecimateSamples(y, {}),
             dz = DecimateSamples(z, {});
  for (size_t m = 0; m < dz.size(); ++m) {
    EXPECT_NEAR(dz[m], a * dx[m] + b * dy[m], 1e-12);
  }
}

TEST(DecimateTest, ShortInputRejected) {
  EXPECT_THROW(Decimate(Constant(1, 8 * 512 - 1), {}), InputError);
}

TEST(DecimatorConfigTest, Validation) {
  DecimatorConfig cfg;
  cfg.osr = 100;
  EXPECT_THROW(cfg.Validate(), ConfigError);
  cfg = {};
  cfg.order = 0;
  EXPECT_THROW(cfg.Validate(), ConfigError);
}

TEST(DroopTest, ClosedFormAndMonotone) {
  const DecimatorConfig cfg;
  const double fs = 150e3;
  EXPECT_EQ(PassbandDroopDb(0.0, fs, cfg), 0.0);
  const double f = fs / (4.0 * 512);
  const double x = std::numbers::pi * f / fs;
  const double ratio = std::sin(512 * x) / (512 * std::sin(x));
  EXPECT_NEAR(PassbandDroopDb(f, fs, cfg), 60.0 * std::log10(ratio), 1e-12);
  EXPECT_NEAR(PassbandDroopDb(f, fs, cfg), -2.737, 0.001);
  double prev = 0.0;
  for (double g = 1.0; g <= fs / 1024.0; g += 1.0) {
    const double d = PassbandDroopDb(g, fs, cfg);
    EXPECT_LT(d, prev);
    prev = d;
  }
}

TEST(DecimateTest, DecimatedSinadMatchesBitstreamSinad) {
  const ModulatorConfig cfg;
  Environment env;
  env.temperature_c = 250.0;
  const size_t n = size_t{1} << 19;
  const size_t warm = 8 * 512;
  const StimulusSpec stim = SnapToCoherent(StimulusSpec::Sine(0.85, 25.177), cfg.f_s, n);
  Bitstream bs = htsd::Run(cfg, env, {}, stim, n + warm);

  const DecimatorConfig dec;
  std::vector<double> y = Decimate(bs, dec);
  y.erase(y.begin(), y.begin() + warm / 512);
  const Spectrum sd = CompensateDroop(
      ComputePsd(y, cfg.f_s / 512, cfg.v_ref, Window::kHann, y.size()), cfg.f_s, dec);
  const ToneMetrics td = AnalyzeTone(sd, stim.frequency, cfg.Bandwidth());

  bs.bits.erase(bs.bits.begin(), bs.bits.begin() + warm);
  const Spectrum sb = ComputePsd(bs, Window::kHann, n);
  const ToneMetrics tb = AnalyzeTone(sb, stim.frequency, cfg.Bandwidth());
  EXPECT_NEAR(td.sinad_db, tb.sinad_db, 0.5);
}

}  // namespace
}  // namespace htsd
