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

#include "htsd/harness.h"

#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <filesystem>

#include "htsd/bitstream_io.h"
#include "htsd/config.h"
#include "htsd/errors.h"

namespace htsd {
namespace {

ExperimentPlan SmallPlan() {
  ExperimentPlan plan = ExperimentPlan::Default();
  plan.temperatures = {25.0, 250.0};
  plan.env.n_chips = 2;
  plan.record_length = size_t{1} << 16;
  plan.inl.points = 33;
  plan.inl.samples_per_level = 4096;
  plan.jobs = 1;
  return plan;
}

// Largest bin within +/-2 of f, relative to the median of +/-200 bins, dB.
double PeakProminence(const Spectrum& s, double f) {
  const long k = std::lround(f / s.BinWidth());
  double peak = 0.0;
  for (long j = k - 2; j <= k + 2; ++j) peak = std::max(peak, s.power[j]);
  std::vector<double> around;
  const long last = static_cast<long>(s.power.size()) - 1;
  for (long j = std::max(1L, k - 200); j <= std::min(last, k + 200); ++j) {
    if (std::abs(j - k) > 5) around.push_back(s.power[j]);
  }
  std::nth_element(around.begin(), around.begin() + around.size() / 2, around.end());
  return 10.0 * std::log10(peak / around[around.size() / 2]);
}

TEST(SweepTest, SingleIdealPointHasDegenerateBand) {
  ExperimentPlan plan = SmallPlan();
  plan.temperatures = {25.0};
  plan.env.n_chips = 1;
  plan.env.ideal = true;
  const SweepResult r = RunSweep(plan);
  ASSERT_EQ(r.points.size(), 1u);
  ASSERT_TRUE(r.points[0].ok) << r.points[0].error;
  const auto agg = AggregateMetric(r, Metric::kSnr);
  ASSERT_EQ(agg.size(), 1u);
  EXPECT_EQ(agg[0].count, 1u);
  EXPECT_EQ(agg[0].lo, agg[0].mean);
  EXPECT_EQ(agg[0].hi, agg[0].mean);
  EXPECT_LT(r.points[0].report.inl_worst, 1e-4);
}

TEST(SweepTest, BandContainsMeanAndCountsChips) {
  const ExperimentPlan plan = SmallPlan();
  const SweepResult r = RunSweep(plan);
  EXPECT_EQ(r.failures(), 0u);
  for (Metric m : {Metric::kSnr, Metric::kSinad, Metric::kInl, Metric::kSupply}) {
    for (const Aggregate& a : AggregateMetric(r, m)) {
      EXPECT_EQ(a.count, 2u);
      EXPECT_LE(a.lo, a.mean);
      EXPECT_GE(a.hi, a.mean);
    }
  }
}

TEST(SweepTest, WorkerCountDoesNotChangeResults) {
  ExperimentPlan plan = SmallPlan();
  const std::string dir = ::testing::TempDir() + "/sweep_";
  WriteSweepOutputs(plan, RunSweep(plan), dir + "a");
  WriteSweepOutputs(plan, RunSweep(plan), dir + "b");
  plan.jobs = 3;
  WriteSweepOutputs(plan, RunSweep(plan), dir + "c");
  const std::string a = ReadFile(dir + "a/metrics.csv");
  EXPECT_EQ(a, ReadFile(dir + "b/metrics.csv"));
  // The resolved plan in the preamble records the job count; compare rows.
  const auto rows = [](const std::string& s) { return s.substr(s.find("temperature_c")); };
  EXPECT_EQ(rows(a), rows(ReadFile(dir + "c/metrics.csv")));
}

TEST(SweepTest, OutputsAreByteIdenticalForSameSeed) {
  ExperimentPlan plan = SmallPlan();
  const std::string dir = ::testing::TempDir() + "/det_";
  const auto files_a = WriteSweepOutputs(plan, RunSweep(plan), dir + "a");
  const auto files_b = WriteSweepOutputs(plan, RunSweep(plan), dir + "b");
  ASSERT_EQ(files_a.size(), files_b.size());
  for (size_t i = 0; i < files_a.size(); ++i) {
    EXPECT_EQ(ReadFile(files_a[i]), ReadFile(files_b[i])) << files_a[i];
  }
  const std::string agg = ReadFile(dir + "a/sinad_vs_t_aggregate.csv");
  EXPECT_EQ(agg.rfind("# modulator.f_s = 150000\n", 0), 0u);
  EXPECT_NE(agg.find("temperature_c,count,mean,lo3sigma,hi3sigma\n"), std::string::npos);
  EXPECT_TRUE(std::filesystem::exists(dir + "a/plot.gp"));
  EXPECT_TRUE(std::filesystem::exists(dir + "a/failures.csv"));
}

TEST(SweepTest, FailedPointDoesNotDisturbOthers) {
  ExperimentPlan plan = SmallPlan();
  plan.env.collapse_temperature = 300.0;
  plan.temperatures = {25.0, 340.0};
  const SweepResult r = RunSweep(plan);
  ASSERT_EQ(r.points.size(), 4u);
  EXPECT_TRUE(r.points[0].ok);
  EXPECT_FALSE(r.points[2].ok);
  EXPECT_FALSE(r.points[2].error.empty());
  EXPECT_EQ(r.failures(), 2u);

  plan.temperatures = {25.0};
  const SweepResult alone = RunSweep(plan);
  for (int chip = 0; chip < 2; ++chip) {
    EXPECT_EQ(ReportCsvRow(alone.points[chip].report),
              ReportCsvRow(r.points[chip].report));
  }
}

TEST(SpectrumAtTest, TemperatureMustBeInPlan) {
  const ExperimentPlan plan = SmallPlan();
  EXPECT_THROW(SpectrumAt(plan, 100.0, 0), InputError);
  EXPECT_THROW(SpectrumAt(plan, 25.0, 7), InputError);
}

TEST(SpectrumAtTest, CmfbSpurOnlyWhenEnabled) {
  ExperimentPlan plan = SmallPlan();
  plan.record_length = size_t{1} << 19;
  const double fc = 150e3 / 512;
  const double fin = plan.EffectiveStimulus().frequency;
  const Spectrum noisy = SpectrumAt(plan, 25.0, 0);
  EXPECT_GT(PeakProminence(noisy, fc), 10.0);
  EXPECT_GT(PeakProminence(noisy, fc - fin), 6.0);
  EXPECT_GT(PeakProminence(noisy, fc + fin), 6.0);
  plan.env.ideal = true;
  EXPECT_LT(PeakProminence(SpectrumAt(plan, 25.0, 0), fc), 6.0);
}

TEST(SpectrumAtTest, HarmonicsGrowWithTemperature) {
  ExperimentPlan plan = SmallPlan();
  plan.record_length = size_t{1} << 18;
  plan.inl.enabled = false;
  const MetricsReport cold = MeasurePoint(plan, 25.0, 0);
  const MetricsReport hot = MeasurePoint(plan, 250.0, 0);
  EXPECT_GT(hot.thd, cold.thd + 5.0);
  const double f3 = 3.0 * plan.EffectiveStimulus().frequency;
  EXPECT_GT(PeakProminence(*hot.spectrum, f3), PeakProminence(*cold.spectrum, f3));
}

TEST(PlanTest, ValidationCatchesBadPlans) {
  ExperimentPlan plan = SmallPlan();
  plan.temperatures = {250.0, 25.0};
  EXPECT_THROW(plan.Validate(), ConfigError);
  plan = SmallPlan();
  plan.temperatures = {25.0, 400.0};
  EXPECT_THROW(plan.Validate(), ConfigError);
  plan = SmallPlan();
  plan.inl.points = 20;
  EXPECT_THROW(plan.Validate(), ConfigError);
  plan = SmallPlan();
  plan.spectrum_temperatures = {30.0};
  EXPECT_THROW(plan.Validate(), ConfigError);
}

}  // namespace
}  // namespace htsd
