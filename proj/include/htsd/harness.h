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

#ifndef HTSD_HARNESS_H_
#define HTSD_HARNESS_H_

#include <cstddef>
#include <string>
#include <vector>

#include "htsd/decimator.h"
#include "htsd/metrics.h"
#include "htsd/modulator.h"
#include "htsd/spectrum.h"
#include "htsd/thermal.h"

namespace htsd {

enum class OutputKind { kSnrVsT, kSinadVsT, kInlVsT, kSupplyVsT, kSpectrumAt };

std::string_view OutputName(OutputKind kind);
OutputKind ParseOutput(std::string_view name);

struct AnalysisSettings {
  Window window = Window::kHann;
  size_t n_fft = 0;  // 0: one segment over the whole record
  ToneAnalysisOptions tone;
};

// Static linearity sweep: `points` DC levels evenly spaced over
// +/-span * v_ref, each run for samples_per_level modulator samples.
struct InlSettings {
  bool enabled = true;
  int points = 41;
  double span = 0.8;
  size_t samples_per_level = 16384;
  LineFit fit = LineFit::kLeastSquares;
};

struct ExperimentPlan {
  std::vector<double> temperatures;  // C, ascending
  ModulatorConfig modulator;
  StimulusSpec stimulus = StimulusSpec::Sine(0.85, 25.177);
  bool snap_coherent = true;
  DecimatorConfig decimator;
  Environment env;  // temperature_c and chip are set per point
  DeviceModel device;
  size_t record_length = size_t{1} << 19;
  size_t warmup = 4096;  // discarded leading samples of each AC run
  AnalysisSettings analysis;
  InlSettings inl;
  std::vector<OutputKind> outputs = {OutputKind::kSnrVsT,
                                     OutputKind::kSinadVsT,
                                     OutputKind::kInlVsT,
                                     OutputKind::kSupplyVsT};
  std::vector<double> spectrum_temperatures;  // for kSpectrumAt, chip 0
  int jobs = 0;  // worker threads; 0 = hardware concurrency
  EmRule em_internal = EmRule::Internal();
  EmRule em_top = EmRule::Top();

  static ExperimentPlan Default();

  void Validate() const;
  Environment EnvAt(double temperature_c, int chip) const;
  // Stimulus after optional coherent snapping to the record length.
  StimulusSpec EffectiveStimulus() const;
};

// AC run plus optional DC sweep at one (temperature, chip) point.
MetricsReport MeasurePoint(const ExperimentPlan& plan, double temperature_c,
                           int chip);

// PSD of the AC record at a plan temperature. Throws InputError when the
// temperature is not in the plan.
Spectrum SpectrumAt(const ExperimentPlan& plan, double temperature_c,
                    int chip);

// The AC record of a point (warm-up removed), as analysed by MeasurePoint.
Bitstream SimulateRecord(const ExperimentPlan& plan, double temperature_c,
                         int chip);

struct PointResult {
  double temperature = 0.0;
  int chip = 0;
  bool ok = false;
  std::string error;
  MetricsReport report;
};

struct SweepResult {
  std::vector<PointResult> points;  // temperature-major, chip-minor
  size_t failures() const;
};

// Runs every (temperature, chip) point on a bounded worker pool. A failing
// point is recorded and does not affect the others. Results do not depend
// on the number of workers.
SweepResult RunSweep(const ExperimentPlan& plan);

enum class Metric { kSnr, kSinad, kInl, kSupply, kThd, kEnob, kFom };

std::string_view MetricName(Metric m);
double MetricValue(const MetricsReport& r, Metric m);

// Mean and +/-3 sigma (sample standard deviation) over the chips that
// succeeded at one temperature.
struct Aggregate {
  double temperature = 0.0;
  size_t count = 0;
  double mean = 0.0;
  double lo = 0.0;
  double hi = 0.0;
};

std::vector<Aggregate> AggregateMetric(const SweepResult& result, Metric m);

// Writes the requested CSVs, an aggregate CSV per metric, failures.csv and
// plot.gp into `dir`. Every file starts with the resolved plan as comments.
// Returns the paths written.
std::vector<std::string> WriteSweepOutputs(const ExperimentPlan& plan,
                                           const SweepResult& result,
                                           const std::string& dir);

}  // namespace htsd

#endif  // HTSD_HARNESS_H_
