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

#include <fmt/format.h>

#include <algorithm>
#include <atomic>
#include <bit>
#include <cmath>
#include <exception>
#include <filesystem>
#include <limits>
#include <thread>

#include "htsd/bitstream_io.h"
#include "htsd/config.h"
#include "htsd/errors.h"

namespace htsd {
namespace {

constexpr uint64_t kAcPurpose = 0;
constexpr uint64_t kDcPurposeBase = 1;

void Require(bool condition, const std::string& what) {
  if (!condition) throw ConfigError("plan: " + what);
}

bool InPlan(const std::vector<double>& temps, double t) {
  return std::any_of(temps.begin(), temps.end(),
                     [t](double x) { return std::abs(x - t) < 1e-9; });
}

DecimatorConfig DecimatorFor(const ExperimentPlan& plan) {
  DecimatorConfig d = plan.decimator;
  d.osr = plan.modulator.osr;
  return d;
}

Bitstream AcRecord(const ExperimentPlan& plan, const Environment& env,
                   const NonidealitySet& nid) {
  Bitstream bs = Run(plan.modulator, nid, plan.EffectiveStimulus(),
                     plan.warmup + plan.record_length, RunSeed(env, kAcPurpose));
  bs.bits.erase(bs.bits.begin(),
                bs.bits.begin() + static_cast<std::ptrdiff_t>(plan.warmup));
  return bs;
}

Spectrum RecordSpectrum(const ExperimentPlan& plan, const Bitstream& bs) {
  const size_t n_fft =
      plan.analysis.n_fft == 0 ? plan.record_length : plan.analysis.n_fft;
  return ComputePsd(bs, plan.analysis.window, n_fft);
}

InlResult DcSweep(const ExperimentPlan& plan, const Environment& env,
                  const NonidealitySet& nid) {
  const InlSettings& s = plan.inl;
  const DecimatorConfig dec = DecimatorFor(plan);
  const double v_ref = plan.modulator.v_ref;
  std::vector<double> levels(s.points), codes(s.points);
  for (int i = 0; i < s.points; ++i) {
    const double level =
        -s.span * v_ref + 2.0 * s.span * v_ref * i / (s.points - 1);
    const Bitstream bs =
        Run(plan.modulator, nid, StimulusSpec::Dc(level), s.samples_per_level,
            RunSeed(env, kDcPurposeBase + static_cast<uint64_t>(i)));
    const std::vector<double> out = Decimate(bs, dec);
    // Skip the filter fill plus one output for the loop's start-up.
    const size_t skip = dec.SettledOffset() + 1;
    double sum = 0.0;
    for (size_t k = skip; k < out.size(); ++k) sum += out[k];
    levels[i] = level;
    codes[i] = sum / static_cast<double>(out.size() - skip);
  }
  return InlFromSweep(levels, codes, s.fit, 2.0 * v_ref);
}

double SampleStd(const std::vector<double>& v, double mean) {
  if (v.size() < 2) return 0.0;
  double ss = 0.0;
  for (double x : v) ss += (x - mean) * (x - mean);
  return std::sqrt(ss / static_cast<double>(v.size() - 1));
}

std::string Value(double v) { return fmt::format("{}", v); }

std::string TempTag(double t) {
  std::string s = fmt::format("{}", t);
  std::replace(s.begin(), s.end(), '.', 'p');
  std::replace(s.begin(), s.end(), '-', 'm');
  return s;
}

Metric MetricFor(OutputKind kind) {
  switch (kind) {
    case OutputKind::kSnrVsT:
      return Metric::kSnr;
    case OutputKind::kSinadVsT:
      return Metric::kSinad;
    case OutputKind::kInlVsT:
      return Metric::kInl;
    case OutputKind::kSupplyVsT:
    case OutputKind::kSpectrumAt:
      break;
  }
  return Metric::kSupply;
}

}  // namespace

std::string_view OutputName(OutputKind kind) {
  switch (kind) {
    case OutputKind::kSnrVsT:
      return "snr_vs_t";
    case OutputKind::kSinadVsT:
      return "sinad_vs_t";
    case OutputKind::kInlVsT:
      return "inl_vs_t";
    case OutputKind::kSupplyVsT:
      return "supply_vs_t";
    case OutputKind::kSpectrumAt:
      return "spectrum_at";
  }
  return "unknown";
}

OutputKind ParseOutput(std::string_view name) {
  for (OutputKind k : {OutputKind::kSnrVsT, OutputKind::kSinadVsT,
                       OutputKind::kInlVsT, OutputKind::kSupplyVsT,
                       OutputKind::kSpectrumAt}) {
    if (OutputName(k) == name) return k;
  }
  throw ConfigError("unknown output '" + std::string(name) + "'");
}

ExperimentPlan ExperimentPlan::Default() {
  ExperimentPlan plan;
  plan.temperatures = ParseTemperatureList("-40:10:260");
  return plan;
}

void ExperimentPlan::Validate() const {
  modulator.Validate();
  DecimatorFor(*this).Validate();
  device.leakage.Validate();
  device.analog.Validate();
  Require(!temperatures.empty(), "no temperatures");
  Require(std::is_sorted(temperatures.begin(), temperatures.end()) &&
              std::adjacent_find(temperatures.begin(), temperatures.end()) ==
                  temperatures.end(),
          "temperatures must be strictly ascending");
  for (double t : temperatures) EnvAt(t, 0).Validate();
  Require(env.n_chips >= 1, "n_chips must be >= 1");
  Require(record_length >= 8 * static_cast<size_t>(modulator.osr) &&
              std::has_single_bit(record_length),
          "record_length must be a power of two >= 8 * osr");
  Require(analysis.n_fft == 0 || (std::has_single_bit(analysis.n_fft) &&
                                  analysis.n_fft <= record_length),
          "analysis.n_fft must be 0 or a power of two <= record_length");
  Require(analysis.tone.signal_half_width >= 0 &&
              analysis.tone.max_harmonic >= 1 &&
              analysis.tone.dc_guard_bins >= 0,
          "bad tone analysis settings");
  if (inl.enabled) {
    Require(inl.points >= 33, "inl.points must be >= 33");
    Require(inl.span >= 0.4 && inl.span <= 1.0, "inl.span must be in [0.4, 1]");
    Require(inl.samples_per_level >=
                static_cast<size_t>(decimator.order + 4) * modulator.osr,
            "inl.samples_per_level too short for the decimator");
  }
  for (double t : spectrum_temperatures) {
    Require(InPlan(temperatures, t),
            fmt::format("spectrum temperature {} not in the sweep", t));
  }
  Require(jobs >= 0, "jobs must be >= 0");
}

Environment ExperimentPlan::EnvAt(double temperature_c, int chip) const {
  Environment e = env;
  e.temperature_c = temperature_c;
  e.chip = chip;
  return e;
}

StimulusSpec ExperimentPlan::EffectiveStimulus() const {
  return snap_coherent
             ? SnapToCoherent(stimulus, modulator.f_s, record_length)
             : stimulus;
}

Bitstream SimulateRecord(const ExperimentPlan& plan, double temperature_c,
                         int chip) {
  const Environment env = plan.EnvAt(temperature_c, chip);
  return AcRecord(plan, env, BuildNonidealities(plan.modulator, env,
                                                plan.device));
}

MetricsReport MeasurePoint(const ExperimentPlan& plan, double temperature_c,
                           int chip) {
  const Environment env = plan.EnvAt(temperature_c, chip);
  const NonidealitySet nid =
      BuildNonidealities(plan.modulator, env, plan.device);

  MetricsReport r;
  auto spectrum = std::make_shared<Spectrum>(
      RecordSpectrum(plan, AcRecord(plan, env, nid)));
  r.SetTone(AnalyzeTone(*spectrum, plan.EffectiveStimulus().frequency,
                        plan.modulator.Bandwidth(), plan.analysis.tone));
  r.spectrum = std::move(spectrum);
  r.bw = plan.modulator.Bandwidth();
  r.supply_current = nid.supply_current;
  r.power = plan.modulator.v_dd * nid.supply_current;
  r.UpdateFom();

  r.inl_worst = std::numeric_limits<double>::quiet_NaN();
  if (plan.inl.enabled) {
    const InlResult inl = DcSweep(plan, env, nid);
    r.inl_worst = inl.worst;
    r.inl_gross_failure = inl.gross_failure;
  }
  return r;
}

Spectrum SpectrumAt(const ExperimentPlan& plan, double temperature_c,
                    int chip) {
  if (!InPlan(plan.temperatures, temperature_c)) {
    throw InputError(
        fmt::format("spectrum_at: {} C is not in the plan", temperature_c));
  }
  if (chip < 0 || chip >= plan.env.n_chips) {
    throw InputError(fmt::format("spectrum_at: chip {} out of range", chip));
  }
  return RecordSpectrum(plan, SimulateRecord(plan, temperature_c, chip));
}

size_t SweepResult::failures() const {
  return static_cast<size_t>(std::count_if(
      points.begin(), points.end(), [](const PointResult& p) { return !p.ok; }));
}

SweepResult RunSweep(const ExperimentPlan& plan) {
  plan.Validate();
  const size_t n_chips = static_cast<size_t>(plan.env.n_chips);
  SweepResult result;
  result.points.resize(plan.temperatures.size() * n_chips);
  for (size_t i = 0; i < result.points.size(); ++i) {
    result.points[i].temperature = plan.temperatures[i / n_chips];
    result.points[i].chip = static_cast<int>(i % n_chips);
  }

  std::atomic<size_t> next{0};
  auto worker = [&] {
    for (size_t i = next.fetch_add(1); i < result.points.size();
         i = next.fetch_add(1)) {
      PointResult& p = result.points[i];
      try {
        p.report = MeasurePoint(plan, p.temperature, p.chip);
        p.report.spectrum.reset();
        p.ok = true;
      } catch (const std::exception& e) {
        p.error = e.what();
      }
    }
  };

  size_t jobs = plan.jobs > 0 ? static_cast<size_t>(plan.jobs)
                              : std::max(1u, std::thread::hardware_concurrency());
  jobs = std::min(jobs, result.points.size());
  std::vector<std::jthread> pool;
  for (size_t j = 1; j < jobs; ++j) pool.emplace_back(worker);
  worker();
  return result;
}

std::string_view MetricName(Metric m) {
  switch (m) {
    case Metric::kSnr:
      return "snr_db";
    case Metric::kSinad:
      return "sinad_db";
    case Metric::kInl:
      return "inl_worst_v";
    case Metric::kSupply:
      return "supply_current_a";
    case Metric::kThd:
      return "thd_dbc";
    case Metric::kEnob:
      return "enob_bits";
    case Metric::kFom:
      return "fom_schreier_db";
  }
  return "unknown";
}

double MetricValue(const MetricsReport& r, Metric m) {
  switch (m) {
    case Metric::kSnr:
      return r.snr;
    case Metric::kSinad:
      return r.sinad;
    case Metric::kInl:
      return r.inl_worst;
    case Metric::kSupply:
      return r.supply_current;
    case Metric::kThd:
      return r.thd;
    case Metric::kEnob:
      return r.enob;
    case Metric::kFom:
      return r.fom_schreier;
  }
  return std::numeric_limits<double>::quiet_NaN();
}

std::vector<Aggregate> AggregateMetric(const SweepResult& result, Metric m) {
  std::vector<Aggregate> out;
  for (const PointResult& p : result.points) {
    if (out.empty() || out.back().temperature != p.temperature) {
      out.push_back({p.temperature, 0, 0.0, 0.0, 0.0});
    }
  }
  for (Aggregate& a : out) {
    std::vector<double> values;
    for (const PointResult& p : result.points) {
      if (p.temperature != a.temperature || !p.ok) continue;
      const double v = MetricValue(p.report, m);
      if (std::isfinite(v)) values.push_back(v);
    }
    a.count = values.size();
    if (values.empty()) {
      a.mean = a.lo = a.hi = std::numeric_limits<double>::quiet_NaN();
      continue;
    }
    double sum = 0.0;
    for (double v : values) sum += v;
    a.mean = sum / static_cast<double>(values.size());
    const double sd = SampleStd(values, a.mean);
    a.lo = a.mean - 3.0 * sd;
    a.hi = a.mean + 3.0 * sd;
  }
  return out;
}

std::vector<std::string> WriteSweepOutputs(const ExperimentPlan& plan,
                                           const SweepResult& result,
                                           const std::string& dir) {
  namespace fs = std::filesystem;
  fs::create_directories(dir);
  const std::string preamble = DescribePlan(plan, "# ");
  std::vector<std::string> written;
  auto emit = [&](const std::string& name, const std::string& body) {
    const std::string path = (fs::path(dir) / name).string();
    WriteFile(path, preamble + body);
    written.push_back(path);
  };

  std::string all = "temperature_c,chip,ok," + ReportCsvHeader();
  for (const PointResult& p : result.points) {
    if (!p.ok) continue;
    all += fmt::format("{},{},1,", Value(p.temperature), p.chip) +
           ReportCsvRow(p.report);
  }
  emit("metrics.csv", all);

  std::string plot = "set datafile separator ','\nset xlabel 'temperature (C)'\n";
  for (OutputKind kind : plan.outputs) {
    if (kind == OutputKind::kSpectrumAt) continue;
    const Metric metric = MetricFor(kind);
    const std::string name(OutputName(kind));

    std::string rows = "temperature_c,chip,value\n";
    for (const PointResult& p : result.points) {
      if (!p.ok) continue;
      rows += fmt::format("{},{},{}\n", Value(p.temperature), p.chip,
                          Value(MetricValue(p.report, metric)));
    }
    emit(name + ".csv", rows);

    std::string agg = "temperature_c,count,mean,lo3sigma,hi3sigma\n";
    for (const Aggregate& a : AggregateMetric(result, metric)) {
      agg += fmt::format("{},{},{},{},{}\n", Value(a.temperature), a.count,
                         Value(a.mean), Value(a.lo), Value(a.hi));
    }
    emit(name + "_aggregate.csv", agg);

    plot += fmt::format(
        "set output '{0}.png'\nset terminal pngcairo size 800,500\n"
        "set ylabel '{1}'\n"
        "plot '{0}_aggregate.csv' using 1:3 with linespoints title 'mean', \\\n"
        "     '' using 1:4 with lines dt 2 title '-3 sigma', \\\n"
        "     '' using 1:5 with lines dt 2 title '+3 sigma'\n",
        name, MetricName(metric));
  }

  if (std::find(plan.outputs.begin(), plan.outputs.end(),
                OutputKind::kSpectrumAt) != plan.outputs.end()) {
    for (double t : plan.spectrum_temperatures) {
      const std::string name = "spectrum_" + TempTag(t) + "c_chip0";
      emit(name + ".csv", SpectrumCsv(SpectrumAt(plan, t, 0)));
      plot += fmt::format(
          "set output '{0}.png'\nset logscale x\nset ylabel 'dBFS'\n"
          "plot '{0}.csv' using 1:2 with lines title '{1} C'\nunset logscale x\n",
          name, Value(t));
    }
  }

  std::string failures = "temperature_c,chip,error\n";
  for (const PointResult& p : result.points) {
    if (p.ok) continue;
    std::string msg = p.error;
    std::replace(msg.begin(), msg.end(), ',', ';');
    std::replace(msg.begin(), msg.end(), '\n', ' ');
    failures += fmt::format("{},{},{}\n", Value(p.temperature), p.chip, msg);
  }
  emit("failures.csv", failures);
  emit("plot.gp", plot);
  return written;
}

}  // namespace htsd
