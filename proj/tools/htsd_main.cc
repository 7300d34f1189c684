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

// Command-line front end: simulate, sweep, analyze, emcheck, fom.

#include <fmt/format.h>

#include <bit>
#include <cstdio>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "htsd/bitstream_io.h"
#include "htsd/capture.h"
#include "htsd/config.h"
#include "htsd/decimator.h"
#include "htsd/errors.h"
#include "htsd/harness.h"
#include "htsd/metrics.h"
#include "htsd/spectrum.h"
#include "htsd/text.h"
#include "htsd/thermal.h"

namespace {

using namespace htsd;

constexpr int kExitInputError = 1;
constexpr int kExitPartialFailure = 2;

struct PlanOptions {
  std::string config = "default";
  std::vector<std::string> sets;
};

void AddPlanOptions(CLI::App* cmd, PlanOptions& o, const char* config_flag) {
  cmd->add_option(config_flag, o.config,
                  "Config file (key = value lines) or 'default'");
  cmd->add_option("--set", o.sets, "Override a config key: key=value");
}

ExperimentPlan ResolvePlan(const PlanOptions& o) {
  ExperimentPlan plan = LoadPlan(o.config);
  for (const std::string& s : o.sets) {
    const auto [key, value] = ParseAssignment(s);
    ApplySetting(plan, key, value);
  }
  return plan;
}

void Emit(const std::optional<std::string>& path, const std::string& text) {
  if (path) {
    WriteFile(*path, text);
  } else {
    std::fwrite(text.data(), 1, text.size(), stdout);
  }
}

// --- simulate --------------------------------------------------------------

struct SimulateOptions {
  PlanOptions plan;
  double temperature = 25.0;
  int chip = 0;
  bool ideal = false;
  bool inl = false;
  std::optional<uint64_t> seed;
  std::optional<size_t> samples;
  std::optional<std::string> out;
  std::string format = "text";
  std::string levels = "pm1";
  std::optional<std::string> report;
  std::optional<std::string> spectrum;
  std::optional<std::string> decimated;
};

int RunSimulate(const SimulateOptions& o) {
  ExperimentPlan plan = ResolvePlan(o.plan);
  if (o.ideal) plan.env.ideal = true;
  if (o.seed) plan.env.seed = *o.seed;
  if (o.samples) plan.record_length = *o.samples;
  plan.inl.enabled = o.inl;
  plan.temperatures = {o.temperature};
  plan.env.n_chips = std::max(plan.env.n_chips, o.chip + 1);
  plan.Validate();

  const std::string preamble =
      DescribePlan(plan, "# ") +
      fmt::format("# point.temperature_c = {}\n# point.chip = {}\n",
                  o.temperature, o.chip);

  MetricsReport r = MeasurePoint(plan, o.temperature, o.chip);
  Emit(o.report, ReportText(r, preamble));
  if (o.report) std::cout << ReportText(r);

  if (o.out || o.decimated) {
    const Bitstream bs = SimulateRecord(plan, o.temperature, o.chip);
    if (o.out) {
      std::string meta;
      for (std::string_view line : SplitLines(preamble)) {
        meta += std::string(line.substr(2)) + "\n";
      }
      WriteBitstream(*o.out, bs, ParseBitstreamFormat(o.format),
                     ParseBitLevels(o.levels), meta);
    }
    if (o.decimated) {
      DecimatorConfig dec = plan.decimator;
      dec.osr = plan.modulator.osr;
      const std::vector<double> y = Decimate(bs, dec);
      std::string csv = preamble + "index,volts\n";
      for (size_t i = 0; i < y.size(); ++i) csv += fmt::format("{},{}\n", i, y[i]);
      WriteFile(*o.decimated, csv);
    }
  }
  if (o.spectrum) WriteFile(*o.spectrum, SpectrumCsv(*r.spectrum, preamble));
  return 0;
}

// --- sweep -----------------------------------------------------------------

struct SweepOptions {
  PlanOptions plan;
  std::string out_dir = "sweep_out";
  std::optional<int> jobs;
  std::optional<int> chips;
  std::optional<std::string> temperatures;
};

int RunSweepCommand(const SweepOptions& o) {
  ExperimentPlan plan = ResolvePlan(o.plan);
  if (o.jobs) plan.jobs = *o.jobs;
  if (o.chips) plan.env.n_chips = *o.chips;
  if (o.temperatures) plan.temperatures = ParseTemperatureList(*o.temperatures);
  plan.Validate();

  const SweepResult result = RunSweep(plan);
  const auto files = WriteSweepOutputs(plan, result, o.out_dir);

  const auto snr = AggregateMetric(result, Metric::kSnr);
  const auto sinad = AggregateMetric(result, Metric::kSinad);
  const auto inl = AggregateMetric(result, Metric::kInl);
  std::cout << "temperature_c,chips_ok,snr_mean_db,sinad_mean_db,inl_mean_v\n";
  for (size_t i = 0; i < snr.size(); ++i) {
    std::cout << fmt::format("{},{},{:.2f},{:.2f},{:.3e}\n", snr[i].temperature,
                             snr[i].count, snr[i].mean, sinad[i].mean,
                             inl[i].mean);
  }
  for (const std::string& f : files) std::cerr << "wrote " << f << "\n";
  if (result.failures() > 0) {
    std::cerr << result.failures() << " point(s) failed; see failures.csv\n";
    return kExitPartialFailure;
  }
  return 0;
}

// --- analyze ---------------------------------------------------------------

struct AnalyzeOptions {
  std::string input;
  std::string format = "auto";
  std::optional<double> rate;
  double v_ref = 1.8;
  std::optional<double> threshold;
  int osr = 512;
  std::optional<double> tone;
  std::string window = "hann";
  size_t n_fft = 0;
  std::optional<double> power;
  std::optional<std::string> report;
  std::optional<std::string> spectrum;
};

int RunAnalyze(const AnalyzeOptions& o) {
  CaptureOptions copt;
  copt.sample_rate = o.rate;
  copt.v_ref = o.v_ref;
  copt.threshold = o.threshold;
  const Bitstream bs =
      IngestCapture(o.input, ParseCaptureFormat(o.format), copt);
  if (bs.size() < 2 * static_cast<size_t>(o.osr)) {
    throw InputError("analyze: record shorter than 2 * osr");
  }
  const size_t n_fft = o.n_fft ? o.n_fft : std::bit_floor(bs.size());
  const Window window = ParseWindow(o.window);
  const double bw = bs.f_s / (2.0 * o.osr);

  auto spectrum = std::make_shared<Spectrum>(ComputePsd(bs, window, n_fft));
  const double f_tone = o.tone ? *o.tone : FindTone(*spectrum, bw);
  MetricsReport r;
  r.SetTone(AnalyzeTone(*spectrum, f_tone, bw));
  r.bw = bw;
  r.inl_worst = std::numeric_limits<double>::quiet_NaN();
  if (o.power) {
    r.power = *o.power;
    r.UpdateFom();
  } else {
    r.fom_schreier = std::numeric_limits<double>::quiet_NaN();
  }
  r.spectrum = spectrum;

  const std::string preamble = fmt::format(
      "# analyze.input = {}\n# analyze.f_s = {}\n# analyze.v_ref = {}\n"
      "# analyze.length = {}\n# analyze.osr = {}\n# analyze.window = {}\n"
      "# analyze.n_fft = {}\n",
      o.input, bs.f_s, bs.v_ref, bs.size(), o.osr, WindowName(window), n_fft);
  Emit(o.report, ReportText(r, preamble));
  if (o.report) std::cout << ReportText(r);
  if (o.spectrum) WriteFile(*o.spectrum, SpectrumCsv(*spectrum, preamble));
  return 0;
}

// --- emcheck ---------------------------------------------------------------

struct EmOptions {
  PlanOptions plan;
  std::optional<std::string> table;
  std::optional<double> current;
  std::optional<double> width;
  std::string layer = "internal";
};

struct Wire {
  std::string name;
  double current = 0.0;
  double width = 0.0;
  std::string layer;
};

EmRule RuleFor(const ExperimentPlan& plan, std::string_view layer) {
  if (layer == "internal") return plan.em_internal;
  if (layer == "top") return plan.em_top;
  throw InputError("emcheck: layer must be 'internal' or 'top', got '" +
                   std::string(layer) + "'");
}

int RunEmCheck(const EmOptions& o) {
  const ExperimentPlan plan = ResolvePlan(o.plan);
  std::vector<Wire> wires;
  if (o.table) {
    size_t line_no = 0;
    const std::string content = ReadFile(*o.table);
    for (std::string_view line : SplitLines(content)) {
      ++line_no;
      line = Trim(line);
      if (line.empty() || line.front() == '#') continue;
      const auto cols = Split(line, ',');
      const std::string where = fmt::format("{} line {}", *o.table, line_no);
      if (cols.size() != 4) throw InputError(where + ": expected name,current_a,width_um,layer");
      if (Trim(cols[0]) == "name") continue;
      wires.push_back({std::string(Trim(cols[0])), ParseDouble(cols[1], where),
                       ParseDouble(cols[2], where), std::string(Trim(cols[3]))});
    }
  } else {
    if (!o.current || !o.width) {
      throw ConfigError("emcheck: give --table or both --current and --width");
    }
    wires.push_back({"wire", *o.current, *o.width, o.layer});
  }
  std::cout << "name,current_a,width_um,layer,density_ua_per_um,margin,pass\n";
  for (const Wire& w : wires) {
    const EmResult r = EmCheck(w.current, w.width, RuleFor(plan, w.layer));
    std::cout << fmt::format("{},{},{},{},{:.4f},{:.4f},{}\n", w.name, w.current,
                             w.width, w.layer, r.density, r.margin,
                             r.pass ? "pass" : "fail");
  }
  return 0;
}

// --- fom -------------------------------------------------------------------

struct FomOptions {
  double sinad = 0.0;
  double bw = 0.0;
  double power = 0.0;
};

int RunFom(const FomOptions& o) {
  std::cout << fmt::format("fom_schreier_db: {:.2f}\nenob_bits: {:.2f}\n",
                           SchreierFom(o.sinad, o.bw, o.power), Enob(o.sinad));
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Behavioral simulator and test bench for a high-temperature "
               "second-order delta-sigma ADC"};
  app.require_subcommand(1);

  SimulateOptions sim;
  auto* simulate = app.add_subcommand("simulate", "Run one point: bitstream + metrics");
  AddPlanOptions(simulate, sim.plan, "--config");
  simulate->add_option("--temperature,-t", sim.temperature, "Temperature, C");
  simulate->add_option("--chip", sim.chip, "Monte-Carlo chip index");
  simulate->add_flag("--ideal", sim.ideal, "Disable all non-idealities");
  simulate->add_flag("--inl", sim.inl, "Also run the DC sweep for INL");
  simulate->add_option("--seed", sim.seed, "Monte-Carlo seed");
  simulate->add_option("--samples", sim.samples, "Record length (power of two)");
  simulate->add_option("--out,-o", sim.out, "Write the bitstream here");
  simulate->add_option("--format", sim.format, "Bitstream format: text|binary");
  simulate->add_option("--levels", sim.levels, "Bit levels: pm1|01");
  simulate->add_option("--report", sim.report, "Write the report here");
  simulate->add_option("--spectrum", sim.spectrum, "Write the PSD CSV here");
  simulate->add_option("--decimated", sim.decimated, "Write decimated CSV here");

  SweepOptions swp;
  auto* sweep = app.add_subcommand("sweep", "Temperature x chip sweep");
  AddPlanOptions(sweep, swp.plan, "--plan,--config");
  sweep->add_option("--out-dir", swp.out_dir, "Output directory");
  sweep->add_option("--jobs,-j", swp.jobs, "Worker threads");
  sweep->add_option("--chips", swp.chips, "Chips per temperature");
  sweep->add_option("--temperatures", swp.temperatures, "a:step:b or t1,t2,...");

  AnalyzeOptions ana;
  auto* analyze = app.add_subcommand("analyze", "Metrics of a captured bitstream");
  analyze->add_option("input", ana.input, "Capture or bitstream file")->required();
  analyze->add_option("--format", ana.format, "auto|csv|raw");
  analyze->add_option("--rate", ana.rate, "Sample rate, Hz");
  analyze->add_option("--vref", ana.v_ref, "Full scale, V");
  analyze->add_option("--threshold", ana.threshold, "Decision level, V");
  analyze->add_option("--osr", ana.osr, "Oversampling ratio (sets the band)");
  analyze->add_option("--tone", ana.tone, "Tone frequency, Hz (default: largest)");
  analyze->add_option("--window", ana.window, "hann|blackman|rectangular");
  analyze->add_option("--n-fft", ana.n_fft, "Segment length (default: record)");
  analyze->add_option("--power", ana.power, "Power for the FoM, W");
  analyze->add_option("--report", ana.report, "Write the report here");
  analyze->add_option("--spectrum", ana.spectrum, "Write the PSD CSV here");

  EmOptions em;
  auto* emcheck = app.add_subcommand("emcheck", "Electromigration margins");
  AddPlanOptions(emcheck, em.plan, "--config");
  emcheck->add_option("--table", em.table, "CSV: name,current_a,width_um,layer");
  emcheck->add_option("--current", em.current, "Wire current, A");
  emcheck->add_option("--width", em.width, "Wire width, um");
  emcheck->add_option("--layer", em.layer, "internal|top");

  FomOptions fom;
  auto* fom_cmd = app.add_subcommand("fom", "Schreier figure of merit");
  fom_cmd->add_option("--sinad", fom.sinad, "SINAD, dB")->required();
  fom_cmd->add_option("--bw", fom.bw, "Bandwidth, Hz")->required();
  fom_cmd->add_option("--power", fom.power, "Power, W")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? 0 : kExitInputError;
  }

  try {
    if (*simulate) return RunSimulate(sim);
    if (*sweep) return RunSweepCommand(swp);
    if (*analyze) return RunAnalyze(ana);
    if (*emcheck) return RunEmCheck(em);
    if (*fom_cmd) return RunFom(fom);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitInputError;
  }
  return 0;
}
