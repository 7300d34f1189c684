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

#include "htsd/config.h"

#include <fmt/format.h>

#include <cmath>
#include <functional>
#include <limits>

#include "htsd/bitstream_io.h"
#include "htsd/errors.h"
#include "htsd/text.h"

namespace htsd {
namespace {

struct Entry {
  std::string key;
  std::function<void(ExperimentPlan&, std::string_view, const std::string&)>
      set;
  std::function<std::string(const ExperimentPlan&)> get;
};

double AsDouble(std::string_view v, const std::string& where) {
  try {
    const double d = ParseDouble(v, where);
    if (!std::isfinite(d)) throw ConfigError(where + ": must be finite");
    return d;
  } catch (const InputError& e) {
    throw ConfigError(e.what());
  }
}

int64_t AsInt(std::string_view v, const std::string& where) {
  try {
    return ParseInt(v, where);
  } catch (const InputError& e) {
    throw ConfigError(e.what());
  }
}

bool AsBool(std::string_view v, const std::string& where) {
  try {
    return ParseBool(v, where);
  } catch (const InputError& e) {
    throw ConfigError(e.what());
  }
}

size_t AsSize(std::string_view v, const std::string& where) {
  const int64_t n = AsInt(v, where);
  if (n < 0) throw ConfigError(where + ": must be >= 0");
  return static_cast<size_t>(n);
}

std::string Num(double v) { return fmt::format("{}", v); }

std::string JoinDoubles(const std::vector<double>& v) {
  std::string out;
  for (size_t i = 0; i < v.size(); ++i) {
    if (i) out += ',';
    out += Num(v[i]);
  }
  return out;
}

template <typename T, typename Member>
Entry DoubleEntry(std::string key, T ExperimentPlan::*group, Member member) {
  return {key,
          [group, member](ExperimentPlan& p, std::string_view v,
                          const std::string& where) {
            (p.*group).*member = AsDouble(v, where);
          },
          [group, member](const ExperimentPlan& p) {
            return Num((p.*group).*member);
          }};
}

#define HTSD_DOUBLE(prefix, group, field) \
  DoubleEntry(prefix "." #field, &ExperimentPlan::group, \
              &decltype(ExperimentPlan::group)::field)

const std::vector<Entry>& Registry() {
  static const std::vector<Entry> entries = [] {
    std::vector<Entry> e;
    // modulator.*
    e.push_back(HTSD_DOUBLE("modulator", modulator, f_s));
    e.push_back({"modulator.osr",
                 [](ExperimentPlan& p, std::string_view v, const std::string& w) {
                   p.modulator.osr = static_cast<int>(AsInt(v, w));
                   p.decimator.osr = p.modulator.osr;
                 },
                 [](const ExperimentPlan& p) {
                   return std::to_string(p.modulator.osr);
                 }});
    e.push_back(HTSD_DOUBLE("modulator", modulator, v_ref));
    e.push_back(HTSD_DOUBLE("modulator", modulator, v_ic));
    e.push_back(HTSD_DOUBLE("modulator", modulator, v_dd));
    e.push_back(HTSD_DOUBLE("modulator", modulator, a1));
    e.push_back(HTSD_DOUBLE("modulator", modulator, a2));
    e.push_back(HTSD_DOUBLE("modulator", modulator, interstage_gain));
    e.push_back(HTSD_DOUBLE("modulator", modulator, c1));
    e.push_back(HTSD_DOUBLE("modulator", modulator, c2));

    // stimulus.*
    e.push_back({"stimulus.kind",
                 [](ExperimentPlan& p, std::string_view v, const std::string& w) {
                   if (v == "dc") {
                     p.stimulus.kind = StimulusKind::kDc;
                   } else if (v == "sine") {
                     p.stimulus.kind = StimulusKind::kSine;
                   } else {
                     throw ConfigError(w + ": expected dc or sine");
                   }
                 },
                 [](const ExperimentPlan& p) {
                   return std::string(
                       p.stimulus.kind == StimulusKind::kDc ? "dc" : "sine");
                 }});
    e.push_back(HTSD_DOUBLE("stimulus", stimulus, amplitude));
    e.push_back(HTSD_DOUBLE("stimulus", stimulus, frequency));
    e.push_back(HTSD_DOUBLE("stimulus", stimulus, dc_level));
    e.push_back({"stimulus.snap_coherent",
                 [](ExperimentPlan& p, std::string_view v, const std::string& w) {
                   p.snap_coherent = AsBool(v, w);
                 },
                 [](const ExperimentPlan& p) {
                   return std::string(p.snap_coherent ? "true" : "false");
                 }});

    // decimator.*
    e.push_back({"decimator.order",
                 [](ExperimentPlan& p, std::string_view v, const std::string& w) {
                   p.decimator.order = static_cast<int>(AsInt(v, w));
                 },
                 [](const ExperimentPlan& p) {
                   return std::to_string(p.decimator.order);
                 }});

    // env.*
    e.push_back({"env.seed",
                 [](ExperimentPlan& p, std::string_view v, const std::string& w) {
                   p.env.seed = static_cast<uint64_t>(AsInt(v, w));
                 },
                 [](const ExperimentPlan& p) {
                   return std::to_string(p.env.seed);
                 }});
    e.push_back({"env.n_chips",
                 [](ExperimentPlan& p, std::string_view v, const std::string& w) {
                   p.env.n_chips = static_cast<int>(AsInt(v, w));
                 },
                 [](const ExperimentPlan& p) {
                   return std::to_string(p.env.n_chips);
                 }});
    e.push_back(HTSD_DOUBLE("env", env, sigma_mismatch));
    e.push_back(HTSD_DOUBLE("env", env, sigma_mirror));
    e.push_back(HTSD_DOUBLE("env", env, sigma_offset));
    e.push_back(HTSD_DOUBLE("env", env, sigma_process));
    e.push_back(HTSD_DOUBLE("env", env, v_boost));
    e.push_back({"env.ideal",
                 [](ExperimentPlan& p, std::string_view v, const std::string& w) {
                   p.env.ideal = AsBool(v, w);
                 },
                 [](const ExperimentPlan& p) {
                   return std::string(p.env.ideal ? "true" : "false");
                 }});
    e.push_back({"env.collapse_temperature",
                 [](ExperimentPlan& p, std::string_view v, const std::string& w) {
                   if (v == "none") {
                     p.env.collapse_temperature.reset();
                   } else {
                     p.env.collapse_temperature = AsDouble(v, w);
                   }
                 },
                 [](const ExperimentPlan& p) {
                   return p.env.collapse_temperature
                              ? Num(*p.env.collapse_temperature)
                              : std::string("none");
                 }});

    // leakage.*
    auto leak = [&e](std::string key, double LeakageParams::*m) {
      e.push_back({key,
                   [m](ExperimentPlan& p, std::string_view v,
                       const std::string& w) {
                     p.device.leakage.*m = AsDouble(v, w);
                   },
                   [m](const ExperimentPlan& p) {
                     return Num(p.device.leakage.*m);
                   }});
    };
    leak("leakage.i_ref", &LeakageParams::i_ref);
    leak("leakage.t_ref", &LeakageParams::t_ref);
    leak("leakage.t_double", &LeakageParams::t_double);
    leak("leakage.i0_ch", &LeakageParams::i0_ch);
    leak("leakage.n_sub", &LeakageParams::n_sub);
    leak("leakage.v_th0", &LeakageParams::v_th0);
    leak("leakage.tc_vth", &LeakageParams::tc_vth);
    leak("leakage.phi_j", &LeakageParams::phi_j);

    // analog.*
    auto analog = [&e](std::string key, double AnalogParams::*m) {
      e.push_back({key,
                   [m](ExperimentPlan& p, std::string_view v,
                       const std::string& w) {
                     p.device.analog.*m = AsDouble(v, w);
                   },
                   [m](const ExperimentPlan& p) {
                     return Num(p.device.analog.*m);
                   }});
    };
    analog("analog.noise_excess", &AnalogParams::noise_excess);
    analog("analog.input_cubic", &AnalogParams::input_cubic);
    analog("analog.cubic_temp_exponent", &AnalogParams::cubic_temp_exponent);
    analog("analog.cmfb_amplitude", &AnalogParams::cmfb_amplitude);
    analog("analog.cmfb_modulation", &AnalogParams::cmfb_modulation);
    e.push_back({"analog.cmfb_divider",
                 [](ExperimentPlan& p, std::string_view v, const std::string& w) {
                   p.device.analog.cmfb_divider = static_cast<int>(AsInt(v, w));
                 },
                 [](const ExperimentPlan& p) {
                   return std::to_string(p.device.analog.cmfb_divider);
                 }});
    analog("analog.i_static", &AnalogParams::i_static);
    analog("analog.mirror_ratio", &AnalogParams::mirror_ratio);

    // em.*
    e.push_back({"em.internal_threshold",
                 [](ExperimentPlan& p, std::string_view v, const std::string& w) {
                   p.em_internal.threshold = AsDouble(v, w);
                 },
                 [](const ExperimentPlan& p) { return Num(p.em_internal.threshold); }});
    e.push_back({"em.top_threshold",
                 [](ExperimentPlan& p, std::string_view v, const std::string& w) {
                   p.em_top.threshold = AsDouble(v, w);
                 },
                 [](const ExperimentPlan& p) { return Num(p.em_top.threshold); }});
    e.push_back({"em.margin_required",
                 [](ExperimentPlan& p, std::string_view v, const std::string& w) {
                   p.em_internal.margin_required = AsDouble(v, w);
                   p.em_top.margin_required = p.em_internal.margin_required;
                 },
                 [](const ExperimentPlan& p) {
                   return Num(p.em_internal.margin_required);
                 }});

    // sweep.*
    e.push_back({"sweep.temperatures",
                 [](ExperimentPlan& p, std::string_view v, const std::string&) {
                   p.temperatures = ParseTemperatureList(v);
                 },
                 [](const ExperimentPlan& p) { return JoinDoubles(p.temperatures); }});
    e.push_back({"sweep.record_length",
                 [](ExperimentPlan& p, std::string_view v, const std::string& w) {
                   p.record_length = AsSize(v, w);
                 },
                 [](const ExperimentPlan& p) {
                   return std::to_string(p.record_length);
                 }});
    e.push_back({"sweep.warmup",
                 [](ExperimentPlan& p, std::string_view v, const std::string& w) {
                   p.warmup = AsSize(v, w);
                 },
                 [](const ExperimentPlan& p) { return std::to_string(p.warmup); }});
    e.push_back({"sweep.jobs",
                 [](ExperimentPlan& p, std::string_view v, const std::string& w) {
                   p.jobs = static_cast<int>(AsInt(v, w));
                 },
                 [](const ExperimentPlan& p) { return std::to_string(p.jobs); }});
    e.push_back({"sweep.outputs",
                 [](ExperimentPlan& p, std::string_view v, const std::string&) {
                   p.outputs.clear();
                   for (std::string_view name : Split(v, ',')) {
                     name = Trim(name);
                     if (!name.empty()) p.outputs.push_back(ParseOutput(name));
                   }
                 },
                 [](const ExperimentPlan& p) {
                   std::string out;
                   for (size_t i = 0; i < p.outputs.size(); ++i) {
                     if (i) out += ',';
                     out += OutputName(p.outputs[i]);
                   }
                   return out;
                 }});
    e.push_back({"sweep.spectrum_temperatures",
                 [](ExperimentPlan& p, std::string_view v, const std::string&) {
                   p.spectrum_temperatures =
                       Trim(v).empty() ? std::vector<double>{}
                                       : ParseTemperatureList(v);
                 },
                 [](const ExperimentPlan& p) {
                   return JoinDoubles(p.spectrum_temperatures);
                 }});

    // inl.*
    e.push_back({"inl.enabled",
                 [](ExperimentPlan& p, std::string_view v, const std::string& w) {
                   p.inl.enabled = AsBool(v, w);
                 },
                 [](const ExperimentPlan& p) {
                   return std::string(p.inl.enabled ? "true" : "false");
                 }});
    e.push_back({"inl.points",
                 [](ExperimentPlan& p, std::string_view v, const std::string& w) {
                   p.inl.points = static_cast<int>(AsInt(v, w));
                 },
                 [](const ExperimentPlan& p) { return std::to_string(p.inl.points); }});
    e.push_back(HTSD_DOUBLE("inl", inl, span));
    e.push_back({"inl.samples_per_level",
                 [](ExperimentPlan& p, std::string_view v, const std::string& w) {
                   p.inl.samples_per_level = AsSize(v, w);
                 },
                 [](const ExperimentPlan& p) {
                   return std::to_string(p.inl.samples_per_level);
                 }});
    e.push_back({"inl.fit",
                 [](ExperimentPlan& p, std::string_view v, const std::string&) {
                   p.inl.fit = ParseLineFit(v);
                 },
                 [](const ExperimentPlan& p) {
                   return std::string(LineFitName(p.inl.fit));
                 }});

    // analysis.*
    e.push_back({"analysis.window",
                 [](ExperimentPlan& p, std::string_view v, const std::string&) {
                   p.analysis.window = ParseWindow(v);
                 },
                 [](const ExperimentPlan& p) {
                   return std::string(WindowName(p.analysis.window));
                 }});
    e.push_back({"analysis.n_fft",
                 [](ExperimentPlan& p, std::string_view v, const std::string& w) {
                   p.analysis.n_fft = AsSize(v, w);
                 },
                 [](const ExperimentPlan& p) {
                   return std::to_string(p.analysis.n_fft);
                 }});
    auto tone_int = [&e](std::string key, int ToneAnalysisOptions::*m) {
      e.push_back({key,
                   [m](ExperimentPlan& p, std::string_view v,
                       const std::string& w) {
                     p.analysis.tone.*m = static_cast<int>(AsInt(v, w));
                   },
                   [m](const ExperimentPlan& p) {
                     return std::to_string(p.analysis.tone.*m);
                   }});
    };
    tone_int("analysis.signal_half_width",
             &ToneAnalysisOptions::signal_half_width);
    tone_int("analysis.max_harmonic", &ToneAnalysisOptions::max_harmonic);
    tone_int("analysis.dc_guard_bins", &ToneAnalysisOptions::dc_guard_bins);
    e.push_back({"analysis.min_prominence_db",
                 [](ExperimentPlan& p, std::string_view v, const std::string& w) {
                   p.analysis.tone.min_prominence_db = AsDouble(v, w);
                 },
                 [](const ExperimentPlan& p) {
                   return Num(p.analysis.tone.min_prominence_db);
                 }});
    return e;
  }();
  return entries;
}

#undef HTSD_DOUBLE

}  // namespace

KeyValues ParseKeyValues(std::string_view text, std::string_view source) {
  KeyValues out;
  size_t line_no = 0;
  for (std::string_view line : SplitLines(text)) {
    ++line_no;
    const size_t hash = line.find('#');
    if (hash != std::string_view::npos) line = line.substr(0, hash);
    line = Trim(line);
    if (line.empty()) continue;
    const size_t eq = line.find('=');
    if (eq == std::string_view::npos) {
      throw ConfigError(fmt::format("{} line {}: expected key = value",
                                    source, line_no));
    }
    out.emplace_back(std::string(Trim(line.substr(0, eq))),
                     std::string(Trim(line.substr(eq + 1))));
  }
  return out;
}

std::pair<std::string, std::string> ParseAssignment(std::string_view text) {
  const size_t eq = text.find('=');
  if (eq == std::string_view::npos) {
    throw ConfigError("expected key=value, got '" + std::string(text) + "'");
  }
  return {std::string(Trim(text.substr(0, eq))),
          std::string(Trim(text.substr(eq + 1)))};
}

void ApplySetting(ExperimentPlan& plan, std::string_view key,
                  std::string_view value) {
  for (const Entry& entry : Registry()) {
    if (entry.key == key) {
      entry.set(plan, value, "config key '" + entry.key + "'");
      return;
    }
  }
  throw ConfigError("unknown config key '" + std::string(key) + "'");
}

void ApplySettings(ExperimentPlan& plan, const KeyValues& settings) {
  for (const auto& [key, value] : settings) ApplySetting(plan, key, value);
}

ExperimentPlan LoadPlan(const std::string& name_or_path) {
  ExperimentPlan plan = ExperimentPlan::Default();
  if (name_or_path == "default") return plan;
  std::string text;
  try {
    text = ReadFile(name_or_path);
  } catch (const InputError& e) {
    throw ConfigError(e.what());
  }
  ApplySettings(plan, ParseKeyValues(text, name_or_path));
  return plan;
}

std::string DescribePlan(const ExperimentPlan& plan, std::string_view prefix) {
  std::string out;
  for (const Entry& entry : Registry()) {
    out += fmt::format("{}{} = {}\n", prefix, entry.key, entry.get(plan));
  }
  return out;
}

std::vector<std::string> ConfigKeys() {
  std::vector<std::string> keys;
  for (const Entry& entry : Registry()) keys.push_back(entry.key);
  return keys;
}

std::vector<double> ParseTemperatureList(std::string_view text) {
  text = Trim(text);
  const std::string where = "temperature list";
  std::vector<double> out;
  if (text.find(':') != std::string_view::npos) {
    const auto parts = Split(text, ':');
    if (parts.size() != 3) throw ConfigError(where + ": expected a:step:b");
    const double a = AsDouble(parts[0], where);
    const double step = AsDouble(parts[1], where);
    const double b = AsDouble(parts[2], where);
    if (!(step > 0.0) || b < a) {
      throw ConfigError(where + ": need step > 0 and b >= a");
    }
    const auto n = static_cast<int64_t>(std::floor((b - a) / step + 1e-9));
    for (int64_t i = 0; i <= n; ++i) out.push_back(a + step * static_cast<double>(i));
  } else {
    for (std::string_view part : Split(text, ',')) {
      out.push_back(AsDouble(part, where));
    }
  }
  if (out.empty()) throw ConfigError(where + ": empty");
  return out;
}

}  // namespace htsd
