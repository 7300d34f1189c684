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

#include "htsd/modulator.h"

#include <algorithm>
#include <bit>
#include <cmath>
#include <numbers>
#include <string>

#include "htsd/errors.h"
#include "htsd/random.h"

namespace htsd {
namespace {

void Require(bool condition, const std::string& what) {
  if (!condition) throw ConfigError("modulator: " + what);
}

double Clip(double x, double limit) { return std::clamp(x, -limit, limit); }

// sin(2*pi*cycles) with the integer part of `cycles` removed first.
double SinCycles(double cycles) {
  return std::sin(2.0 * std::numbers::pi * (cycles - std::floor(cycles)));
}

double CosCycles(double cycles) {
  return std::cos(2.0 * std::numbers::pi * (cycles - std::floor(cycles)));
}

}  // namespace

void ModulatorConfig::Validate() const {
  Require(std::isfinite(f_s) && f_s > 0.0, "f_s must be > 0");
  Require(osr >= 2 && std::has_single_bit(static_cast<unsigned>(osr)),
          "osr must be a power of two >= 2");
  Require(v_ref > 0.0 && v_ref <= v_dd, "need 0 < v_ref <= v_dd");
  Require(v_ic >= 0.0 && v_ic <= v_dd, "need 0 <= v_ic <= v_dd");
  Require(std::isfinite(a1) && a1 > 0.0, "a1 must be > 0");
  Require(std::isfinite(a2) && a2 > 0.0, "a2 must be > 0");
  Require(std::isfinite(interstage_gain) && interstage_gain > 0.0,
          "interstage_gain must be > 0");
  Require(c1 > 0.0 && c2 > 0.0, "capacitances must be > 0");
}

double Bitstream::Mean() const {
  if (bits.empty()) return 0.0;
  int64_t sum = 0;
  for (int8_t b : bits) sum += b;
  return static_cast<double>(sum) / static_cast<double>(bits.size());
}

std::vector<double> Bitstream::ToVolts() const {
  std::vector<double> out(bits.size());
  for (size_t i = 0; i < bits.size(); ++i) out[i] = bits[i] * v_ref;
  return out;
}

StimulusSpec StimulusSpec::Dc(double level) {
  StimulusSpec s;
  s.kind = StimulusKind::kDc;
  s.dc_level = level;
  return s;
}

StimulusSpec StimulusSpec::Sine(double amplitude, double frequency,
                                double dc_level) {
  StimulusSpec s;
  s.kind = StimulusKind::kSine;
  s.amplitude = amplitude;
  s.frequency = frequency;
  s.dc_level = dc_level;
  return s;
}

double StimulusSpec::Sample(size_t n, double f_s) const {
  if (kind == StimulusKind::kDc) return dc_level;
  return dc_level +
         amplitude * SinCycles(frequency * static_cast<double>(n) / f_s);
}

double StimulusSpec::Peak() const {
  return std::abs(dc_level) +
         (kind == StimulusKind::kSine ? std::abs(amplitude) : 0.0);
}

StimulusSpec SnapToCoherent(const StimulusSpec& stimulus, double f_s,
                            size_t n_samples) {
  if (stimulus.kind != StimulusKind::kSine || n_samples < 4) return stimulus;
  const double n = static_cast<double>(n_samples);
  double k = std::round(stimulus.frequency * n / f_s);
  k = std::clamp(k, 1.0, n / 2.0 - 1.0);
  StimulusSpec out = stimulus;
  out.frequency = k * f_s / n;
  return out;
}

int Quantize(double y, double offset, double noise) {
  return (y + offset + noise) >= 0.0 ? +1 : -1;
}

double BiasLeakShape(double x, double v_ic, double phi) {
  const double base = phi + v_ic;
  const double hi = std::max(0.0, base + 0.5 * x);
  const double lo = std::max(0.0, base - 0.5 * x);
  return std::sqrt(hi / base) - std::sqrt(lo / base);
}

StepOutput Step(const ModulatorState& state, double u,
                const ModulatorConfig& cfg, const NonidealitySet& nid,
                const StepNoise& noise) {
  if (!std::isfinite(u) || !std::isfinite(state.i1) ||
      !std::isfinite(state.i2)) {
    throw SimulationError("non-finite modulator input or state");
  }
  const double feedback = state.v_prev * cfg.v_ref;

  double u_eff = u;
  if (nid.input_cubic != 0.0) u_eff -= nid.input_cubic * u * u * u;

  double droop1 = nid.droop1;
  if (nid.bias_droop1 != 0.0) {
    droop1 += nid.bias_droop1 * BiasLeakShape(u, cfg.v_ic, nid.junction_phi);
  }
  const double i1 =
      Clip(state.i1 + cfg.a1 * (u_eff - feedback) - droop1 + noise.n1,
           cfg.v_dd);

  double droop2 = nid.droop2;
  if (nid.bias_droop2 != 0.0) {
    droop2 += nid.bias_droop2 * BiasLeakShape(i1, cfg.v_ic, nid.junction_phi);
  }
  const double i2 =
      Clip(state.i2 + cfg.a2 * (cfg.interstage_gain * i1 - feedback) -
               droop2 + noise.n2,
           cfg.v_dd);

  const int bit = Quantize(i2, nid.comparator_offset, noise.comparator);
  return {{i1, i2, bit}, bit};
}

namespace {

Bitstream RunImpl(const ModulatorConfig& cfg, const NonidealitySet& nid,
                  size_t n_samples, uint64_t noise_seed, auto&& input_at) {
  Bitstream out;
  out.f_s = cfg.f_s;
  out.v_ref = cfg.v_ref;
  out.bits.resize(n_samples);

  NormalSource rng(noise_seed);
  ModulatorState state;
  StepNoise noise;
  for (size_t n = 0; n < n_samples; ++n) {
    if (nid.sigma_ktc1 > 0.0) noise.n1 = rng.Next(nid.sigma_ktc1);
    if (nid.sigma_ktc2 > 0.0) noise.n2 = rng.Next(nid.sigma_ktc2);
    if (nid.comparator_sigma > 0.0) {
      noise.comparator = rng.Next(nid.comparator_sigma);
    }
    const StepOutput step = Step(state, input_at(n), cfg, nid, noise);
    state = step.state;
    out.bits[n] = static_cast<int8_t>(step.bit);
  }
  return out;
}

}  // namespace

Bitstream Run(const ModulatorConfig& cfg, const NonidealitySet& nid,
              const StimulusSpec& stimulus, size_t n_samples,
              uint64_t noise_seed) {
  cfg.Validate();
  if (n_samples < 2 * static_cast<size_t>(cfg.osr)) {
    throw ConfigError("modulator: n_samples must be >= 2 * osr");
  }
  if (!(stimulus.Peak() <= cfg.v_ref)) {
    throw ConfigError("modulator: stimulus exceeds v_ref");
  }
  if (stimulus.kind == StimulusKind::kSine &&
      !(stimulus.frequency > 0.0 && stimulus.frequency < cfg.f_s / 2.0)) {
    throw ConfigError("modulator: sine frequency must be in (0, f_s/2)");
  }
  const CmfbTone& cmfb = nid.cmfb;
  const bool with_cmfb = cmfb.amplitude != 0.0 && cmfb.frequency > 0.0;
  return RunImpl(cfg, nid, n_samples, noise_seed, [&](size_t n) {
    double u = stimulus.Sample(n, cfg.f_s);
    if (with_cmfb) {
      const double carrier =
          CosCycles(cmfb.frequency * static_cast<double>(n) / cfg.f_s);
      u += cmfb.amplitude * (1.0 + cmfb.modulation * u / cfg.v_ref) * carrier;
    }
    return u;
  });
}

Bitstream RunWaveform(const ModulatorConfig& cfg, const NonidealitySet& nid,
                      std::span<const double> input, uint64_t noise_seed) {
  cfg.Validate();
  return RunImpl(cfg, nid, input.size(), noise_seed,
                 [&](size_t n) { return input[n]; });
}

}  // namespace htsd
