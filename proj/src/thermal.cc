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

#include "htsd/thermal.h"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <string>

#include "htsd/errors.h"
#include "htsd/random.h"

namespace htsd {
namespace {

void Require(bool condition, const std::string& what) {
  if (!condition) throw ConfigError(what);
}

constexpr uint64_t kChipDrawStream = 0x43484950;  // "CHIP"

}  // namespace

void Environment::Validate() const {
  Require(temperature_c >= -55.0 && temperature_c <= 350.0,
          "environment: temperature must be in [-55, 350] C");
  Require(sigma_mismatch >= 0.0, "environment: sigma_mismatch must be >= 0");
  Require(sigma_mirror >= 0.0, "environment: sigma_mirror must be >= 0");
  Require(sigma_offset >= 0.0, "environment: sigma_offset must be >= 0");
  Require(sigma_process >= 0.0, "environment: sigma_process must be >= 0");
  Require(v_boost >= 0.0 && v_boost <= 0.3,
          "environment: v_boost must be in [0, 0.3] V");
  Require(n_chips >= 1, "environment: n_chips must be >= 1");
  Require(chip >= 0, "environment: chip index must be >= 0");
}

void LeakageParams::Validate() const {
  Require(i_ref > 0.0 && t_double > 0.0 && i0_ch > 0.0 && v_th0 > 0.0 &&
              tc_vth > 0.0 && phi_j > 0.0,
          "leakage: parameters must be positive");
  Require(n_sub >= 1.0 && n_sub <= 2.0, "leakage: n_sub must be in [1, 2]");
}

void AnalogParams::Validate() const {
  Require(noise_excess >= 0.0, "analog: noise_excess must be >= 0");
  Require(input_cubic >= 0.0, "analog: input_cubic must be >= 0");
  Require(cmfb_amplitude >= 0.0, "analog: cmfb_amplitude must be >= 0");
  Require(cmfb_divider >= 1, "analog: cmfb_divider must be >= 1");
  Require(i_static >= 0.0, "analog: i_static must be >= 0");
  Require(mirror_ratio > 0.0, "analog: mirror_ratio must be > 0");
}

ChipDraws DrawChip(const Environment& env) {
  NormalSource rng(MixSeed(MixSeed(env.seed, kChipDrawStream),
                           static_cast<uint64_t>(env.chip)));
  ChipDraws d;
  d.delta1 = rng.Next(env.sigma_mismatch);
  d.delta2 = rng.Next(env.sigma_mismatch);
  d.mirror1 = rng.Next(env.sigma_mirror);
  d.mirror2 = rng.Next(env.sigma_mirror);
  d.offset = rng.Next(env.sigma_offset);
  d.noise_scale = std::max(0.0, 1.0 + rng.Next(env.sigma_process));
  d.cubic_scale = std::max(0.0, 1.0 + rng.Next(env.sigma_process));
  return d;
}

double JunctionLeakage(double t_c, const LeakageParams& p) {
  return p.i_ref * std::exp2((t_c - p.t_ref) / p.t_double);
}

double CompensatedLeakage(double i_leak, double delta) {
  return i_leak * delta;
}

double InputPairResidual(double i_leak, double delta_mirror, double ratio) {
  return ratio * i_leak * delta_mirror;
}

double SubthresholdSwing(double t_c, double n_sub) {
  return n_sub * kBoltzmann * ToKelvin(t_c) / kElementaryCharge *
         std::numbers::ln10;
}

double ThresholdVoltage(double t_c, const LeakageParams& p) {
  return p.v_th0 - p.tc_vth * (t_c - p.t_ref);
}

double ChannelLeakage(double v_gs_off, double t_c, const LeakageParams& p) {
  const double swing = SubthresholdSwing(t_c, p.n_sub);
  return p.i0_ch *
         std::pow(10.0, (v_gs_off - ThresholdVoltage(t_c, p)) / swing);
}

double BoostReductionFactor(double v_boost, double t_c,
                            const LeakageParams& p) {
  return ChannelLeakage(0.0, t_c, p) / ChannelLeakage(-v_boost, t_c, p);
}

double KtcSigma(double t_c, double capacitance) {
  return std::sqrt(kBoltzmann * ToKelvin(t_c) / capacitance);
}

NonidealitySet BuildNonidealities(const ModulatorConfig& cfg,
                                  const Environment& env,
                                  const DeviceModel& device) {
  cfg.Validate();
  env.Validate();
  device.leakage.Validate();
  device.analog.Validate();

  const LeakageParams& lp = device.leakage;
  const AnalogParams& ap = device.analog;
  NonidealitySet nid;
  nid.supply_current = ap.i_static;
  if (env.ideal) return nid;

  const double t = env.temperature_c;
  const ChipDraws draws = DrawChip(env);
  const bool collapsed =
      env.collapse_temperature.has_value() && t > *env.collapse_temperature;

  const double i_junction = JunctionLeakage(t, lp);
  const double i_channel = ChannelLeakage(-env.v_boost, t, lp);
  auto residual = [&](double delta, double mirror) {
    if (collapsed) return i_junction + i_junction * ap.mirror_ratio;
    return CompensatedLeakage(i_junction, delta) +
           InputPairResidual(i_junction, mirror, ap.mirror_ratio);
  };
  const double res1 = residual(draws.delta1, draws.mirror1) + i_channel;
  const double res2 = residual(draws.delta2, draws.mirror2) + i_channel;

  const double t_hold = cfg.HoldTime();
  nid.droop1 = res1 * t_hold / cfg.c1;
  nid.droop2 = res2 * t_hold / cfg.c2;
  nid.bias_droop1 = i_junction * t_hold / cfg.c1;
  nid.bias_droop2 = i_junction * t_hold / cfg.c2;
  nid.junction_phi = lp.phi_j;

  const double mobility_ratio = ToKelvin(t) / ToKelvin(lp.t_ref);
  nid.input_cubic = ap.input_cubic * draws.cubic_scale *
                    std::pow(mobility_ratio, ap.cubic_temp_exponent);

  const double excess = std::sqrt(ap.noise_excess * draws.noise_scale);
  nid.sigma_ktc1 = excess * KtcSigma(t, cfg.c1);
  nid.sigma_ktc2 = excess * KtcSigma(t, cfg.c2);
  nid.comparator_offset = draws.offset;

  nid.cmfb.frequency = cfg.f_s / ap.cmfb_divider;
  nid.cmfb.amplitude = ap.cmfb_amplitude;
  nid.cmfb.modulation = ap.cmfb_modulation;

  nid.supply_current = ap.i_static + std::abs(res1) + std::abs(res2);
  return nid;
}

uint64_t RunSeed(const Environment& env, uint64_t purpose) {
  const uint64_t chip_seed =
      MixSeed(env.seed, static_cast<uint64_t>(env.chip));
  return MixSeed(MixSeed(chip_seed, TemperatureStream(env.temperature_c)),
                 purpose);
}

Bitstream Run(const ModulatorConfig& cfg, const Environment& env,
              const DeviceModel& device, const StimulusSpec& stimulus,
              size_t n_samples) {
  const NonidealitySet nid = BuildNonidealities(cfg, env, device);
  return Run(cfg, nid, stimulus, n_samples, RunSeed(env, 0));
}

EmResult EmCheck(double current_a, double width_um, const EmRule& rule) {
  if (!(width_um > 0.0)) throw ConfigError("emcheck: width must be > 0");
  EmResult r;
  r.density = std::abs(current_a) * 1e6 / width_um;
  r.margin = r.density > 0.0 ? rule.threshold / r.density
                             : std::numeric_limits<double>::infinity();
  r.pass = r.margin >= rule.margin_required;
  return r;
}

}  // namespace htsd
