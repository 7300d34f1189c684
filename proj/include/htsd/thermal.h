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

#ifndef HTSD_THERMAL_H_
#define HTSD_THERMAL_H_

#include <cstddef>
#include <cstdint>
#include <optional>

#include "htsd/modulator.h"
#include "htsd/nonideality.h"

namespace htsd {

inline constexpr double kBoltzmann = 1.380649e-23;       // J/K
inline constexpr double kElementaryCharge = 1.602176634e-19;  // C
inline constexpr double kZeroCelsius = 273.15;           // K

inline double ToKelvin(double t_c) { return t_c + kZeroCelsius; }

// Operating point and Monte-Carlo population of one virtual chip.
struct Environment {
  double temperature_c = 25.0;
  uint64_t seed = 1;
  int chip = 0;
  int n_chips = 5;
  // Relative dummy/active junction mismatch, drawn once per chip.
  double sigma_mismatch = 2e-5;
  // Gain error of the 4:1 input-pair compensation mirror.
  double sigma_mirror = 0.01;
  double sigma_offset = 2e-3;   // comparator offset, V
  // Relative chip-to-chip spread of noise power and static nonlinearity.
  double sigma_process = 0.05;
  double v_boost = 0.2;         // clock boost, V
  bool ideal = false;
  // Phenomenological: above this temperature the dummy compensation is
  // switched off (residual = full leakage). Disabled when empty.
  std::optional<double> collapse_temperature;

  void Validate() const;
};

struct LeakageParams {
  double i_ref = 1.5e-13;  // junction leakage at t_ref, A
  double t_ref = 25.0;     // C
  double t_double = 12.0;  // K per doubling of junction leakage
  double i0_ch = 1e-7;     // channel current at v_gs = v_th, A
  double n_sub = 1.4;
  double v_th0 = 0.45;     // V at t_ref
  double tc_vth = 1e-3;    // V/K
  double phi_j = 0.7;      // junction built-in potential, V

  void Validate() const;
};

// Behavioural parameters that are not leakage physics. All of them are
// calibration values rather than measured circuit data.
struct AnalogParams {
  // Total sampled-noise power relative to a single kT/C term: both clock
  // phases, both differential halves, amplifier noise and setup ground noise.
  double noise_excess = 7.3;
  // Input-referred cubic coefficient at t_ref (1/V^2); scales with
  // (T/T_ref)^cubic_temp_exponent like the inverse carrier mobility.
  double input_cubic = 3.0e-4;
  double cubic_temp_exponent = 1.5;
  double cmfb_amplitude = 1e-4;  // V
  double cmfb_modulation = 1.0;
  int cmfb_divider = 512;        // CMFB clock = f_s / divider
  double i_static = 44e-6 / 1.8; // A
  double mirror_ratio = 4.0;

  void Validate() const;
};

struct DeviceModel {
  LeakageParams leakage;
  AnalogParams analog;
};

// Static per-chip process draws, derived from (seed, chip) only.
struct ChipDraws {
  double delta1 = 0.0;   // junction dummy mismatch, stage 1
  double delta2 = 0.0;   // stage 2
  double mirror1 = 0.0;  // input-pair mirror gain error, stage 1
  double mirror2 = 0.0;
  double offset = 0.0;   // comparator offset, V
  double noise_scale = 1.0;
  double cubic_scale = 1.0;
};

ChipDraws DrawChip(const Environment& env);

// i_ref * 2^((T - t_ref) / t_double).
double JunctionLeakage(double t_c, const LeakageParams& p);

// Signed residual after dummy cancellation with relative mismatch delta.
double CompensatedLeakage(double i_leak, double delta);

// Residual at the input-pair common node when a single dummy's current is
// mirrored up by `ratio` with gain error delta_mirror.
double InputPairResidual(double i_leak, double delta_mirror,
                         double ratio = 4.0);

// n * (kT/q) * ln(10), V/decade.
double SubthresholdSwing(double t_c, double n_sub);

double ThresholdVoltage(double t_c, const LeakageParams& p);

// i0_ch * 10^((v_gs_off - v_th(T)) / S(T)).
double ChannelLeakage(double v_gs_off, double t_c, const LeakageParams& p);

// channel_leakage(0, T) / channel_leakage(-v_boost, T).
double BoostReductionFactor(double v_boost, double t_c,
                            const LeakageParams& p);

// sqrt(kT/C), V rms.
double KtcSigma(double t_c, double capacitance);

// Composes the leakage, noise and distortion models for one chip at
// env.temperature_c. Droop per hold is I * (1 / (2 f_s)) / C for each stage.
// Deterministic in env.seed and env.chip; all zero in ideal mode.
NonidealitySet BuildNonidealities(const ModulatorConfig& cfg,
                                  const Environment& env,
                                  const DeviceModel& device);

// Noise seed for a run at env's (chip, temperature); `purpose` separates
// independent runs at the same point.
uint64_t RunSeed(const Environment& env, uint64_t purpose);

// Convenience: BuildNonidealities + Run with the point's noise seed.
Bitstream Run(const ModulatorConfig& cfg, const Environment& env,
              const DeviceModel& device, const StimulusSpec& stimulus,
              size_t n_samples);

enum class MetalLayer { kInternal, kTop };

struct EmRule {
  MetalLayer layer = MetalLayer::kInternal;
  double threshold = 45.0;  // uA/um
  double margin_required = 10.0;

  static EmRule Internal() { return {MetalLayer::kInternal, 45.0, 10.0}; }
  static EmRule Top() { return {MetalLayer::kTop, 75.0, 10.0}; }
};

struct EmResult {
  double density = 0.0;  // uA/um
  double margin = 0.0;   // threshold / density
  bool pass = false;
};

// Throws ConfigError when width_um <= 0.
EmResult EmCheck(double current_a, double width_um, const EmRule& rule);

}  // namespace htsd

#endif  // HTSD_THERMAL_H_
