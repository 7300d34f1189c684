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

#ifndef HTSD_MODULATOR_H_
#define HTSD_MODULATOR_H_

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "htsd/nonideality.h"

namespace htsd {

// Second-order single-bit CIFB modulator, reduced to its single-ended
// equivalent difference equation:
//
//   i1' = clip(i1 + a1 * (u - v * v_ref) - droop1 + n1)
//   i2' = clip(i2 + a2 * (g * i1' - v * v_ref) - droop2 + n2)
//   v'  = sign(i2')
//
// where v is the previous decision, g the interstage gain and clip()
// saturates at +/-v_dd. With g = 1 the second stage sees the same weight on
// i1' and on the DAC. The defaults keep a1 * g = 1, which places both NTF
// zeros at DC with all poles at the origin, while the small a1 keeps the
// first integrator swing well inside the rails.
struct ModulatorConfig {
  double f_s = 150e3;   // Hz
  int osr = 512;
  double v_ref = 1.8;   // DAC level, V
  double v_ic = 0.9;    // input common mode, V
  double v_dd = 1.8;    // supply; integrator saturation level, V
  double a1 = 0.25;
  double a2 = 0.2;
  double interstage_gain = 4.0;
  double c1 = 10e-12;   // F
  double c2 = 1e-12;    // F

  // Throws ConfigError naming the offending field.
  void Validate() const;

  double Bandwidth() const { return f_s / (2.0 * osr); }
  double HoldTime() const { return 1.0 / (2.0 * f_s); }
};

struct ModulatorState {
  double i1 = 0.0;
  double i2 = 0.0;
  int v_prev = +1;
};

// Single-bit modulator output. Bits are stored as -1/+1.
struct Bitstream {
  std::vector<int8_t> bits;
  double f_s = 0.0;
  double v_ref = 1.0;

  size_t size() const { return bits.size(); }
  double Mean() const;
  // bits * v_ref.
  std::vector<double> ToVolts() const;
};

enum class StimulusKind { kDc, kSine };

struct StimulusSpec {
  StimulusKind kind = StimulusKind::kSine;
  double amplitude = 0.0;  // peak, V
  double frequency = 0.0;  // Hz
  double dc_level = 0.0;   // V

  static StimulusSpec Dc(double level);
  static StimulusSpec Sine(double amplitude, double frequency,
                           double dc_level = 0.0);

  // Input voltage at sample n.
  double Sample(size_t n, double f_s) const;
  // Largest |u| the stimulus can reach.
  double Peak() const;
};

// Moves a sine's frequency onto the nearest bin of an n-sample record, so the
// record holds an integer number of periods (at least one).
StimulusSpec SnapToCoherent(const StimulusSpec& stimulus, double f_s,
                            size_t n_samples);

// Pre-drawn random terms for one step.
struct StepNoise {
  double n1 = 0.0;
  double n2 = 0.0;
  double comparator = 0.0;
};

struct StepOutput {
  ModulatorState state;
  int bit = +1;
};

// +1 if y + offset + noise >= 0, else -1. Exact zero maps to +1.
int Quantize(double y, double offset = 0.0, double noise = 0.0);

// Differential leakage imbalance for a node pair at v_ic +/- x/2 relative to
// dummies biased at v_ic, normalized to the leakage at v_ic. Odd in x.
double BiasLeakShape(double x, double v_ic, double phi);

// One clock period. Throws SimulationError on non-finite input or state.
StepOutput Step(const ModulatorState& state, double u,
                const ModulatorConfig& cfg, const NonidealitySet& nid,
                const StepNoise& noise = {});

// Drives Step() over the stimulus for n_samples, starting from the zero
// state. Noise is drawn from `noise_seed`; the CMFB tone from `nid` is added
// to the input. Deterministic for fixed inputs.
//
// Throws ConfigError when the stimulus exceeds v_ref or n_samples < 2 * osr.
Bitstream Run(const ModulatorConfig& cfg, const NonidealitySet& nid,
              const StimulusSpec& stimulus, size_t n_samples,
              uint64_t noise_seed);

// Same, over an explicit input waveform (no CMFB injection).
Bitstream RunWaveform(const ModulatorConfig& cfg, const NonidealitySet& nid,
                      std::span<const double> input, uint64_t noise_seed);

}  // namespace htsd

#endif  // HTSD_MODULATOR_H_
