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

#ifndef HTSD_NONIDEALITY_H_
#define HTSD_NONIDEALITY_H_

namespace htsd {

// Common-mode feedback disturbance: a carrier at `frequency`, amplitude
// modulated by the input (AM index `modulation` at full-scale input), added
// to the modulator input. Carrier and sidebands sit outside the signal band.
struct CmfbTone {
  double frequency = 0.0;   // Hz
  double amplitude = 0.0;   // V
  double modulation = 0.0;  // dimensionless
};

// Evaluated non-idealities for one (chip, temperature) point. Everything is
// zero in ideal mode, which makes Step() reduce to the bare difference
// equation.
struct NonidealitySet {
  // Signed per-hold droop from residual (post-compensation) leakage, V.
  double droop1 = 0.0;
  double droop2 = 0.0;
  // Scale of the signal-dependent junction leakage, V per hold. The
  // compensation dummies are biased at the common-mode level, so leakage
  // that follows the node voltage away from v_ic is left uncancelled.
  double bias_droop1 = 0.0;
  double bias_droop2 = 0.0;
  // Junction built-in potential used by the bias-dependence shape, V.
  double junction_phi = 0.7;
  // Static input nonlinearity: u -> u - input_cubic * u^3, 1/V^2.
  double input_cubic = 0.0;
  // Per-step thermal noise injected at each integrator output, V rms.
  double sigma_ktc1 = 0.0;
  double sigma_ktc2 = 0.0;
  double comparator_offset = 0.0;  // V
  double comparator_sigma = 0.0;   // V rms
  CmfbTone cmfb;
  // Not a non-ideality; carried along for the power estimate.
  double supply_current = 0.0;  // A

  static NonidealitySet Ideal() { return {}; }

  // True when no term perturbs the modulator (supply current is ignored).
  bool IsIdeal() const {
    return droop1 == 0.0 && droop2 == 0.0 && bias_droop1 == 0.0 &&
           bias_droop2 == 0.0 && input_cubic == 0.0 && sigma_ktc1 == 0.0 &&
           sigma_ktc2 == 0.0 && comparator_offset == 0.0 &&
           comparator_sigma == 0.0 && cmfb.amplitude == 0.0;
  }
};

}  // namespace htsd

#endif  // HTSD_NONIDEALITY_H_
