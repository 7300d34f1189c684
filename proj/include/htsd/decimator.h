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

#ifndef HTSD_DECIMATOR_H_
#define HTSD_DECIMATOR_H_

#include <span>
#include <vector>

#include "htsd/modulator.h"

namespace htsd {

// sinc^order CIC decimator. Output m covers input samples up to index
// (m + 1) * osr - 1; the first order - 1 outputs see a partially filled
// filter (see SettledOffset()).
struct DecimatorConfig {
  int order = 3;
  int osr = 512;
  bool normalize = true;  // unity DC gain

  void Validate() const;
  // Number of leading outputs affected by the zero initial state.
  size_t SettledOffset() const { return static_cast<size_t>(order - 1); }
};

// Exact integer CIC (Hogenauer integrator/comb, modular 64-bit arithmetic).
// With normalize set, output is in volts (+1 -> v_ref); otherwise raw counts.
// Throws InputError when the bitstream is shorter than 8 * osr.
std::vector<double> Decimate(const Bitstream& bs, const DecimatorConfig& cfg);

// The same filter applied to real samples, as a direct polyphase FIR.
std::vector<double> DecimateSamples(std::span<const double> x,
                                    const DecimatorConfig& cfg);

// Integer taps of the sinc^order kernel (length order * (osr - 1) + 1),
// sum = osr^order.
std::vector<double> CicTaps(const DecimatorConfig& cfg);

// Magnitude response of the normalized filter at f (input rate f_s), dB.
// 0 at DC, negative on the passband.
double PassbandDroopDb(double f, double f_s, const DecimatorConfig& cfg);

}  // namespace htsd

#endif  // HTSD_DECIMATOR_H_
