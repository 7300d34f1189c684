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

#ifndef HTSD_RANDOM_H_
#define HTSD_RANDOM_H_

#include <cstdint>
#include <random>

namespace htsd {

// SplitMix64 finalizer applied to (seed, stream). Used to derive independent
// per-chip and per-run seeds so that serial and parallel sweeps agree.
uint64_t MixSeed(uint64_t seed, uint64_t stream);

// Seed stream identifier for a temperature point (bit pattern of the double).
uint64_t TemperatureStream(double temperature_c);

// Standard normal source with a fixed algorithm. The engine is mt19937_64,
// whose output sequence is fixed by the standard; the <random> distributions
// are implementation-defined, so the transform is done here (polar
// Box-Muller on 53-bit uniforms).
class NormalSource {
 public:
  explicit NormalSource(uint64_t seed) : engine_(seed) {}

  // Uniform in the open interval (0, 1).
  double Uniform();

  double Next();

  double Next(double sigma) { return sigma * Next(); }

 private:
  std::mt19937_64 engine_;
  bool has_spare_ = false;
  double spare_ = 0.0;
};

}  // namespace htsd

#endif  // HTSD_RANDOM_H_
