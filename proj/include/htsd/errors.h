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

#ifndef HTSD_ERRORS_H_
#define HTSD_ERRORS_H_

#include <stdexcept>
#include <string>

namespace htsd {

// Invalid configuration value, unknown config key, out-of-range stimulus.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Malformed or insufficient input data (short records, corrupt files).
class InputError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// The analyzed record has no tone standing out of the in-band floor.
class NoSignalToneError : public InputError {
 public:
  using InputError::InputError;
};

// A non-finite value reached the modulator state; the run is corrupted.
class SimulationError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace htsd

#endif  // HTSD_ERRORS_H_
