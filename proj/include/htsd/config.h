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

#ifndef HTSD_CONFIG_H_
#define HTSD_CONFIG_H_

#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "htsd/harness.h"

namespace htsd {

// Config files are flat "dotted.key = value" lines with '#' comments, e.g.
//
//   modulator.osr = 512
//   env.seed = 7
//   sweep.temperatures = -40:10:260
//
// Unknown keys and malformed values raise ConfigError naming the key.
using KeyValues = std::vector<std::pair<std::string, std::string>>;

KeyValues ParseKeyValues(std::string_view text, std::string_view source);

// "key=value" as given on the command line.
std::pair<std::string, std::string> ParseAssignment(std::string_view text);

void ApplySetting(ExperimentPlan& plan, std::string_view key,
                  std::string_view value);
void ApplySettings(ExperimentPlan& plan, const KeyValues& settings);

// "default" or a config file path (applied on top of the defaults).
ExperimentPlan LoadPlan(const std::string& name_or_path);

// Every key with its resolved value, one "<prefix>key = value" per line.
// Feeding the output back through ParseKeyValues reproduces the plan.
std::string DescribePlan(const ExperimentPlan& plan,
                         std::string_view prefix = "# ");

std::vector<std::string> ConfigKeys();

// "a:step:b" (inclusive) or "t1,t2,...".
std::vector<double> ParseTemperatureList(std::string_view text);

}  // namespace htsd

#endif  // HTSD_CONFIG_H_
