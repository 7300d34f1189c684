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

#ifndef HTSD_CAPTURE_H_
#define HTSD_CAPTURE_H_

#include <optional>
#include <string>
#include <string_view>

#include "htsd/modulator.h"

namespace htsd {

// kCsv: two columns (time, level), optional header row, '#' comments.
// kRaw: one sample per line, -1/+1 or 0/1, '#' comments. Files written by
// WriteBitstream (text or binary) are recognized under kAuto and kRaw.
enum class CaptureFormat { kAuto, kCsv, kRaw };

CaptureFormat ParseCaptureFormat(std::string_view name);

struct CaptureOptions {
  // Overrides any rate found in the file. A comment "# f_s=<Hz>" (or
  // "sample_rate=") in the file supplies it otherwise.
  std::optional<double> sample_rate;
  double v_ref = 1.8;
  // Decision level for analog captures; mid-scale (min + max) / 2 if empty.
  std::optional<double> threshold;
};

// Throws InputError naming the 1-based line of a malformed row, and
// ConfigError when no sample rate is available.
Bitstream ParseCapture(std::string_view content, CaptureFormat format,
                       const CaptureOptions& options,
                       std::string_view name = "capture");

Bitstream IngestCapture(const std::string& path, CaptureFormat format,
                        const CaptureOptions& options);

}  // namespace htsd

#endif  // HTSD_CAPTURE_H_
