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

#include "htsd/capture.h"

#include <fmt/format.h>

#include <algorithm>
#include <vector>

#include "htsd/bitstream_io.h"
#include "htsd/errors.h"
#include "htsd/text.h"

namespace htsd {
namespace {

// Picks up "f_s=..." or "sample_rate=..." inside a comment line.
std::optional<double> RateFromComment(std::string_view comment,
                                      std::string_view where) {
  for (std::string_view token : SplitWhitespace(comment)) {
    const size_t eq = token.find('=');
    if (eq == std::string_view::npos) continue;
    const std::string_view key = token.substr(0, eq);
    if (key == "f_s" || key == "sample_rate") {
      return ParseDouble(token.substr(eq + 1), where);
    }
  }
  return std::nullopt;
}

bool IsNumeric(std::string_view s) {
  try {
    ParseDouble(s, "");
    return true;
  } catch (const InputError&) {
    return false;
  }
}

Bitstream Finish(std::vector<double> levels, std::optional<double> rate,
                 const CaptureOptions& options, std::string_view name) {
  if (options.sample_rate) rate = options.sample_rate;
  if (!rate) {
    throw ConfigError(fmt::format(
        "{}: no sample rate in the file header; pass it explicitly", name));
  }
  if (!(*rate > 0.0)) throw ConfigError(fmt::format("{}: sample rate must be > 0", name));
  if (levels.empty()) throw InputError(fmt::format("{}: no samples", name));

  double threshold = 0.0;
  if (options.threshold) {
    threshold = *options.threshold;
  } else {
    const auto [lo, hi] = std::minmax_element(levels.begin(), levels.end());
    threshold = 0.5 * (*lo + *hi);
  }
  Bitstream bs;
  bs.f_s = *rate;
  bs.v_ref = options.v_ref;
  bs.bits.reserve(levels.size());
  for (double v : levels) bs.bits.push_back(v >= threshold ? 1 : -1);
  return bs;
}

Bitstream ParseCsv(std::string_view content, const CaptureOptions& options,
                   std::string_view name) {
  std::vector<double> levels;
  std::optional<double> rate;
  bool seen_data = false;
  size_t line_no = 0;
  for (std::string_view raw : SplitLines(content)) {
    ++line_no;
    const std::string_view line = Trim(raw);
    const std::string where = fmt::format("{} line {}", name, line_no);
    if (line.empty()) continue;
    if (line.front() == '#') {
      if (auto r = RateFromComment(line.substr(1), where)) rate = r;
      continue;
    }
    const std::vector<std::string_view> cols = Split(line, ',');
    if (!seen_data && !IsNumeric(cols.front())) {
      seen_data = true;  // header row
      continue;
    }
    seen_data = true;
    if (cols.size() != 2) {
      throw InputError(fmt::format("{}: expected 2 columns, got {}", where,
                                   cols.size()));
    }
    ParseDouble(cols[0], where);
    levels.push_back(ParseDouble(cols[1], where));
  }
  return Finish(std::move(levels), rate, options, name);
}

Bitstream ParseRaw(std::string_view content, const CaptureOptions& options,
                   std::string_view name) {
  std::vector<double> levels;
  std::optional<double> rate;
  size_t line_no = 0;
  for (std::string_view raw : SplitLines(content)) {
    ++line_no;
    const std::string_view line = Trim(raw);
    const std::string where = fmt::format("{} line {}", name, line_no);
    if (line.empty()) continue;
    if (line.front() == '#') {
      if (auto r = RateFromComment(line.substr(1), where)) rate = r;
      continue;
    }
    if (line == "1" || line == "+1") {
      levels.push_back(1.0);
    } else if (line == "0" || line == "-1") {
      levels.push_back(-1.0);
    } else {
      throw InputError(fmt::format("{}: bad bit '{}'", where, line));
    }
  }
  CaptureOptions digital = options;
  digital.threshold = 0.0;
  return Finish(std::move(levels), rate, digital, name);
}

}  // namespace

CaptureFormat ParseCaptureFormat(std::string_view name) {
  if (name == "auto") return CaptureFormat::kAuto;
  if (name == "csv") return CaptureFormat::kCsv;
  if (name == "raw") return CaptureFormat::kRaw;
  throw ConfigError("unknown capture format '" + std::string(name) + "'");
}

Bitstream ParseCapture(std::string_view content, CaptureFormat format,
                       const CaptureOptions& options, std::string_view name) {
  if (format != CaptureFormat::kCsv && LooksLikeBitstream(content)) {
    Bitstream bs = ParseBitstream(content);
    if (options.sample_rate) bs.f_s = *options.sample_rate;
    return bs;
  }
  if (format == CaptureFormat::kAuto) {
    format = CaptureFormat::kRaw;
    for (std::string_view line : SplitLines(content)) {
      line = Trim(line);
      if (line.empty() || line.front() == '#') continue;
      if (line.find(',') != std::string_view::npos) format = CaptureFormat::kCsv;
      break;
    }
  }
  return format == CaptureFormat::kCsv ? ParseCsv(content, options, name)
                                       : ParseRaw(content, options, name);
}

Bitstream IngestCapture(const std::string& path, CaptureFormat format,
                        const CaptureOptions& options) {
  return ParseCapture(ReadFile(path), format, options, path);
}

}  // namespace htsd
