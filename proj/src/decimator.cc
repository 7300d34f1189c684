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

#include "htsd/decimator.h"

#include <bit>
#include <cmath>
#include <cstdint>
#include <numbers>

#include "htsd/errors.h"

namespace htsd {
namespace {

void CheckLength(size_t n, const DecimatorConfig& cfg) {
  if (n < 8 * static_cast<size_t>(cfg.osr)) {
    throw InputError("decimate: need at least 8 * osr input samples");
  }
}

double Gain(const DecimatorConfig& cfg) {
  return std::pow(static_cast<double>(cfg.osr), cfg.order);
}

}  // namespace

void DecimatorConfig::Validate() const {
  if (order < 1 || order > 6) throw ConfigError("decimator: order in [1, 6]");
  if (osr < 2 || !std::has_single_bit(static_cast<unsigned>(osr))) {
    throw ConfigError("decimator: osr must be a power of two >= 2");
  }
  // Output magnitude osr^order must fit the 64-bit accumulators.
  if (std::log2(static_cast<double>(osr)) * order > 62.0) {
    throw ConfigError("decimator: osr^order exceeds accumulator width");
  }
}

std::vector<double> Decimate(const Bitstream& bs, const DecimatorConfig& cfg) {
  cfg.Validate();
  CheckLength(bs.size(), cfg);
  const size_t osr = static_cast<size_t>(cfg.osr);
  const size_t order = static_cast<size_t>(cfg.order);

  // Unsigned wrap-around is exact modulo 2^64; the comb differences recover
  // the true value because it is bounded by osr^order.
  std::vector<uint64_t> integ(order, 0), comb(order, 0);
  std::vector<double> out;
  out.reserve(bs.size() / osr);
  const double scale = cfg.normalize ? bs.v_ref / Gain(cfg) : 1.0;

  for (size_t n = 0; n < bs.size(); ++n) {
    integ[0] += static_cast<uint64_t>(static_cast<int64_t>(bs.bits[n]));
    for (size_t s = 1; s < order; ++s) integ[s] += integ[s - 1];
    if ((n + 1) % osr != 0) continue;
    uint64_t y = integ[order - 1];
    for (size_t s = 0; s < order; ++s) {
      const uint64_t prev = comb[s];
      comb[s] = y;
      y -= prev;
    }
    out.push_back(static_cast<double>(static_cast<int64_t>(y)) * scale);
  }
  return out;
}

std::vector<double> CicTaps(const DecimatorConfig& cfg) {
  cfg.Validate();
  std::vector<double> taps{1.0};
  for (int s = 0; s < cfg.order; ++s) {
    std::vector<double> next(taps.size() + cfg.osr - 1, 0.0);
    for (size_t i = 0; i < taps.size(); ++i) {
      for (int j = 0; j < cfg.osr; ++j) next[i + j] += taps[i];
    }
    taps = std::move(next);
  }
  return taps;
}

std::vector<double> DecimateSamples(std::span<const double> x,
                                    const DecimatorConfig& cfg) {
  cfg.Validate();
  CheckLength(x.size(), cfg);
  const std::vector<double> taps = CicTaps(cfg);
  const size_t osr = static_cast<size_t>(cfg.osr);
  const double scale = cfg.normalize ? 1.0 / Gain(cfg) : 1.0;

  std::vector<double> out(x.size() / osr);
  for (size_t m = 0; m < out.size(); ++m) {
    const size_t last = (m + 1) * osr - 1;
    double acc = 0.0;
    for (size_t k = 0; k < taps.size() && k <= last; ++k) {
      acc += taps[k] * x[last - k];
    }
    out[m] = acc * scale;
  }
  return out;
}

double PassbandDroopDb(double f, double f_s, const DecimatorConfig& cfg) {
  const double x = std::numbers::pi * f / f_s;
  if (x == 0.0) return 0.0;
  const double ratio =
      std::sin(cfg.osr * x) / (static_cast<double>(cfg.osr) * std::sin(x));
  return 20.0 * cfg.order * std::log10(std::abs(ratio));
}

}  // namespace htsd
