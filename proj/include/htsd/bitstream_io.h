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

#ifndef HTSD_BITSTREAM_IO_H_
#define HTSD_BITSTREAM_IO_H_

#include <string>
#include <string_view>

#include "htsd/modulator.h"

namespace htsd {

// Text layout:
//
//   # htsd-bitstream v1
//   # format=text levels=pm1 f_s=150000 v_ref=1.8 length=524288
//   # <free metadata lines>
//   1
//   -1
//   ...
//
// Binary layout (little-endian):
//
//   char[8]  magic "HTSDBITS"
//   u32      version (1)
//   u32      levels (0 = -1/+1, 1 = 0/1)
//   f64      f_s
//   f64      v_ref
//   u64      length
//   u32      metadata byte count, followed by that many bytes of text
//   i8       one sample per byte, `length` bytes
enum class BitstreamFormat { kText, kBinary };
enum class BitLevels { kPlusMinusOne, kZeroOne };

std::string_view BitLevelsName(BitLevels levels);
BitLevels ParseBitLevels(std::string_view name);
BitstreamFormat ParseBitstreamFormat(std::string_view name);

// `metadata` may span several lines; in text form each one is prefixed
// with "# ".
std::string SerializeBitstream(const Bitstream& bs, BitstreamFormat format,
                               BitLevels levels = BitLevels::kPlusMinusOne,
                               std::string_view metadata = {});

// Detects the format from the leading bytes. Throws InputError naming the
// line (text) or offset (binary) of the first problem.
Bitstream ParseBitstream(std::string_view data);

bool LooksLikeBitstream(std::string_view data);

void WriteBitstream(const std::string& path, const Bitstream& bs,
                    BitstreamFormat format,
                    BitLevels levels = BitLevels::kPlusMinusOne,
                    std::string_view metadata = {});
Bitstream ReadBitstream(const std::string& path);

// Whole-file helpers shared by the readers and writers.
std::string ReadFile(const std::string& path);
void WriteFile(const std::string& path, std::string_view content);

}  // namespace htsd

#endif  // HTSD_BITSTREAM_IO_H_
