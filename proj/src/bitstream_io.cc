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

#include "htsd/bitstream_io.h"

#include <fmt/format.h>

#include <bit>
#include <charconv>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <sstream>

#include "htsd/errors.h"
#include "htsd/text.h"

namespace htsd {
namespace {

static_assert(std::endian::native == std::endian::little,
              "binary bitstream I/O assumes a little-endian host");

constexpr char kMagic[8] = {'H', 'T', 'S', 'D', 'B', 'I', 'T', 'S'};
constexpr std::string_view kTextTag = "# htsd-bitstream v1";
constexpr uint32_t kVersion = 1;

template <typename T>
void Put(std::string& out, T value) {
  char buf[sizeof(T)];
  std::memcpy(buf, &value, sizeof(T));
  out.append(buf, sizeof(T));
}

template <typename T>
T Take(std::string_view data, size_t& pos) {
  if (data.size() - pos < sizeof(T)) {
    throw InputError(fmt::format("bitstream: truncated at byte {}", pos));
  }
  T value;
  std::memcpy(&value, data.data() + pos, sizeof(T));
  pos += sizeof(T);
  return value;
}

int8_t EncodeBit(int8_t bit, BitLevels levels) {
  if (levels == BitLevels::kZeroOne) return bit > 0 ? 1 : 0;
  return bit > 0 ? 1 : -1;
}

Bitstream ParseBinary(std::string_view data) {
  size_t pos = sizeof(kMagic);
  const auto version = Take<uint32_t>(data, pos);
  if (version != kVersion) {
    throw InputError(fmt::format("bitstream: unsupported version {}", version));
  }
  const auto levels = Take<uint32_t>(data, pos);
  if (levels > 1) throw InputError("bitstream: bad levels field");
  Bitstream bs;
  bs.f_s = Take<double>(data, pos);
  bs.v_ref = Take<double>(data, pos);
  const auto length = Take<uint64_t>(data, pos);
  const auto meta = Take<uint32_t>(data, pos);
  if (data.size() - pos < meta) throw InputError("bitstream: truncated metadata");
  pos += meta;
  if (data.size() - pos != length) {
    throw InputError(fmt::format(
        "bitstream: header says {} samples, payload has {}", length,
        data.size() - pos));
  }
  bs.bits.resize(length);
  for (uint64_t i = 0; i < length; ++i) {
    const auto v = static_cast<int8_t>(data[pos + i]);
    const bool ok = levels == 0 ? (v == 1 || v == -1) : (v == 0 || v == 1);
    if (!ok) {
      throw InputError(fmt::format("bitstream: bad sample {} at byte {}", v,
                                   pos + i));
    }
    bs.bits[i] = (v == 1) ? 1 : -1;
  }
  return bs;
}

Bitstream ParseText(std::string_view data) {
  Bitstream bs;
  BitLevels levels = BitLevels::kPlusMinusOne;
  bool have_rate = false, have_vref = false, have_length = false;
  uint64_t length = 0;
  size_t line_no = 0;
  for (std::string_view line : SplitLines(data)) {
    ++line_no;
    line = Trim(line);
    if (line_no == 1) {
      if (line != kTextTag) throw InputError("bitstream: missing text tag");
      continue;
    }
    if (line.empty()) continue;
    if (line.front() == '#') {
      if (line_no != 2) continue;
      for (std::string_view token : SplitWhitespace(line.substr(1))) {
        const size_t eq = token.find('=');
        if (eq == std::string_view::npos) continue;
        const std::string_view key = token.substr(0, eq);
        const std::string_view value = token.substr(eq + 1);
        const std::string where = fmt::format("bitstream line {}", line_no);
        if (key == "levels") {
          levels = ParseBitLevels(value);
        } else if (key == "f_s") {
          bs.f_s = ParseDouble(value, where);
          have_rate = true;
        } else if (key == "v_ref") {
          bs.v_ref = ParseDouble(value, where);
          have_vref = true;
        } else if (key == "length") {
          length = static_cast<uint64_t>(ParseInt(value, where));
          have_length = true;
        }
      }
      continue;
    }
    int8_t bit = 0;
    if (line == "1" || line == "+1") {
      bit = 1;
    } else if (line == "-1" && levels == BitLevels::kPlusMinusOne) {
      bit = -1;
    } else if (line == "0" && levels == BitLevels::kZeroOne) {
      bit = -1;
    } else {
      throw InputError(fmt::format("bitstream line {}: bad sample '{}'",
                                   line_no, line));
    }
    bs.bits.push_back(bit);
  }
  if (!have_rate || !have_vref || !have_length) {
    throw InputError("bitstream: header lacks f_s, v_ref or length");
  }
  if (bs.bits.size() != length) {
    throw InputError(fmt::format("bitstream: header says {} samples, found {}",
                                 length, bs.bits.size()));
  }
  return bs;
}

}  // namespace

std::string_view BitLevelsName(BitLevels levels) {
  return levels == BitLevels::kZeroOne ? "01" : "pm1";
}

BitLevels ParseBitLevels(std::string_view name) {
  if (name == "pm1") return BitLevels::kPlusMinusOne;
  if (name == "01") return BitLevels::kZeroOne;
  throw ConfigError("unknown bit levels '" + std::string(name) + "'");
}

BitstreamFormat ParseBitstreamFormat(std::string_view name) {
  if (name == "text") return BitstreamFormat::kText;
  if (name == "binary") return BitstreamFormat::kBinary;
  throw ConfigError("unknown bitstream format '" + std::string(name) + "'");
}

std::string SerializeBitstream(const Bitstream& bs, BitstreamFormat format,
                               BitLevels levels, std::string_view metadata) {
  std::string out;
  if (format == BitstreamFormat::kBinary) {
    out.append(kMagic, sizeof(kMagic));
    Put<uint32_t>(out, kVersion);
    Put<uint32_t>(out, levels == BitLevels::kZeroOne ? 1 : 0);
    Put<double>(out, bs.f_s);
    Put<double>(out, bs.v_ref);
    Put<uint64_t>(out, bs.size());
    Put<uint32_t>(out, static_cast<uint32_t>(metadata.size()));
    out.append(metadata);
    for (int8_t b : bs.bits) out.push_back(static_cast<char>(EncodeBit(b, levels)));
    return out;
  }
  out.reserve(bs.size() * 3 + 256);
  out += kTextTag;
  out += '\n';
  out += fmt::format("# format=text levels={} f_s={} v_ref={} length={}\n",
                     BitLevelsName(levels), bs.f_s, bs.v_ref, bs.size());
  for (std::string_view line : SplitLines(metadata)) {
    if (line.empty()) continue;
    out += "# ";
    out += line;
    out += '\n';
  }
  for (int8_t b : bs.bits) {
    const int8_t e = EncodeBit(b, levels);
    out += e == 1 ? "1\n" : (e == 0 ? "0\n" : "-1\n");
  }
  return out;
}

bool LooksLikeBitstream(std::string_view data) {
  return (data.size() >= sizeof(kMagic) &&
          std::memcmp(data.data(), kMagic, sizeof(kMagic)) == 0) ||
         data.starts_with(kTextTag);
}

Bitstream ParseBitstream(std::string_view data) {
  if (data.size() >= sizeof(kMagic) &&
      std::memcmp(data.data(), kMagic, sizeof(kMagic)) == 0) {
    return ParseBinary(data);
  }
  return ParseText(data);
}

void WriteBitstream(const std::string& path, const Bitstream& bs,
                    BitstreamFormat format, BitLevels levels,
                    std::string_view metadata) {
  WriteFile(path, SerializeBitstream(bs, format, levels, metadata));
}

Bitstream ReadBitstream(const std::string& path) {
  return ParseBitstream(ReadFile(path));
}

std::string ReadFile(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InputError("cannot open '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return std::move(ss).str();
}

void WriteFile(const std::string& path, std::string_view content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw InputError("cannot write '" + path + "'");
  out.write(content.data(), static_cast<std::streamsize>(content.size()));
  if (!out) throw InputError("write failed for '" + path + "'");
}

}  // namespace htsd
