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

#include <gtest/gtest.h>

#include <random>
#include <string>

#include "htsd/bitstream_io.h"
#include "htsd/capture.h"
#include "htsd/errors.h"
#include "htsd/modulator.h"

namespace htsd {
namespace {

Bitstream RandomBits(size_t n, uint64_t seed) {
  std::mt19937_64 gen(seed);
  Bitstream bs;
  bs.f_s = 150e3;
  bs.v_ref = 1.8;
  bs.bits.resize(n);
  for (auto& b : bs.bits) b = (gen() & 1) ? 1 : -1;
  return bs;
}

std::string TempPath(const std::string& name) {
  return ::testing::TempDir() + "/" + name;
}

std::string ErrorOf(auto&& fn) {
  try {
    fn();
  } catch (const std::exception& e) {
    return e.what();
  }
  return "";
}

TEST(BitstreamIoTest, RoundTripsInEveryLayout) {
  const Bitstream bs = RandomBits(5000, 1);
  for (BitstreamFormat f : {BitstreamFormat::kText, BitstreamFormat::kBinary}) {
    for (BitLevels l : {BitLevels::kPlusMinusOne, BitLevels::kZeroOne}) {
      const std::string path = TempPath("rt.bits");
      WriteBitstream(path, bs, f, l, "modulator.osr = 512\nenv.seed = 3\n");
      const Bitstream back = ReadBitstream(path);
      EXPECT_EQ(back.bits, bs.bits);
      EXPECT_EQ(back.f_s, bs.f_s);
      EXPECT_EQ(back.v_ref, bs.v_ref);
    }
  }
}

TEST(BitstreamIoTest, TextHeader) {
  Bitstream bs = RandomBits(3, 2);
  bs.bits = {1, -1, 1};
  const std::string text =
      SerializeBitstream(bs, BitstreamFormat::kText, BitLevels::kZeroOne, "seed = 4");
  EXPECT_EQ(text,
            "# htsd-bitstream v1\n"
            "# format=text levels=01 f_s=150000 v_ref=1.8 length=3\n"
            "# seed = 4\n1\n0\n1\n");
}

TEST(BitstreamIoTest, CorruptInputNamesTheLine) {
  const std::string text =
      "# htsd-bitstream v1\n# format=text levels=pm1 f_s=1 v_ref=1 length=3\n"
      "1\n-1\n2\n";
  EXPECT_NE(ErrorOf([&] { ParseBitstream(text); }).find("line 5"), std::string::npos);

  std::string bin = SerializeBitstream(RandomBits(10, 3), BitstreamFormat::kBinary);
  bin.pop_back();
  EXPECT_THROW(ParseBitstream(bin), InputError);
}

TEST(CaptureTest, AnalogLevelsThresholdAtMidScale) {
  const std::string csv =
      "time_s,level_v\n0,0\n1e-6,3.3\n2e-6,3.29\n3e-6,0.02\n4e-6,1.7\n";
  CaptureOptions opt;
  opt.sample_rate = 1e6;
  const Bitstream bs = ParseCapture(csv, CaptureFormat::kAuto, opt);
  EXPECT_EQ(bs.bits, (std::vector<int8_t>{-1, 1, 1, -1, 1}));
  EXPECT_EQ(bs.f_s, 1e6);
}

TEST(CaptureTest, RateFromHeaderComment) {
  const Bitstream bs =
      ParseCapture("# f_s=150000\n0,1\n1,0\n", CaptureFormat::kCsv, {});
  EXPECT_EQ(bs.f_s, 150e3);
  EXPECT_EQ(bs.bits, (std::vector<int8_t>{1, -1}));
}

TEST(CaptureTest, MissingRateIsAConfigError) {
  EXPECT_THROW(ParseCapture("0,1\n1,0\n", CaptureFormat::kCsv, {}), ConfigError);
}

TEST(CaptureTest, CorruptRowIsNamed) {
  std::string csv = "time,level\n";
  for (int i = 0; i < 1000; ++i) {
    csv += (i == 637) ? "0.1,abc\n" : std::to_string(i) + "," + (i % 3 ? "3.3" : "0") + "\n";
  }
  CaptureOptions opt;
  opt.sample_rate = 1e3;
  const std::string msg =
      ErrorOf([&] { ParseCapture(csv, CaptureFormat::kCsv, opt, "cap.csv"); });
  EXPECT_NE(msg.find("cap.csv line 639"), std::string::npos) << msg;

  csv = "time,level\n0,1\n1,2,3\n";
  EXPECT_NE(ErrorOf([&] { ParseCapture(csv, CaptureFormat::kCsv, opt); })
                .find("line 3"),
            std::string::npos);
}

TEST(CaptureTest, RawBits) {
  CaptureOptions opt;
  opt.sample_rate = 2e3;
  opt.v_ref = 1.0;
  const Bitstream bs = ParseCapture("1\n0\n1\n1\n", CaptureFormat::kAuto, opt);
  EXPECT_EQ(bs.bits, (std::vector<int8_t>{1, -1, 1, 1}));
  EXPECT_EQ(bs.v_ref, 1.0);
  EXPECT_THROW(ParseCapture("1\n7\n", CaptureFormat::kRaw, opt), InputError);
}

TEST(CaptureTest, ExportedBitstreamRoundTrips) {
  const Bitstream bs = RandomBits(4096, 5);
  for (BitstreamFormat f : {BitstreamFormat::kText, BitstreamFormat::kBinary}) {
    const std::string path = TempPath("export.bits");
    WriteBitstream(path, bs, f);
    const Bitstream back = IngestCapture(path, CaptureFormat::kAuto, {});
    EXPECT_EQ(back.bits, bs.bits);
    EXPECT_EQ(back.f_s, bs.f_s);
  }
  EXPECT_THROW(IngestCapture(TempPath("missing.csv"), CaptureFormat::kAuto, {}),
               InputError);
}

}  // namespace
}  // namespace htsd
