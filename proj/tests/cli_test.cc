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
#include <sys/wait.h>

#include <cmath>
#include <cstdio>
#include <string>

#include "htsd/bitstream_io.h"

namespace {

struct Result {
  int status = -1;
  std::string out;
};

Result Cli(const std::string& args) {
  const std::string cmd = std::string(HTSD_CLI_PATH) + " " + args + " 2>&1";
  Result r;
  FILE* pipe = popen(cmd.c_str(), "r");
  if (!pipe) return r;
  char buf[4096];
  size_t n;
  while ((n = fread(buf, 1, sizeof(buf), pipe)) > 0) r.out.append(buf, n);
  const int raw = pclose(pipe);
  r.status = WIFEXITED(raw) ? WEXITSTATUS(raw) : -1;
  return r;
}

double Field(const std::string& text, const std::string& key) {
  const size_t pos = text.find("\n" + key + ": ");
  if (pos == std::string::npos) return NAN;
  return std::stod(text.substr(pos + key.size() + 3));
}

std::string Tmp(const std::string& name) { return ::testing::TempDir() + "/" + name; }

TEST(CliTest, FomFromTableInputs) {
  const Result r = Cli("fom --sinad 74.5 --bw 146.48 --power 44e-6");
  EXPECT_EQ(r.status, 0);
  EXPECT_NE(r.out.find("fom_schreier_db: 139.72"), std::string::npos) << r.out;
}

TEST(CliTest, SimulateThenAnalyzeAgree) {
  for (const char* fmt : {"text", "binary"}) {
    const std::string bits = Tmp(std::string("sim.") + fmt);
    const Result sim =
        Cli("simulate --ideal --samples 65536 --format " + std::string(fmt) +
            " --out " + bits);
    ASSERT_EQ(sim.status, 0) << sim.out;
    const Result ana = Cli("analyze " + bits);
    ASSERT_EQ(ana.status, 0) << ana.out;
    EXPECT_NEAR(Field(sim.out, "sinad_db"), Field(ana.out, "sinad_db"), 0.01);
    EXPECT_NEAR(Field(sim.out, "snr_db"), Field(ana.out, "snr_db"), 0.01);
  }
}

TEST(CliTest, OutputsEmbedResolvedConfig) {
  const std::string bits = Tmp("cfg.txt");
  const Result sim = Cli("simulate --samples 65536 --seed 77 --set env.sigma_offset=0.001 "
                         "--out " + bits);
  ASSERT_EQ(sim.status, 0) << sim.out;
  EXPECT_NE(sim.out.find("# env.seed = 77"), std::string::npos);
  const std::string file = htsd::ReadFile(bits);
  EXPECT_NE(file.find("# env.seed = 77\n"), std::string::npos);
  EXPECT_NE(file.find("# env.sigma_offset = 0.001\n"), std::string::npos);
}

TEST(CliTest, UnknownKeyFailsFast) {
  const Result r = Cli("simulate --set modulator.bogus=1");
  EXPECT_EQ(r.status, 1);
  EXPECT_NE(r.out.find("modulator.bogus"), std::string::npos) << r.out;
}

TEST(CliTest, EmCheck) {
  Result r = Cli("emcheck --current 1e-6 --width 0.8 --layer top");
  EXPECT_EQ(r.status, 0);
  EXPECT_NE(r.out.find("1.2500,60.0000,pass"), std::string::npos) << r.out;
  const std::string table = Tmp("wires.csv");
  htsd::WriteFile(table, "name,current_a,width_um,layer\nvdd,4e-6,0.8,internal\n");
  r = Cli("emcheck --table " + table);
  EXPECT_NE(r.out.find("vdd,4e-06,0.8,internal,5.0000,9.0000,fail"), std::string::npos)
      << r.out;
}

TEST(CliTest, SweepExitCodes) {
  Result r = Cli("sweep --temperatures 25 --chips 1 --set sweep.record_length=65536 "
                 "--set inl.enabled=false --out-dir " + Tmp("cli_sweep"));
  EXPECT_EQ(r.status, 0) << r.out;
  r = Cli("sweep --temperatures 25,340 --chips 1 --set sweep.record_length=65536 "
          "--set inl.enabled=false --set env.collapse_temperature=300 --out-dir " +
          Tmp("cli_sweep2"));
  EXPECT_EQ(r.status, 2) << r.out;
  EXPECT_NE(htsd::ReadFile(Tmp("cli_sweep2/failures.csv")).find("\n340,0,"),
            std::string::npos);
}

TEST(CliTest, BadInputExitsWithOne) {
  EXPECT_EQ(Cli("analyze " + Tmp("does_not_exist.csv")).status, 1);
  EXPECT_EQ(Cli("fom --sinad 70 --bw 0 --power 1").status, 1);
}

}  // namespace
