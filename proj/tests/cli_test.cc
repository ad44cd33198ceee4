// Copyright 2026 The VDR Engine Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <gtest/gtest.h>

#include <fstream>
#include <sstream>

#include "oracles.hpp"
#include "vdr/cli.hpp"

namespace vdr {
namespace {

struct Result {
  int code;
  std::string out;
  std::string err;
};

Result vdr_run(std::vector<std::string> args) {
  args.insert(args.begin(), "vdr");
  std::ostringstream out, err;
  const int code = cli::run(args, out, err);
  return {code, out.str(), err.str()};
}

std::string slurp(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

class CliTest : public ::testing::Test {
 protected:
  static void SetUpTestSuite() {
    dir_ = new testing::TempDir;
    auto r = vdr_run({"synth", "--out-dir", fix("").string(), "--num-docs", "40", "--num-queries", "8"});
    ASSERT_EQ(r.code, 0) << r.err;
  }
  static void TearDownTestSuite() {
    delete dir_;
    dir_ = nullptr;
  }
  static std::filesystem::path fix(const std::string& name) { return *dir_ / "fx" / name; }
  static std::string p(const std::string& name) { return fix(name).string(); }

  static testing::TempDir* dir_;
};

testing::TempDir* CliTest::dir_ = nullptr;

TEST_F(CliTest, SearchThenEvaluate) {
  auto s = vdr_run({"search", "--corpus", p("corpus.vdre"), "--queries", p("queries.vdre"), "--out",
                    p("run.txt"), "--k", "10"});
  ASSERT_EQ(s.code, 0) << s.err;
  auto e = vdr_run({"evaluate", "--run", p("run.txt"), "--qrels", p("qrels.tsv"), "--out", p("eval.jsonl")});
  ASSERT_EQ(e.code, 0) << e.err;
  EXPECT_NE(e.out.find("nDCG@5 = 1.0000"), std::string::npos) << e.out;
  EXPECT_NE(e.out.find("recall@1 = 1.0000"), std::string::npos) << e.out;
  EXPECT_FALSE(slurp(fix("eval.jsonl")).empty());
}

TEST_F(CliTest, PooledAndMaskedSearch) {
  auto s = vdr_run({"search", "--corpus", p("corpus.vdre"), "--queries", p("queries.vdre"), "--query-tokens",
                    p("queries.tokens.jsonl"), "--mode", "maxsim", "--mask", "qtm", "--out", p("qtm.txt")});
  ASSERT_EQ(s.code, 0) << s.err;
  auto pooled = vdr_run({"search", "--corpus", p("corpus.vdre"), "--queries", p("queries.vdre"), "--mode",
                         "pooled", "--out", p("pooled.txt")});
  ASSERT_EQ(pooled.code, 0) << pooled.err;
  // masks are incompatible with pooled scoring
  auto bad = vdr_run({"search", "--corpus", p("corpus.vdre"), "--queries", p("queries.vdre"), "--mode",
                      "pooled", "--mask", "stm", "--out", p("bad.txt")});
  EXPECT_EQ(bad.code, cli::kUsageError);
  // lexical masks need OCR
  auto lex = vdr_run({"search", "--corpus", p("corpus.vdre"), "--queries", p("queries.vdre"), "--query-tokens",
                      p("queries.tokens.jsonl"), "--mask", "qtm-lex", "--out", p("lex.txt")});
  EXPECT_EQ(lex.code, cli::kUsageError);
}

TEST_F(CliTest, MissingRequiredOptionPrintsUsage) {
  auto r = vdr_run({"evaluate", "--run", p("run.txt")});
  EXPECT_EQ(r.code, cli::kUsageError);
  EXPECT_NE(r.err.find("--qrels"), std::string::npos);
  EXPECT_NE(r.err.find("Usage"), std::string::npos);
  EXPECT_EQ(vdr_run({}).code, cli::kUsageError);
  EXPECT_EQ(vdr_run({"frobnicate"}).code, cli::kUsageError);
  EXPECT_EQ(vdr_run({"search", "--corpus", p("corpus.vdre"), "--queries", p("queries.vdre"), "--out",
                     p("x.txt"), "--mode", "dense"})
                .code,
            cli::kUsageError);
}

TEST_F(CliTest, HelpExitsZero) {
  auto r = vdr_run({"--help"});
  EXPECT_EQ(r.code, 0);
  EXPECT_NE(r.out.find("search"), std::string::npos);
}

TEST_F(CliTest, DataErrorsExitTwo) {
  std::ofstream(fix("junk.vdre")) << "not an embedding file";
  auto r = vdr_run({"search", "--corpus", p("junk.vdre"), "--queries", p("queries.vdre"), "--out", p("j.txt")});
  EXPECT_EQ(r.code, cli::kDataError);
  EXPECT_NE(r.err.find("offset"), std::string::npos) << r.err;
  auto missing = vdr_run({"evaluate", "--run", p("nope.txt"), "--qrels", p("qrels.tsv")});
  EXPECT_EQ(missing.code, cli::kDataError);
}

TEST_F(CliTest, AnalyzeMatching) {
  auto r = vdr_run({"analyze", "matching", "--corpus", p("corpus.vdre"), "--queries", p("queries.vdre"),
                    "--query-tokens", p("queries.tokens.jsonl"), "--qrels", p("qrels.tsv"), "--modes",
                    "all,stm,qtm", "--out", p("matching.jsonl")});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_NE(r.out.find("stm"), std::string::npos);
  EXPECT_NE(r.out.find("qtm"), std::string::npos);
  std::istringstream lines(slurp(fix("matching.jsonl")));
  int n = 0;
  for (std::string line; std::getline(lines, line);) ++n;
  EXPECT_EQ(n, 4);
}

TEST_F(CliTest, AnalyzeFeatures) {
  ASSERT_EQ(vdr_run({"search", "--corpus", p("corpus.vdre"), "--queries", p("queries.vdre"), "--mode", "pooled",
                     "--out", p("fpooled.txt")})
                .code,
            0);
  auto r = vdr_run({"analyze", "features", "--run", p("fpooled.txt"), "--qrels", p("qrels.tsv"), "--ocr",
                    p("ocr.jsonl"), "--images", p("images"), "--out", p("features.jsonl"), "--tsv",
                    p("features.tsv")});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_NE(slurp(fix("features.tsv")).find("c_text"), std::string::npos);
}

TEST_F(CliTest, Simmap) {
  auto r = vdr_run({"simmap", "--corpus", p("corpus.vdre"), "--queries", p("queries.vdre"), "--query-tokens",
                    p("queries.tokens.jsonl"), "--query-id", "q-00001", "--doc-id", "doc-000001", "--out",
                    p("simmap.jsonl")});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_NE(slurp(fix("simmap.jsonl")).find("\"argmax\""), std::string::npos);
  auto unknown = vdr_run({"simmap", "--corpus", p("corpus.vdre"), "--queries", p("queries.vdre"), "--query-id",
                          "q-99999", "--doc-id", "doc-000001", "--out", p("s2.jsonl")});
  EXPECT_EQ(unknown.code, cli::kDataError);
}

TEST_F(CliTest, ConfigFile) {
  std::ofstream(fix("eval.toml")) << "[evaluate]\nrun = \"" << p("run.txt") << "\"\nqrels = \""
                                  << p("qrels.tsv") << "\"\n";
  ASSERT_EQ(vdr_run({"search", "--corpus", p("corpus.vdre"), "--queries", p("queries.vdre"), "--out",
                     p("run.txt")})
                .code,
            0);
  auto r = vdr_run({"--config", p("eval.toml"), "evaluate"});
  EXPECT_EQ(r.code, 0) << r.err;
  EXPECT_NE(r.out.find("nDCG@5 = 1.0000"), std::string::npos);
}

}  // namespace
}  // namespace vdr
