// tests/test_cli.cc

// Copyright 2026 The narb Authors

// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//  http://www.apache.org/licenses/LICENSE-2.0
//
// THIS CODE IS PROVIDED *AS IS* BASIS, WITHOUT WARRANTIES OR CONDITIONS OF ANY
// KIND, EITHER EXPRESS OR IMPLIED, INCLUDING WITHOUT LIMITATION ANY IMPLIED
// WARRANTIES OR CONDITIONS OF TITLE, FITNESS FOR A PARTICULAR PURPOSE,
// MERCHANTABLITY OR NON-INFRINGEMENT.
// See the Apache 2 License for the specific language governing permissions and
// limitations under the License.

#include <sys/wait.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "doctest.h"
#include "narb/corpus.h"

namespace fs = std::filesystem;

namespace {

struct Result {
  int code = -1;
  std::string out;
  std::string err;
};

fs::path WorkDir() {
  static const fs::path dir = [] {
    fs::path d = fs::temp_directory_path() / "narb_cli_test";
    fs::remove_all(d);
    fs::create_directories(d);
    return d;
  }();
  return dir;
}

std::string Slurp(const fs::path &p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

Result Run(const std::string &args, const std::string &env = "") {
  const fs::path out = WorkDir() / "stdout.txt", err = WorkDir() / "stderr.txt";
  const std::string cmd = env + (env.empty() ? "" : " ") + "'" + std::string(NARB_CLI) + "' " + args +
                          " > '" + out.string() + "' 2> '" + err.string() + "'";
  const int status = std::system(cmd.c_str());
  Result r;
  r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  r.out = Slurp(out);
  r.err = Slurp(err);
  return r;
}

std::string P(const std::string &name) { return "'" + (WorkDir() / name).string() + "'"; }

// Tiny corpus shared by the tests below.
std::string Corpus() {
  static const std::string path = [] {
    const Result r = Run("gen-data --episodes 50 --scenes 4 --seed 3 -o " + P("corpus.jsonl"));
    REQUIRE(r.code == 0);
    return P("corpus.jsonl");
  }();
  return path;
}

std::vector<int> LabelColumn(const std::string &tsv) {
  std::vector<int> labels;
  std::istringstream in(tsv);
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty() || line[0] == '#' || line.rfind("episode_id", 0) == 0) continue;
    labels.push_back(line.back() - '0');
  }
  return labels;
}

}  // namespace

TEST_CASE("cli exit codes") {
  CHECK(Run("").code == 2);
  CHECK(Run("no-such-command").code == 2);
  CHECK(Run("stats --bogus-flag " + Corpus()).code == 2);
  CHECK(Run("stats " + P("missing.jsonl")).code == 2);
  const Result help = Run("--help");
  CHECK(help.code == 0);
  CHECK(help.out.find("train-narrator") != std::string::npos);
  const Result sub = Run("train-narrator --help");
  CHECK(sub.code == 0);
  for (const char *flag : {"--variant", "--teacher-forcing", "--epochs", "--patience", "--lr", "--split"})
    CHECK(sub.out.find(flag) != std::string::npos);

  {
    std::ofstream bad(WorkDir() / "bad.jsonl");
    bad << "{not json\n";
  }
  const Result runtime = Run("stats " + P("bad.jsonl"));
  CHECK(runtime.code == 1);
  CHECK(runtime.err.find("bad.jsonl") != std::string::npos);
}

TEST_CASE("cli stats of a generated corpus") {
  const Result r = Run("stats " + Corpus());
  REQUIRE(r.code == 0);
  CHECK(r.out.find("episodes\t50\n") != std::string::npos);
  CHECK(Run("stats " + Corpus() + " -o " + P("stats")).code == 0);
  CHECK(fs::exists(WorkDir() / "stats" / "stats.tsv"));
}

TEST_CASE("cli labels are monotone in the window") {
  const Result one = Run("label --n 1 " + Corpus());
  const Result five = Run("label --n 5 " + Corpus());
  REQUIRE(one.code == 0);
  REQUIRE(five.code == 0);
  const auto a = LabelColumn(one.out), b = LabelColumn(five.out);
  REQUIRE(a.size() == b.size());
  REQUIRE(!a.empty());
  for (std::size_t i = 0; i < a.size(); ++i) CHECK(a[i] <= b[i]);
}

TEST_CASE("cli seed precedence: flag over config over environment") {
  {
    std::ofstream cfg(WorkDir() / "cfg.json");
    cfg << R"({"seed": 7, "split": {"level": "instance"}})";
  }
  REQUIRE(Run("--config " + P("cfg.json") + " split " + Corpus() + " -o " + P("s1.json"), "NARB_SEED=9").code == 0);
  auto s1 = narb::LoadSplit((WorkDir() / "s1.json").string());
  CHECK(s1.seed == 7);
  CHECK(s1.level == narb::SplitLevel::kInstance);

  REQUIRE(Run("--config " + P("cfg.json") + " --seed 11 split " + Corpus() + " --level episode -o " + P("s2.json")).code == 0);
  auto s2 = narb::LoadSplit((WorkDir() / "s2.json").string());
  CHECK(s2.seed == 11);
  CHECK(s2.level == narb::SplitLevel::kEpisode);

  REQUIRE(Run("split " + Corpus() + " -o " + P("s3.json"), "NARB_SEED=9").code == 0);
  CHECK(narb::LoadSplit((WorkDir() / "s3.json").string()).seed == 9);

  {
    std::ofstream cfg(WorkDir() / "broken.json");
    cfg << "[1, 2";
  }
  CHECK(Run("--config " + P("broken.json") + " stats " + Corpus()).code == 2);
}

TEST_CASE("cli generation pipeline yields a report in table order") {
  REQUIRE(Run("split " + Corpus() + " --level instance -o " + P("inst.json")).code == 0);
  REQUIRE(Run("train-narrator " + Corpus() + " --split " + P("inst.json") +
              " --variant di2vina-mmd --epochs 2 --hidden 16 --fusion 8 --emb 8 -o " + P("narr.bin"))
              .code == 0);
  REQUIRE(Run("generate " + Corpus() + " --split " + P("inst.json") + " --model " + P("narr.bin") +
              " -o " + P("gen.tsv"))
              .code == 0);
  REQUIRE(Run("retrieve " + Corpus() + " --split " + P("inst.json") + " --method tfidf -o " + P("tfidf.tsv"))
              .code == 0);
  const Result report = Run("eval-gen --system mmd=" + P("gen.tsv") + " --system tfidf=" + P("tfidf.tsv"));
  REQUIRE(report.code == 0);
  std::istringstream in(report.out);
  std::string seed, note, header, row1, row2;
  std::getline(in, seed);
  std::getline(in, note);
  std::getline(in, header);
  std::getline(in, row1);
  std::getline(in, row2);
  CHECK(seed == "# seed=1");
  CHECK(note.find("METEOR-lite") != std::string::npos);
  CHECK(header == "model\tBLEU-1\tBLEU-2\tBLEU-3\tROUGE-L\tMETEOR\tCIDEr");
  CHECK(row1.rfind("mmd\t", 0) == 0);
  CHECK(row2.rfind("tfidf\t", 0) == 0);

  // The split level is checked before training.
  REQUIRE(Run("split " + Corpus() + " --level episode -o " + P("ep.json")).code == 0);
  CHECK(Run("train-narrator " + Corpus() + " --split " + P("ep.json") + " -o " + P("x.bin")).code == 1);
}
