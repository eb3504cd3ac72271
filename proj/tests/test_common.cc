// tests/test_common.cc

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

#include <set>

#include "doctest.h"
#include "narb/common.h"
#include "narb/random.h"

using namespace narb;

TEST_CASE("stage seeds are stable and separate stages") {
  CHECK(StageSeed(1, "split") == StageSeed(1, "split"));
  CHECK(StageSeed(1, "split") != StageSeed(2, "split"));
  CHECK(StageSeed(1, "split") != StageSeed(1, "train-narrator"));
  std::set<std::uint64_t> seen;
  for (int k = 0; k < 1000; ++k) seen.insert(StageSeed(7, "episode-" + std::to_string(k)));
  CHECK(seen.size() == 1000);
}

TEST_CASE("tokenizer lowercases ASCII and splits on whitespace") {
  CHECK(Tokenize("  George,  if\tyou\nJUMP ") == std::vector<std::string>{"george,", "if", "you", "jump"});
  CHECK(Tokenize("").empty());
  CHECK(Tokenize("   ").empty());
  CHECK(ToLower("Peppa Pig!") == "peppa pig!");
  CHECK(Join({"a", "b", "c"}) == "a b c");
  CHECK(Join({}, ",").empty());
}

TEST_CASE("rng draws stay in range and replay") {
  Rng a(3), b(3);
  for (int i = 0; i < 10000; ++i) {
    const double u = a.Uniform();
    CHECK(u == b.Uniform());
    CHECK(u >= 0.0);
    CHECK(u < 1.0);
    const auto k = a.Below(7);
    CHECK(k == b.Below(7));
    CHECK(k < 7);
  }
  CHECK(Rng(1).Below(1) == 0);
}

TEST_CASE("rng Below is close to uniform") {
  Rng rng(11);
  std::vector<int> counts(6, 0);
  const int draws = 60000;
  for (int i = 0; i < draws; ++i) ++counts[rng.Below(6)];
  for (int c : counts) CHECK(std::abs(c - draws / 6) < 600);
}
