// tests/test_metrics.cc

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

#include <algorithm>
#include <cmath>
#include <map>

#include "doctest.h"
#include "fixtures.h"
#include "narb/common.h"
#include "narb/metrics.h"

using namespace narb;
using namespace narb::testing;

namespace {

Words W(const std::string &s) { return Tokenize(s); }

using Gram = std::vector<std::string>;

std::map<Gram, int> Grams(const Words &w, int n) {
  std::map<Gram, int> out;
  for (std::size_t i = 0; i + static_cast<std::size_t>(n) <= w.size(); ++i)
    ++out[Gram(w.begin() + static_cast<std::ptrdiff_t>(i), w.begin() + static_cast<std::ptrdiff_t>(i) + n)];
  return out;
}

// Straight-line corpus BLEU.
double OracleBleu(const std::vector<Words> &c, const std::vector<Words> &r, int max_n) {
  double log_sum = 0.0;
  for (int n = 1; n <= max_n; ++n) {
    double hit = 0.0, total = 0.0;
    for (std::size_t i = 0; i < c.size(); ++i) {
      const auto cg = Grams(c[i], n), rg = Grams(r[i], n);
      for (const auto &[g, k] : cg) {
        total += k;
        const auto it = rg.find(g);
        if (it != rg.end()) hit += std::min(k, it->second);
      }
    }
    if (hit == 0.0) return 0.0;
    log_sum += std::log(hit / total);
  }
  double clen = 0.0, rlen = 0.0;
  for (std::size_t i = 0; i < c.size(); ++i) {
    clen += static_cast<double>(c[i].size());
    rlen += static_cast<double>(r[i].size());
  }
  const double bp = clen < rlen ? std::exp(1.0 - rlen / clen) : 1.0;
  return 100.0 * bp * std::exp(log_sum / max_n);
}

// Longest common subsequence by enumerating every subsequence of `a`.
std::size_t BruteLcs(const Words &a, const Words &b) {
  std::size_t best = 0;
  for (std::uint32_t mask = 0; mask < (1u << a.size()); ++mask) {
    std::size_t j = 0, len = 0;
    bool ok = true;
    for (std::size_t i = 0; i < a.size() && ok; ++i) {
      if (!(mask & (1u << i))) continue;
      while (j < b.size() && b[j] != a[i]) ++j;
      if (j == b.size()) ok = false;
      else {
        ++j;
        ++len;
      }
    }
    if (ok) best = std::max(best, len);
  }
  return best;
}

// CIDEr straight from its definition.
std::vector<double> OracleCider(const std::vector<Words> &c, const std::vector<Words> &r) {
  const double N = static_cast<double>(r.size());
  std::vector<double> out(c.size(), 0.0);
  for (int n = 1; n <= 4; ++n) {
    std::map<Gram, int> df;
    for (const Words &ref : r)
      for (const auto &[g, k] : Grams(ref, n)) ++df[g];
    auto vec = [&](const Words &w) {
      std::map<Gram, double> v;
      for (const auto &[g, k] : Grams(w, n)) {
        const auto it = df.find(g);
        const double d = it == df.end() ? 1.0 : std::max(1.0, static_cast<double>(it->second));
        v[g] = k * (std::log(N) - std::log(d));
      }
      return v;
    };
    for (std::size_t i = 0; i < c.size(); ++i) {
      const auto a = vec(c[i]), b = vec(r[i]);
      double dot = 0.0, na = 0.0, nb = 0.0;
      for (const auto &[g, x] : a) {
        na += x * x;
        const auto it = b.find(g);
        if (it != b.end()) dot += x * it->second;
      }
      for (const auto &[g, x] : b) nb += x * x;
      if (na > 0.0 && nb > 0.0) out[i] += 10.0 * dot / (std::sqrt(na) * std::sqrt(nb)) / 4.0;
    }
  }
  return out;
}

Words RandomSentence(Rng &rng, std::size_t max_len, const std::vector<std::string> &vocab) {
  Words w;
  const std::size_t len = 1 + rng.Below(max_len);
  for (std::size_t i = 0; i < len; ++i) w.push_back(vocab[rng.Below(vocab.size())]);
  return w;
}

const std::vector<std::string> kVocab{"a", "b", "c", "d", "e", "f"};

}  // namespace

TEST_CASE("precision, recall and F1") {
  const auto r = Prf({1, 0, 0}, {1, 1, 0});
  CHECK(r.precision == 0.5);
  CHECK(r.recall == 1.0);
  CHECK(r.f1 == doctest::Approx(2.0 / 3.0).epsilon(1e-12));
  CHECK(r.tp == 1);
  CHECK(r.fp == 1);
  CHECK(r.fn == 0);
  const auto same = Prf({0, 1, 1}, {0, 1, 1});
  CHECK(same.f1 == 1.0);
  const auto none = Prf({0, 0}, {0, 0});
  CHECK(none.precision == 0.0);
  CHECK(none.recall == 0.0);
  CHECK(none.f1 == 0.0);
  CHECK_THROWS_AS(Prf({1}, {1, 0}), Error);
}

TEST_CASE("bleu examples") {
  const auto id = BleuCorpus({W("the cat sat on the mat"), W("a dog ran")},
                             {W("the cat sat on the mat"), W("a dog ran")}, 3);
  for (double b : id) CHECK(std::abs(b - 100.0) < 1e-9);
  CHECK(BleuCorpus({W("the the the")}, {W("the cat")}, 1)[0] ==
        doctest::Approx(100.0 / 3.0).epsilon(1e-12));
  CHECK(BleuCorpus({W("x y z")}, {W("a b c")}, 3) == std::vector<double>{0, 0, 0});
  CHECK_THROWS_AS(BleuCorpus({}, {}, 3), Error);
  CHECK_THROWS_AS(BleuCorpus({W("a")}, {}, 3), Error);
}

TEST_CASE("bleu matches a direct computation and is monotone in n") {
  Rng rng(1);
  for (int corpus = 0; corpus < 100; ++corpus) {
    std::vector<Words> c, r;
    const std::size_t n = 1 + rng.Below(8);
    for (std::size_t i = 0; i < n; ++i) {
      c.push_back(RandomSentence(rng, 9, kVocab));
      r.push_back(RandomSentence(rng, 9, kVocab));
    }
    const auto b = BleuCorpus(c, r, 3);
    for (int k = 1; k <= 3; ++k)
      CHECK(b[static_cast<std::size_t>(k - 1)] == doctest::Approx(OracleBleu(c, r, k)).epsilon(1e-12));
    CHECK(b[1] <= b[0] + 1e-12);
    CHECK(b[2] <= b[1] + 1e-12);
    // Joint permutation of the pairs leaves the score unchanged.
    std::reverse(c.begin(), c.end());
    std::reverse(r.begin(), r.end());
    const auto p = BleuCorpus(c, r, 3);
    for (int k = 0; k < 3; ++k) CHECK(p[static_cast<std::size_t>(k)] == doctest::Approx(b[static_cast<std::size_t>(k)]).epsilon(1e-12));
  }
}

TEST_CASE("rouge-l examples") {
  const auto same = RougeL(W("a b c"), W("a b c"));
  CHECK(same.p == 1.0);
  CHECK(same.r == 1.0);
  CHECK(same.f == doctest::Approx(1.0).epsilon(1e-15));
  const auto ex = RougeL(W("a b c d"), W("a c d"));
  CHECK(ex.p == 0.75);
  CHECK(ex.r == 1.0);
  CHECK(ex.f == doctest::Approx(0.8798).epsilon(1e-4));
  const double b2 = 1.44;
  CHECK(ex.f == doctest::Approx((1 + b2) * 0.75 / (1.0 + b2 * 0.75)).epsilon(1e-14));
  const auto dis = RougeL(W("a b"), W("c d"));
  CHECK(dis.f == 0.0);
  CHECK_THROWS_AS(RougeL({}, W("a")), Error);
  CHECK_THROWS_AS(RougeL(W("a"), {}), Error);
}

TEST_CASE("rouge-l agrees with a brute-force longest common subsequence") {
  Rng rng(2);
  for (int trial = 0; trial < 300; ++trial) {
    const Words c = RandomSentence(rng, 10, kVocab), r = RandomSentence(rng, 10, kVocab);
    const double L = static_cast<double>(BruteLcs(c, r));
    const auto s = RougeL(c, r, 1.0);
    CHECK(s.p == doctest::Approx(L / static_cast<double>(c.size())).epsilon(1e-14));
    CHECK(s.r == doctest::Approx(L / static_cast<double>(r.size())).epsilon(1e-14));
  }
}

TEST_CASE("rouge-n examples") {
  const auto same = RougeN(W("a b c"), W("a b c"), 2);
  CHECK(same.f == 1.0);
  const auto half = RougeN(W("a b"), W("a c"), 1);
  CHECK(half.p == 0.5);
  CHECK(half.r == 0.5);
  CHECK(half.f == 0.5);
  const auto none = RougeN(W("a"), W("a"), 2);
  CHECK(none.p == 0.0);
  CHECK(none.r == 0.0);
  CHECK(none.f == 0.0);
  CHECK_THROWS_AS(RougeN({}, W("a"), 1), Error);
  CHECK_THROWS_AS(RougeN(W("a"), W("a"), 3), Error);
}

TEST_CASE("cider examples") {
  const std::vector<Words> refs{W("peppa jumps in muddy puddles"), W("george eats a red apple")};
  const auto per = CiderPerPair(refs, refs);
  CHECK(per[0] == doctest::Approx(10.0).epsilon(1e-12));
  CHECK(per[1] == doctest::Approx(10.0).epsilon(1e-12));
  CHECK(CiderPerPair({W("zebra yak xylophone")}, {W("peppa jumps in muddy puddles")})[0] == 0.0);
  CHECK(Cider({W("peppa jumps")}, {W("peppa jumps")}) == 0.0);
  CHECK_THROWS_AS(Cider({}, {}), Error);
}

TEST_CASE("cider matches a direct computation") {
  Rng rng(3);
  for (int trial = 0; trial < 50; ++trial) {
    std::vector<Words> c, r;
    const std::size_t n = 2 + rng.Below(6);
    for (std::size_t i = 0; i < n; ++i) {
      c.push_back(RandomSentence(rng, 8, kVocab));
      r.push_back(RandomSentence(rng, 8, kVocab));
    }
    const auto got = CiderPerPair(c, r);
    const auto want = OracleCider(c, r);
    for (std::size_t i = 0; i < n; ++i) CHECK(got[i] == doctest::Approx(want[i]).epsilon(1e-12));
  }
}

TEST_CASE("porter stemmer reference words") {
  const std::vector<std::pair<std::string, std::string>> cases{
      {"caresses", "caress"}, {"ponies", "poni"},       {"cats", "cat"},
      {"feed", "feed"},       {"agreed", "agre"},       {"plastered", "plaster"},
      {"motoring", "motor"},  {"sing", "sing"},         {"hopping", "hop"},
      {"filing", "file"},     {"happy", "happi"},       {"relational", "relat"},
      {"conditional", "condit"}, {"generalization", "gener"}, {"hopefulness", "hope"},
      {"adjustable", "adjust"},  {"probate", "probat"}, {"controll", "control"},
      {"running", "run"},     {"run", "run"}};
  for (const auto &[word, stem] : cases) {
    INFO(word);
    CHECK(PorterStem(word) == stem);
  }
}

TEST_CASE("meteor-lite closed forms") {
  CHECK(MeteorLite(W("a b c d"), W("a b c d")) == doctest::Approx(0.9921875).epsilon(1e-15));
  CHECK(MeteorLite(W("a b"), W("c d")) == 0.0);
  const double fmean = 10.0 * 0.75 * 1.0 / (1.0 + 9.0 * 0.75);
  CHECK(MeteorLite(W("a b x c"), W("a b c")) ==
        doctest::Approx(fmean * (1.0 - 0.5 * std::pow(2.0 / 3.0, 3))).epsilon(1e-12));
  // Stem stage: one match, one chunk.
  const double stem = 10.0 * 1.0 * 1.0 / (1.0 + 9.0) * (1.0 - 0.5);
  CHECK(MeteorLite(W("running"), W("run")) == doctest::Approx(stem).epsilon(1e-15));
  CHECK_THROWS_AS(MeteorLite({}, W("a")), Error);
}

TEST_CASE("generation report") {
  const std::vector<std::string> gold{"Peppa jumps in puddles", "George eats red apples"};
  const GenReport same = EvaluateGeneration({"peppa jumps in puddles", "GEORGE eats red apples"}, gold);
  CHECK(std::abs(same.bleu1 - 100.0) < 1e-9);
  CHECK(std::abs(same.bleu3 - 100.0) < 1e-9);
  CHECK(same.rouge_l == doctest::Approx(100.0).epsilon(1e-12));
  CHECK(same.meteor == doctest::Approx(99.21875).epsilon(1e-12));
  CHECK(same.cider == doctest::Approx(10.0).epsilon(1e-12));
  const GenReport empty = EvaluateGeneration({"", ""}, gold);
  CHECK(empty.bleu1 == 0.0);
  CHECK(empty.rouge_l == 0.0);
  CHECK(empty.meteor == 0.0);
  CHECK(empty.cider == 0.0);
  CHECK(GenReportHeader() == "model\tBLEU-1\tBLEU-2\tBLEU-3\tROUGE-L\tMETEOR\tCIDEr");
  CHECK(GenReportRow("sys", same) == "sys\t100.00\t100.00\t100.00\t100.00\t99.22\t10.00");
  CHECK(TaggingReportHeader() == "model\tP\tR\tF1");
  CHECK_THROWS_AS(EvaluateGeneration({"a"}, gold), Error);
}

TEST_CASE("utf-8 safe truncation") {
  CHECK(TruncateUtf8("hello", 3) == "hel");
  const std::string s = "ab\xC3\xA9" "cd";  // "abécd"
  CHECK(TruncateUtf8(s, 3) == "ab");
  CHECK(TruncateUtf8(s, 4) == "ab\xC3\xA9");
  CHECK(TruncateUtf8("\xE2\x82\xAC", 2).empty());
}

TEST_CASE("narrations as summaries") {
  Corpus corpus;
  for (int e = 0; e < 3; ++e) {
    Episode ep = PatternEpisode("DDNNNDNN", "ep" + std::to_string(e));
    ep.plot_summary = NarrationSummary(ep, SummaryMode::kFull);
    corpus.episodes.push_back(ep);
  }
  corpus.episodes.push_back(PatternEpisode("DN", "nosummary"));
  const SummaryReport full = NarrationSummaryEval(corpus, SummaryMode::kFull);
  CHECK(full.episodes == 3);
  CHECK(full.rouge1.f == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(full.rouge2.f == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(full.rougel.f == doctest::Approx(1.0).epsilon(1e-15));

  Episode longer = PatternEpisode(std::string(60, 'N'), "long");
  CHECK(NarrationSummary(longer, SummaryMode::kFull).size() > 75);
  CHECK(NarrationSummary(longer, SummaryMode::kBytes75).size() <= 75);

  Corpus bare;
  bare.episodes.push_back(PatternEpisode("DN"));
  CHECK_THROWS_AS(NarrationSummaryEval(bare, SummaryMode::kFull), Error);
  CHECK(ParseSummaryMode(ToString(SummaryMode::kBytes75)) == SummaryMode::kBytes75);
}
