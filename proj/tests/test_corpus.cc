// tests/test_corpus.cc

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

#include <filesystem>
#include <fstream>
#include <set>
#include <sstream>

#include "doctest.h"
#include "fixtures.h"
#include "narb/corpus.h"
#include "narb/syngen.h"

using namespace narb;
using narb::testing::WorkedEpisode;
using narb::testing::PatternEpisode;

namespace {

std::string TempPath(const std::string &name) {
  return (std::filesystem::temp_directory_path() / ("narb_test_" + name)).string();
}

std::string Slurp(const std::string &path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

void WriteFile(const std::string &path, const std::string &text) {
  std::ofstream out(path, std::ios::binary);
  out << text;
}

// Brute-force reading of the labelling rule, kept independent of the library.
std::vector<int> BruteLabels(const std::vector<bool> &narr, int n) {
  std::vector<int> out(narr.size(), 0);
  for (std::size_t i = 0; i < narr.size(); ++i)
    for (std::size_t j = i + 1; j < narr.size() && j <= i + static_cast<std::size_t>(n); ++j)
      if (narr[j]) out[i] = 1;
  return out;
}

Corpus SmallCorpus(int episodes = 6, double rate = 0.7, std::uint64_t seed = 5) {
  GenConfig cfg = GenConfig::Defaults();
  cfg.n_episodes = episodes;
  cfg.scenes_per_episode = 4;
  cfg.narration_rate = rate;
  cfg.seed = seed;
  return GenerateCorpus(cfg);
}

}  // namespace

TEST_CASE("load_corpus parses a two-episode file") {
  const std::string path = TempPath("two.jsonl");
  WriteFile(path,
            R"({"episode_id":"a","title":"A","plot_summary":null,"tokens":[{"t":"Hi","speaker":"dialogue","start_ms":0,"end_ms":10,"img":[1,2,3],"aud":[0.5]}]})"
            "\n"
            R"({"episode_id":"b","title":"B","plot_summary":"x","tokens":[{"t":"Yo","speaker":"narrator","start_ms":5,"end_ms":9,"img":[0,0,1],"aud":[1]}]})"
            "\n");
  const Corpus c = LoadCorpus(path);
  CHECK(c.episodes.size() == 2);
  CHECK(c.spec.d_img == 3);
  CHECK(c.spec.d_aud == 1);
  CHECK(c.episodes[1].tokens[0].IsNarrator());
  CHECK(*c.episodes[1].plot_summary == "x");
  CHECK_FALSE(c.episodes[0].plot_summary.has_value());
}

TEST_CASE("load_corpus names the episode and token of a missing field") {
  const std::string path = TempPath("missing.jsonl");
  WriteFile(path,
            R"({"episode_id":"e7","title":"","plot_summary":null,"tokens":[{"t":"a","speaker":"dialogue","start_ms":0,"end_ms":1,"img":[1],"aud":[1]},{"t":"b","speaker":"dialogue","start_ms":1,"end_ms":2,"img":[1]}]})"
            "\n");
  try {
    LoadCorpus(path);
    FAIL("expected an error");
  } catch (const Error &e) {
    const std::string msg = e.what();
    CHECK(msg.find("e7") != std::string::npos);
    CHECK(msg.find("token 1") != std::string::npos);
    CHECK(msg.find("aud") != std::string::npos);
  }
}

TEST_CASE("load_corpus rejects malformed lines, dimension changes and empty files") {
  const std::string path = TempPath("bad.jsonl");
  WriteFile(path, "{not json\n");
  CHECK_THROWS_WITH_AS(LoadCorpus(path), doctest::Contains("line 1"), Error);
  WriteFile(path,
            R"({"episode_id":"a","title":"","plot_summary":null,"tokens":[{"t":"a","speaker":"dialogue","start_ms":0,"end_ms":1,"img":[1,2],"aud":[1]}]})"
            "\n"
            R"({"episode_id":"b","title":"","plot_summary":null,"tokens":[{"t":"a","speaker":"dialogue","start_ms":0,"end_ms":1,"img":[1],"aud":[1]}]})"
            "\n");
  CHECK_THROWS_WITH_AS(LoadCorpus(path), doctest::Contains("line 2"), Error);
  WriteFile(path, "");
  CHECK_THROWS_AS(LoadCorpus(path), Error);
  CHECK_THROWS_AS(LoadCorpus(TempPath("does_not_exist.jsonl")), Error);
}

TEST_CASE("synthetic corpus round-trips save -> load -> save byte for byte") {
  GenConfig cfg = GenConfig::Defaults();
  cfg.seed = 3;
  const Corpus c = GenerateCorpus(cfg);
  const std::string a = TempPath("rt_a.jsonl"), b = TempPath("rt_b.jsonl");
  SaveCorpus(c, a);
  const Corpus back = LoadCorpus(a);
  SaveCorpus(back, b);
  CHECK(Slurp(a) == Slurp(b));
  REQUIRE(back.episodes.size() == 50);
  CHECK(back.episodes[7].tokens[3].img == c.episodes[7].tokens[3].img);
}

TEST_CASE("segment_dn splits at every speaker change") {
  const auto segs = SegmentDN(PatternEpisode("DDNND"));
  REQUIRE(segs.size() == 3);
  CHECK(segs[0] == Segment{SegmentKind::kDialogue, 0, 2});
  CHECK(segs[1] == Segment{SegmentKind::kNarration, 2, 4});
  CHECK(segs[2] == Segment{SegmentKind::kDialogue, 4, 5});
  CHECK(SegmentDN(PatternEpisode("DDDD")).size() == 1);
  const auto worked = SegmentDN(WorkedEpisode());
  REQUIRE(worked.size() == 2);
  CHECK(worked[0].end == 12);
  CHECK(WorkedEpisode().tokens[worked[0].end - 1].text == "boots.");
}

TEST_CASE("segments tile every synthetic episode") {
  for (const Episode &ep : SmallCorpus(10).episodes) {
    std::size_t at = 0;
    SegmentKind prev = SegmentKind::kDialogue;
    bool first = true;
    for (const Segment &s : SegmentDN(ep)) {
      CHECK(s.begin == at);
      CHECK(s.end > s.begin);
      if (!first) CHECK(s.kind != prev);
      for (std::size_t i = s.begin; i < s.end; ++i)
        CHECK(ep.tokens[i].IsNarrator() == (s.kind == SegmentKind::kNarration));
      at = s.end;
      prev = s.kind;
      first = false;
    }
    CHECK(at == ep.tokens.size());
  }
}

TEST_CASE("timing labels reproduce the worked example") {
  const Episode ep = WorkedEpisode();
  const auto t1 = LabelTiming(ep, 1).labels;
  const auto t5 = LabelTiming(ep, 5).labels;
  // Visible columns: puddles, you must wear your boots. Peppa ... brother, George.
  const std::vector<std::size_t> cols = {6, 7, 8, 9, 10, 11, 12, 19, 20};
  const std::vector<int> want1 = {0, 0, 0, 0, 0, 1, 1, 1, 0};
  const std::vector<int> want5 = {0, 1, 1, 1, 1, 1, 1, 1, 0};
  for (std::size_t k = 0; k < cols.size(); ++k) {
    CHECK(t1[cols[k]] == want1[k]);
    CHECK(t5[cols[k]] == want5[k]);
  }
  CHECK(LabelTiming(ep, 1).window_n == 1);
}

TEST_CASE("timing labels agree with a brute-force window scan") {
  Rng rng(17);
  for (int trial = 0; trial < 1000; ++trial) {
    std::vector<bool> narr(1 + rng.Below(30));
    for (std::size_t i = 0; i < narr.size(); ++i) narr[i] = rng.Bernoulli(0.3);
    const int n = 1 + static_cast<int>(rng.Below(8));
    CHECK(LabelTiming(narr, n) == BruteLabels(narr, n));
  }
}

TEST_CASE("timing labels: all-dialogue zeros, last-token law, monotone in n") {
  for (int n : {1, 3, 5}) {
    for (int v : LabelTiming(PatternEpisode("DDDDDD"), n).labels) CHECK(v == 0);
  }
  for (const Episode &ep : SmallCorpus(8).episodes) {
    std::vector<int> prev;
    for (int n = 1; n <= 6; ++n) {
      const auto cur = LabelTiming(ep, n).labels;
      CHECK(cur.size() == ep.tokens.size());
      CHECK(cur.back() == 0);
      if (!prev.empty())
        for (std::size_t i = 0; i < cur.size(); ++i) CHECK(prev[i] <= cur[i]);
      prev = cur;
    }
  }
  CHECK_THROWS_AS(LabelTiming(PatternEpisode("DN"), 0), Error);
}

TEST_CASE("extract_instances: contexts and boundary cases") {
  auto dnd = ExtractInstances(PatternEpisode("DDNDD"));
  REQUIRE(dnd.size() == 1);
  CHECK(dnd[0].prev_dialogue.size() == 2);
  CHECK(dnd[0].narration.size() == 1);
  CHECK(dnd[0].next_dialogue.size() == 2);

  auto ndn = ExtractInstances(PatternEpisode("NDDN", "e"));
  REQUIRE(ndn.size() == 2);
  CHECK(ndn[0].prev_dialogue.empty());
  CHECK(ndn[0].next_dialogue.size() == 2);
  CHECK(ndn[1].prev_dialogue.size() == 2);
  CHECK(ndn[1].next_dialogue.empty());
  CHECK(ndn[0].id == "e:0");
  CHECK(ndn[1].id == "e:1");
}

TEST_CASE("instance count equals narration segment count and tokens are preserved") {
  const Corpus c = SmallCorpus(12);
  std::size_t segments = 0;
  for (const Episode &ep : c.episodes)
    for (const Segment &s : SegmentDN(ep)) segments += s.kind == SegmentKind::kNarration;
  const auto all = ExtractInstances(c);
  CHECK(all.size() == segments);
  for (const auto &inst : all) {
    CHECK_FALSE(inst.narration.empty());
    for (const Token &t : inst.narration) CHECK(t.IsNarrator());
    for (const Token &t : inst.prev_dialogue) CHECK_FALSE(t.IsNarrator());
    for (const Token &t : inst.next_dialogue) CHECK_FALSE(t.IsNarrator());
  }
}

TEST_CASE("split sizes: floor then distribute") {
  CHECK(SplitSizes(209, {0.8, 0.1, 0.1}) == std::array<std::size_t, 3>{167, 21, 21});
  CHECK(SplitSizes(10, {0.8, 0.1, 0.1}) == std::array<std::size_t, 3>{8, 1, 1});
  // Brute-force check of the counting rule over many sizes.
  for (std::size_t n = 10; n < 400; ++n) {
    const auto s = SplitSizes(n, {0.8, 0.1, 0.1});
    CHECK(s[0] + s[1] + s[2] == n);
    for (int k = 0; k < 3; ++k) {
      const double exact = (k == 0 ? 0.8 : 0.1) * static_cast<double>(n);
      CHECK(std::abs(static_cast<double>(s[static_cast<std::size_t>(k)]) - exact) < 1.0 + 1e-9);
    }
  }
  CHECK_THROWS_AS(SplitSizes(10, {0.5, 0.1, 0.1}), Error);
  CHECK_THROWS_AS(SplitSizes(3, {0.8, 0.1, 0.1}), Error);
}

TEST_CASE("splits are deterministic partitions") {
  std::vector<std::string> ids;
  for (int i = 0; i < 10; ++i) ids.push_back("ep" + std::to_string(i));
  const SplitSpec a = SplitIds(ids, {0.8, 0.1, 0.1}, SplitLevel::kEpisode, 7);
  const SplitSpec b = SplitIds(ids, {0.8, 0.1, 0.1}, SplitLevel::kEpisode, 7);
  CHECK(a == b);
  CHECK(a.train.size() == 8);
  CHECK(a.valid.size() == 1);
  CHECK(a.test.size() == 1);
  std::multiset<std::string> all(a.train.begin(), a.train.end());
  all.insert(a.valid.begin(), a.valid.end());
  all.insert(a.test.begin(), a.test.end());
  CHECK(all == std::multiset<std::string>(ids.begin(), ids.end()));
  CHECK_FALSE(SplitIds(ids, {0.8, 0.1, 0.1}, SplitLevel::kEpisode, 8) == a);
  CHECK_THROWS_AS(SplitIds({"a", "b"}, {0.8, 0.1, 0.1}, SplitLevel::kEpisode, 1), Error);
}

TEST_CASE("split files round-trip") {
  const Corpus c = SmallCorpus(10);
  const SplitSpec s = SplitCorpus(c, {0.8, 0.1, 0.1}, SplitLevel::kInstance, 4);
  const std::string path = TempPath("split.json");
  SaveSplit(s, path);
  CHECK(LoadSplit(path) == s);
  CHECK(s.level == SplitLevel::kInstance);
  const auto train = SelectInstances(ExtractInstances(c), s.train);
  CHECK(train.size() == s.train.size());
  CHECK_THROWS_AS(SelectEpisodes(c, {"nope"}), Error);
}

TEST_CASE("vocabulary comes from the training part only") {
  Corpus c;
  Episode a = PatternEpisode("DD", "a");
  a.tokens[0].text = "A";
  a.tokens[1].text = "b";
  Episode a2 = PatternEpisode("D", "a2");
  a2.tokens[0].text = "a";
  Episode t = PatternEpisode("D", "t");
  t.tokens[0].text = "zebra";
  c.episodes = {a, a2, t};
  SplitSpec s;
  s.train = {"a", "a2"};
  s.test = {"t"};
  const Vocab v = BuildVocab(c, s);
  CHECK(v.size() == 6);
  CHECK(v.Index("a") >= Vocab::kNumReserved);
  CHECK(v.Index("zebra") == Vocab::kUnk);
  CHECK(v.Word(Vocab::kEos) != v.Word(Vocab::kBos));

  const Corpus syn = SmallCorpus(10);
  const SplitSpec all = SplitCorpus(syn, {0.8, 0.1, 0.1}, SplitLevel::kEpisode, 1);
  std::set<std::string> distinct;
  for (const Episode *ep : SelectEpisodes(syn, all.train))
    for (const Token &tok : ep->tokens) distinct.insert(ToLower(tok.text));
  CHECK(BuildVocab(syn, all).size() == static_cast<int>(distinct.size()) + 4);
  CHECK_THROWS_AS(BuildVocab(syn, SplitSpec{}), Error);
}

TEST_CASE("corpus statistics") {
  Corpus c;
  for (int e = 0; e < 3; ++e) {
    Episode ep = PatternEpisode("DDDNNNNNNNNNND", "e" + std::to_string(e));
    c.episodes.push_back(ep);
  }
  const StatsReport r = CorpusStats(c);
  CHECK(r.episodes == 3);
  CHECK(r.narrations == 3);
  CHECK(r.avg_narration_tokens == doctest::Approx(10.0));

  const Corpus syn = SmallCorpus(20);
  const StatsReport s = CorpusStats(syn);
  for (const Histogram &h : s.histograms) {
    if (h.name == "narrations_per_episode") {
      CHECK(h.Total() == s.episodes);
    } else {
      CHECK(h.Total() == s.narrations);
    }
  }
  CHECK(s.narration_unique_vocabulary <= s.narration_vocabulary);
  const std::string dir = TempPath("stats_dir");
  WriteStats(s, dir);
  CHECK(std::filesystem::exists(std::filesystem::path(dir) / "stats.tsv"));
  CHECK(std::filesystem::exists(std::filesystem::path(dir) / "hist_narration_tokens.tsv"));
}

TEST_CASE("sentence counting uses terminal punctuation") {
  std::vector<Token> toks;
  for (const char *w : {"Hello", "there.", "How", "are", "you?", "Fine"})
    toks.push_back(narb::testing::MakeToken(w, true));
  CHECK(CountSentences(toks) == 3);
  toks.pop_back();
  CHECK(CountSentences(toks) == 2);
}
