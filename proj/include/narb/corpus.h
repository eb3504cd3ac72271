// include/narb/corpus.h

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

#ifndef NARB_CORPUS_H_
#define NARB_CORPUS_H_

#include <array>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

namespace narb {

enum class Speaker { kDialogue, kNarrator };

/// One aligned element of a video: the word, who utters it, its time span
/// and one image and one audio vector taken at the middle of the token.
struct Token {
  std::string text;
  Speaker speaker = Speaker::kDialogue;
  std::int64_t start_ms = 0;
  std::int64_t end_ms = 0;
  std::vector<double> img;
  std::vector<double> aud;

  bool IsNarrator() const { return speaker == Speaker::kNarrator; }
};

struct Episode {
  std::string episode_id;
  std::string title;
  std::vector<Token> tokens;
  std::optional<std::string> plot_summary;
};

struct FeatureSpec {
  int d_img = 1;
  int d_aud = 1;
  int d_emb = 32;  // text embedding width; not stored in corpus files
};

struct Corpus {
  FeatureSpec spec;
  std::vector<Episode> episodes;

  const Episode *Find(const std::string &episode_id) const;
};

// ---------------------------------------------------------------------------
// Files

/// Reads a JSON Lines corpus (one episode per line). The feature spec is
/// taken from the first token and enforced on every other token. Throws
/// narb::Error naming the line, episode and token on any violation.
Corpus LoadCorpus(const std::string &path);

/// Writes the JSON Lines format read by LoadCorpus; doubles are printed in
/// shortest round-trip form so save/load/save is byte-stable.
void SaveCorpus(const Corpus &corpus, const std::string &path);

/// Throws if the episode breaks a corpus invariant (empty, empty token text,
/// start > end, decreasing start times, feature width != spec).
void ValidateEpisode(const Episode &episode, const FeatureSpec &spec);

// ---------------------------------------------------------------------------
// Segmentation and timing labels

enum class SegmentKind { kDialogue, kNarration };

/// Half-open token range [begin, end) of one maximal same-speaker run.
struct Segment {
  SegmentKind kind = SegmentKind::kDialogue;
  std::size_t begin = 0;
  std::size_t end = 0;

  std::size_t size() const { return end - begin; }
  bool operator==(const Segment &) const = default;
};

/// Dialogue/narration segmentation: a new segment starts at every point
/// where the speaker class changes.
std::vector<Segment> SegmentDN(const Episode &episode);

struct TimingLabelSeq {
  int window_n = 1;
  std::vector<int> labels;
};

/// Timing@n labels. labels[i] = 1 iff one of tokens i+1..i+n is a narrator
/// token; the window is truncated at the end of the episode, and narrator
/// tokens are labelled too.
TimingLabelSeq LabelTiming(const Episode &episode, int n);

/// Same rule over a bare speaker sequence (true = narrator).
std::vector<int> LabelTiming(const std::vector<bool> &is_narrator, int n);

// ---------------------------------------------------------------------------
// Narration instances

/// Preceding dialogue, the narration span and the following dialogue.
struct NarrationInstance {
  std::string id;  // "<episode_id>:<ordinal>"
  std::size_t episode_index = 0;
  std::vector<Token> prev_dialogue;
  std::vector<Token> narration;
  std::vector<Token> next_dialogue;

  std::vector<std::string> NarrationWords() const;
  std::vector<std::string> PrevWords() const;
};

/// One instance per narration segment; contexts are the adjacent dialogue
/// segments, empty when the narration opens or closes the episode.
std::vector<NarrationInstance> ExtractInstances(const Episode &episode,
                                                std::size_t episode_index = 0);

std::vector<NarrationInstance> ExtractInstances(const Corpus &corpus);

// ---------------------------------------------------------------------------
// Splits

enum class SplitLevel { kEpisode, kInstance };

std::string ToString(SplitLevel level);
SplitLevel ParseSplitLevel(const std::string &name);

struct SplitSpec {
  SplitLevel level = SplitLevel::kEpisode;
  std::uint64_t seed = 0;
  std::vector<std::string> train;
  std::vector<std::string> valid;
  std::vector<std::string> test;

  bool operator==(const SplitSpec &) const = default;
};

/// Partition sizes for n items: floor(ratio * n) each, then the leftover
/// items go one at a time to the largest fractional parts (ties to the
/// earlier split).
std::array<std::size_t, 3> SplitSizes(std::size_t n, const std::array<double, 3> &ratios);

/// Shuffles the ids with a seeded Fisher-Yates pass and cuts them into
/// train/valid/test. Each part keeps the corpus order of its members.
SplitSpec SplitIds(const std::vector<std::string> &ids,
                   const std::array<double, 3> &ratios, SplitLevel level,
                   std::uint64_t seed);

/// Episode ids (EPISODE level) or instance ids (INSTANCE level).
SplitSpec SplitCorpus(const Corpus &corpus, const std::array<double, 3> &ratios,
                      SplitLevel level, std::uint64_t seed);

void SaveSplit(const SplitSpec &split, const std::string &path);
SplitSpec LoadSplit(const std::string &path);

/// Episodes / instances of one part, in split order. Unknown ids throw.
std::vector<const Episode *> SelectEpisodes(const Corpus &corpus,
                                            const std::vector<std::string> &ids);
std::vector<NarrationInstance> SelectInstances(
    const std::vector<NarrationInstance> &all, const std::vector<std::string> &ids);

// ---------------------------------------------------------------------------
// Vocabulary

class Vocab {
 public:
  static constexpr int kPad = 0;
  static constexpr int kUnk = 1;
  static constexpr int kBos = 2;
  static constexpr int kEos = 3;
  static constexpr int kNumReserved = 4;

  Vocab();
  /// Adds the lowercased words, in sorted order, after the reserved symbols.
  explicit Vocab(const std::vector<std::string> &words);

  int Index(const std::string &word) const;  // UNK when absent
  const std::string &Word(int index) const;
  int size() const { return static_cast<int>(words_.size()); }
  const std::vector<std::string> &words() const { return words_; }

 private:
  std::vector<std::string> words_;
  std::unordered_map<std::string, int> index_;
};

/// Vocabulary of the training part of the split only.
Vocab BuildVocab(const Corpus &corpus, const SplitSpec &split);

// ---------------------------------------------------------------------------
// Statistics

struct Histogram {
  std::string name;
  std::string bin_label;
  std::map<std::string, std::size_t> bins;  // ordered for stable output

  std::size_t Total() const;
};

struct StatsReport {
  std::size_t episodes = 0;
  std::size_t narrations = 0;
  std::size_t dialogues = 0;
  double avg_dialogue_tokens = 0.0;
  double avg_narration_tokens = 0.0;
  double total_minutes = 0.0;
  std::size_t vocabulary = 0;
  std::size_t narration_vocabulary = 0;
  std::size_t narration_unique_vocabulary = 0;  // words heard only from the narrator
  std::vector<Histogram> histograms;
};

/// Number of sentences in a token run: tokens ending in . ! or ?, plus one
/// for a trailing unterminated fragment.
int CountSentences(const std::vector<Token> &tokens);

StatsReport CorpusStats(const Corpus &corpus);

/// "statistic\tvalue" table and one "<bin>\tcount" table per histogram.
std::string StatsTsv(const StatsReport &report);
std::string HistogramTsv(const Histogram &h);

/// Writes stats.tsv plus one hist_<name>.tsv per histogram into dir.
void WriteStats(const StatsReport &report, const std::string &dir);

}  // namespace narb

#endif  // NARB_CORPUS_H_
