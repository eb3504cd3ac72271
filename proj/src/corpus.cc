// src/corpus.cc

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

#include "narb/corpus.h"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <set>
#include <sstream>

#include "json.hpp"
#include "narb/common.h"
#include "narb/random.h"

namespace narb {

using ordered_json = nlohmann::ordered_json;

const Episode *Corpus::Find(const std::string &episode_id) const {
  for (const Episode &ep : episodes)
    if (ep.episode_id == episode_id) return &ep;
  return nullptr;
}

namespace {

std::vector<double> ReadVector(const nlohmann::json &tok, const char *key,
                               const std::string &where) {
  auto it = tok.find(key);
  if (it == tok.end())
    throw Error(where + ": missing field '" + key + "'");
  if (!it->is_array())
    throw Error(where + ": field '" + key + "' is not an array");
  std::vector<double> out;
  out.reserve(it->size());
  for (const auto &v : *it) {
    if (!v.is_number())
      throw Error(where + ": non-numeric entry in '" + key + "'");
    out.push_back(v.get<double>());
  }
  return out;
}

Episode ParseEpisode(const nlohmann::json &j, std::size_t line_no) {
  const std::string line = "line " + std::to_string(line_no);
  if (!j.is_object()) throw Error(line + ": episode is not a JSON object");
  Episode ep;
  auto get_string = [&](const char *key) -> std::string {
    auto it = j.find(key);
    if (it == j.end() || !it->is_string())
      throw Error(line + ": missing or non-string field '" + key + "'");
    return it->get<std::string>();
  };
  ep.episode_id = get_string("episode_id");
  ep.title = get_string("title");
  if (auto it = j.find("plot_summary"); it != j.end() && !it->is_null()) {
    if (!it->is_string())
      throw Error(line + ": plot_summary must be a string or null");
    ep.plot_summary = it->get<std::string>();
  }
  auto toks = j.find("tokens");
  if (toks == j.end() || !toks->is_array())
    throw Error(line + ": episode " + ep.episode_id + " has no token array");
  std::size_t index = 0;
  for (const auto &t : *toks) {
    const std::string where =
        line + ": episode " + ep.episode_id + " token " + std::to_string(index);
    if (!t.is_object()) throw Error(where + ": not an object");
    Token tok;
    auto text = t.find("t");
    if (text == t.end() || !text->is_string())
      throw Error(where + ": missing field 't'");
    tok.text = text->get<std::string>();
    auto spk = t.find("speaker");
    if (spk == t.end() || !spk->is_string())
      throw Error(where + ": missing field 'speaker'");
    const std::string s = spk->get<std::string>();
    if (s == "dialogue") {
      tok.speaker = Speaker::kDialogue;
    } else if (s == "narrator") {
      tok.speaker = Speaker::kNarrator;
    } else {
      throw Error(where + ": unknown speaker '" + s + "'");
    }
    for (const char *key : {"start_ms", "end_ms"}) {
      auto it = t.find(key);
      if (it == t.end() || !it->is_number_integer())
        throw Error(where + ": missing or non-integer field '" + key + "'");
    }
    tok.start_ms = t["start_ms"].get<std::int64_t>();
    tok.end_ms = t["end_ms"].get<std::int64_t>();
    tok.img = ReadVector(t, "img", where);
    tok.aud = ReadVector(t, "aud", where);
    ep.tokens.push_back(std::move(tok));
    ++index;
  }
  return ep;
}

ordered_json EpisodeToJson(const Episode &ep) {
  ordered_json j;
  j["episode_id"] = ep.episode_id;
  j["title"] = ep.title;
  j["plot_summary"] = ep.plot_summary ? ordered_json(*ep.plot_summary) : ordered_json(nullptr);
  ordered_json toks = ordered_json::array();
  for (const Token &t : ep.tokens) {
    ordered_json o;
    o["t"] = t.text;
    o["speaker"] = t.IsNarrator() ? "narrator" : "dialogue";
    o["start_ms"] = t.start_ms;
    o["end_ms"] = t.end_ms;
    o["img"] = t.img;
    o["aud"] = t.aud;
    toks.push_back(std::move(o));
  }
  j["tokens"] = std::move(toks);
  return j;
}

}  // namespace

void ValidateEpisode(const Episode &episode, const FeatureSpec &spec) {
  const std::string ep = "episode " + episode.episode_id;
  if (episode.tokens.empty()) throw Error(ep + ": no tokens");
  for (std::size_t i = 0; i < episode.tokens.size(); ++i) {
    const Token &t = episode.tokens[i];
    const std::string where = ep + " token " + std::to_string(i);
    if (t.text.empty()) throw Error(where + ": empty text");
    if (t.start_ms > t.end_ms) throw Error(where + ": start_ms > end_ms");
    if (i > 0 && t.start_ms < episode.tokens[i - 1].start_ms)
      throw Error(where + ": start_ms decreases");
    if (static_cast<int>(t.img.size()) != spec.d_img)
      throw Error(where + ": img has " + std::to_string(t.img.size()) +
                  " dims, expected " + std::to_string(spec.d_img));
    if (static_cast<int>(t.aud.size()) != spec.d_aud)
      throw Error(where + ": aud has " + std::to_string(t.aud.size()) +
                  " dims, expected " + std::to_string(spec.d_aud));
  }
}

Corpus LoadCorpus(const std::string &path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open corpus file " + path);
  Corpus corpus;
  bool have_spec = false;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    nlohmann::json j;
    try {
      j = nlohmann::json::parse(line);
    } catch (const nlohmann::json::parse_error &e) {
      throw Error(path + ": line " + std::to_string(line_no) + ": malformed JSON (" +
                  e.what() + ")");
    }
    Episode ep = ParseEpisode(j, line_no);
    if (!have_spec && !ep.tokens.empty()) {
      corpus.spec.d_img = static_cast<int>(ep.tokens.front().img.size());
      corpus.spec.d_aud = static_cast<int>(ep.tokens.front().aud.size());
      if (corpus.spec.d_img < 1 || corpus.spec.d_aud < 1)
        throw Error(path + ": line " + std::to_string(line_no) +
                    ": feature vectors must have at least one dimension");
      have_spec = true;
    }
    try {
      ValidateEpisode(ep, corpus.spec);
    } catch (const Error &e) {
      throw Error(path + ": line " + std::to_string(line_no) + ": " + e.what());
    }
    corpus.episodes.push_back(std::move(ep));
  }
  if (corpus.episodes.empty()) throw Error(path + ": corpus file is empty");
  return corpus;
}

void SaveCorpus(const Corpus &corpus, const std::string &path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot write corpus file " + path);
  for (const Episode &ep : corpus.episodes) out << EpisodeToJson(ep).dump() << '\n';
  if (!out) throw Error("write failed: " + path);
}

// ---------------------------------------------------------------------------

std::vector<Segment> SegmentDN(const Episode &episode) {
  std::vector<Segment> segs;
  const auto &toks = episode.tokens;
  std::size_t begin = 0;
  for (std::size_t i = 1; i <= toks.size(); ++i) {
    if (i == toks.size() || toks[i].speaker != toks[begin].speaker) {
      segs.push_back({toks[begin].IsNarrator() ? SegmentKind::kNarration : SegmentKind::kDialogue,
                      begin, i});
      begin = i;
    }
  }
  return segs;
}

std::vector<int> LabelTiming(const std::vector<bool> &is_narrator, int n) {
  if (n < 1) throw Error("timing window must be >= 1");
  const std::size_t len = is_narrator.size();
  std::vector<int> labels(len, 0);
  // next_narr = smallest narrator index > i, scanned right to left.
  std::size_t next_narr = len;
  for (std::size_t k = len; k-- > 0;) {
    labels[k] = next_narr < len && next_narr - k <= static_cast<std::size_t>(n);
    if (is_narrator[k]) next_narr = k;
  }
  return labels;
}

TimingLabelSeq LabelTiming(const Episode &episode, int n) {
  std::vector<bool> narr;
  narr.reserve(episode.tokens.size());
  for (const Token &t : episode.tokens) narr.push_back(t.IsNarrator());
  return {n, LabelTiming(narr, n)};
}

// ---------------------------------------------------------------------------

namespace {

std::vector<std::string> Words(const std::vector<Token> &toks) {
  std::vector<std::string> out;
  out.reserve(toks.size());
  for (const Token &t : toks) out.push_back(ToLower(t.text));
  return out;
}

}  // namespace

std::vector<std::string> NarrationInstance::NarrationWords() const { return Words(narration); }
std::vector<std::string> NarrationInstance::PrevWords() const { return Words(prev_dialogue); }

std::vector<NarrationInstance> ExtractInstances(const Episode &episode,
                                                std::size_t episode_index) {
  const auto segs = SegmentDN(episode);
  const auto &toks = episode.tokens;
  auto slice = [&](const Segment &s) {
    return std::vector<Token>(toks.begin() + static_cast<std::ptrdiff_t>(s.begin),
                              toks.begin() + static_cast<std::ptrdiff_t>(s.end));
  };
  std::vector<NarrationInstance> out;
  for (std::size_t k = 0; k < segs.size(); ++k) {
    if (segs[k].kind != SegmentKind::kNarration) continue;
    NarrationInstance inst;
    inst.id = episode.episode_id + ":" + std::to_string(out.size());
    inst.episode_index = episode_index;
    // Segments alternate, so the neighbours of a narration are dialogue.
    if (k > 0) inst.prev_dialogue = slice(segs[k - 1]);
    inst.narration = slice(segs[k]);
    if (k + 1 < segs.size()) inst.next_dialogue = slice(segs[k + 1]);
    out.push_back(std::move(inst));
  }
  return out;
}

std::vector<NarrationInstance> ExtractInstances(const Corpus &corpus) {
  std::vector<NarrationInstance> out;
  for (std::size_t e = 0; e < corpus.episodes.size(); ++e) {
    auto part = ExtractInstances(corpus.episodes[e], e);
    std::move(part.begin(), part.end(), std::back_inserter(out));
  }
  return out;
}

// ---------------------------------------------------------------------------

std::string ToString(SplitLevel level) {
  return level == SplitLevel::kEpisode ? "episode" : "instance";
}

SplitLevel ParseSplitLevel(const std::string &name) {
  if (name == "episode") return SplitLevel::kEpisode;
  if (name == "instance") return SplitLevel::kInstance;
  throw Error("unknown split level '" + name + "' (expected episode or instance)");
}

std::array<std::size_t, 3> SplitSizes(std::size_t n, const std::array<double, 3> &ratios) {
  double sum = 0.0;
  for (double r : ratios) {
    if (r < 0.0) throw Error("split ratios must be non-negative");
    sum += r;
  }
  if (std::fabs(sum - 1.0) > 1e-9) throw Error("split ratios must sum to 1");
  std::array<std::size_t, 3> sizes{};
  std::array<double, 3> frac{};
  std::size_t used = 0;
  for (int i = 0; i < 3; ++i) {
    const double exact = ratios[i] * static_cast<double>(n);
    // Guard 0.7*10 = 6.999.. style rounding before flooring.
    const double fl = std::floor(exact + 1e-9);
    sizes[i] = static_cast<std::size_t>(fl);
    frac[i] = std::max(0.0, exact - fl);
    used += sizes[i];
  }
  std::array<int, 3> order{0, 1, 2};
  std::stable_sort(order.begin(), order.end(),
                   [&](int a, int b) { return frac[a] > frac[b]; });
  for (std::size_t k = 0; used < n; ++k, ++used) ++sizes[order[k % 3]];
  for (std::size_t s : sizes)
    if (s == 0)
      throw Error("too few items (" + std::to_string(n) +
                  ") to give every split at least one");
  return sizes;
}

SplitSpec SplitIds(const std::vector<std::string> &ids, const std::array<double, 3> &ratios,
                   SplitLevel level, std::uint64_t seed) {
  const auto sizes = SplitSizes(ids.size(), ratios);
  std::vector<std::size_t> perm(ids.size());
  for (std::size_t i = 0; i < perm.size(); ++i) perm[i] = i;
  Rng rng(seed);
  for (std::size_t i = perm.size(); i > 1; --i) std::swap(perm[i - 1], perm[rng.Below(i)]);

  SplitSpec spec;
  spec.level = level;
  spec.seed = seed;
  std::array<std::vector<std::size_t>, 3> parts;
  std::size_t pos = 0;
  for (int p = 0; p < 3; ++p) {
    parts[p].assign(perm.begin() + static_cast<std::ptrdiff_t>(pos),
                    perm.begin() + static_cast<std::ptrdiff_t>(pos + sizes[p]));
    std::sort(parts[p].begin(), parts[p].end());
    pos += sizes[p];
  }
  for (std::size_t i : parts[0]) spec.train.push_back(ids[i]);
  for (std::size_t i : parts[1]) spec.valid.push_back(ids[i]);
  for (std::size_t i : parts[2]) spec.test.push_back(ids[i]);
  return spec;
}

SplitSpec SplitCorpus(const Corpus &corpus, const std::array<double, 3> &ratios,
                      SplitLevel level, std::uint64_t seed) {
  std::vector<std::string> ids;
  if (level == SplitLevel::kEpisode) {
    for (const Episode &ep : corpus.episodes) ids.push_back(ep.episode_id);
  } else {
    for (const auto &inst : ExtractInstances(corpus)) ids.push_back(inst.id);
  }
  return SplitIds(ids, ratios, level, seed);
}

void SaveSplit(const SplitSpec &split, const std::string &path) {
  ordered_json j;
  j["level"] = ToString(split.level);
  j["seed"] = split.seed;
  j["train"] = split.train;
  j["valid"] = split.valid;
  j["test"] = split.test;
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot write split file " + path);
  out << j.dump(2) << '\n';
}

SplitSpec LoadSplit(const std::string &path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open split file " + path);
  SplitSpec spec;
  try {
    nlohmann::json j = nlohmann::json::parse(in);
    spec.level = ParseSplitLevel(j.at("level").get<std::string>());
    spec.seed = j.at("seed").get<std::uint64_t>();
    spec.train = j.at("train").get<std::vector<std::string>>();
    spec.valid = j.at("valid").get<std::vector<std::string>>();
    spec.test = j.at("test").get<std::vector<std::string>>();
  } catch (const nlohmann::json::exception &e) {
    throw Error(path + ": bad split file (" + e.what() + ")");
  }
  std::set<std::string> seen;
  for (const auto *part : {&spec.train, &spec.valid, &spec.test})
    for (const auto &id : *part)
      if (!seen.insert(id).second) throw Error(path + ": id '" + id + "' appears twice");
  return spec;
}

std::vector<const Episode *> SelectEpisodes(const Corpus &corpus,
                                            const std::vector<std::string> &ids) {
  std::unordered_map<std::string, const Episode *> by_id;
  for (const Episode &ep : corpus.episodes) by_id[ep.episode_id] = &ep;
  std::vector<const Episode *> out;
  for (const auto &id : ids) {
    auto it = by_id.find(id);
    if (it == by_id.end()) throw Error("split names unknown episode '" + id + "'");
    out.push_back(it->second);
  }
  return out;
}

std::vector<NarrationInstance> SelectInstances(const std::vector<NarrationInstance> &all,
                                               const std::vector<std::string> &ids) {
  std::unordered_map<std::string, const NarrationInstance *> by_id;
  for (const auto &inst : all) by_id[inst.id] = &inst;
  std::vector<NarrationInstance> out;
  for (const auto &id : ids) {
    auto it = by_id.find(id);
    if (it == by_id.end()) throw Error("split names unknown instance '" + id + "'");
    out.push_back(*it->second);
  }
  return out;
}

// ---------------------------------------------------------------------------

Vocab::Vocab() : words_{"<pad>", "<unk>", "<s>", "</s>"} {
  for (int i = 0; i < kNumReserved; ++i) index_[words_[i]] = i;
}

Vocab::Vocab(const std::vector<std::string> &words) : Vocab() {
  std::set<std::string> uniq;
  for (const auto &w : words) uniq.insert(ToLower(w));
  for (const auto &w : uniq) {
    if (index_.count(w)) continue;
    index_[w] = static_cast<int>(words_.size());
    words_.push_back(w);
  }
}

int Vocab::Index(const std::string &word) const {
  auto it = index_.find(ToLower(word));
  return it == index_.end() ? kUnk : it->second;
}

const std::string &Vocab::Word(int index) const {
  if (index < 0 || index >= size()) throw Error("vocabulary index out of range");
  return words_[static_cast<std::size_t>(index)];
}

Vocab BuildVocab(const Corpus &corpus, const SplitSpec &split) {
  if (split.train.empty()) throw Error("cannot build a vocabulary from an empty training split");
  std::vector<std::string> words;
  auto add = [&](const std::vector<Token> &toks) {
    for (const Token &t : toks) words.push_back(t.text);
  };
  if (split.level == SplitLevel::kEpisode) {
    for (const Episode *ep : SelectEpisodes(corpus, split.train)) add(ep->tokens);
  } else {
    for (const auto &inst : SelectInstances(ExtractInstances(corpus), split.train)) {
      add(inst.prev_dialogue);
      add(inst.narration);
      add(inst.next_dialogue);
    }
  }
  return Vocab(words);
}

// ---------------------------------------------------------------------------

std::size_t Histogram::Total() const {
  std::size_t n = 0;
  for (const auto &[bin, count] : bins) n += count;
  return n;
}

int CountSentences(const std::vector<Token> &tokens) {
  int n = 0;
  bool open = false;
  for (const Token &t : tokens) {
    const char last = t.text.empty() ? '\0' : t.text.back();
    if (last == '.' || last == '!' || last == '?') {
      ++n;
      open = false;
    } else {
      open = true;
    }
  }
  return n + (open ? 1 : 0);
}

namespace {

std::string PadBin(std::size_t v, int width = 3) {
  std::string s = std::to_string(v);
  if (static_cast<int>(s.size()) < width) s.insert(0, static_cast<std::size_t>(width) - s.size(), '0');
  return s;
}

std::string FormatFixed(double v, int prec) {
  std::ostringstream os;
  os.setf(std::ios::fixed);
  os.precision(prec);
  os << v;
  return os.str();
}

}  // namespace

StatsReport CorpusStats(const Corpus &corpus) {
  if (corpus.episodes.empty()) throw Error("statistics need a non-empty corpus");
  StatsReport r;
  r.episodes = corpus.episodes.size();
  Histogram sentences{"narration_sentences", "sentences", {}};
  Histogram lengths{"narration_tokens", "tokens", {}};
  Histogram per_episode{"narrations_per_episode", "narrations", {}};
  Histogram start{"narration_start_position", "relative_start", {}};
  std::set<std::string> vocab, narr_vocab, dial_vocab;
  std::size_t dial_tokens = 0, narr_tokens = 0;
  std::int64_t total_ms = 0;
  for (const Episode &ep : corpus.episodes) {
    const std::int64_t t0 = ep.tokens.front().start_ms;
    std::int64_t t1 = t0;
    for (const Token &t : ep.tokens) {
      t1 = std::max(t1, t.end_ms);
      const std::string w = ToLower(t.text);
      vocab.insert(w);
      (t.IsNarrator() ? narr_vocab : dial_vocab).insert(w);
    }
    total_ms += t1 - t0;
    std::size_t count = 0;
    for (const Segment &s : SegmentDN(ep)) {
      if (s.kind == SegmentKind::kDialogue) {
        ++r.dialogues;
        dial_tokens += s.size();
        continue;
      }
      ++count;
      narr_tokens += s.size();
      std::vector<Token> span(ep.tokens.begin() + static_cast<std::ptrdiff_t>(s.begin),
                              ep.tokens.begin() + static_cast<std::ptrdiff_t>(s.end));
      ++sentences.bins[PadBin(static_cast<std::size_t>(CountSentences(span)))];
      ++lengths.bins[PadBin(s.size())];
      const double rel = t1 > t0 ? static_cast<double>(ep.tokens[s.begin].start_ms - t0) /
                                       static_cast<double>(t1 - t0)
                                 : 0.0;
      const int decile = std::min(9, static_cast<int>(rel * 10.0));
      ++start.bins[FormatFixed(decile / 10.0, 1) + "-" + FormatFixed((decile + 1) / 10.0, 1)];
    }
    r.narrations += count;
    ++per_episode.bins[PadBin(count)];
  }
  r.avg_dialogue_tokens = r.dialogues ? static_cast<double>(dial_tokens) / static_cast<double>(r.dialogues) : 0.0;
  r.avg_narration_tokens = r.narrations ? static_cast<double>(narr_tokens) / static_cast<double>(r.narrations) : 0.0;
  r.total_minutes = static_cast<double>(total_ms) / 60000.0;
  r.vocabulary = vocab.size();
  r.narration_vocabulary = narr_vocab.size();
  for (const auto &w : narr_vocab)
    if (!dial_vocab.count(w)) ++r.narration_unique_vocabulary;
  r.histograms = {sentences, lengths, per_episode, start};
  return r;
}

std::string StatsTsv(const StatsReport &r) {
  std::ostringstream out;
  out << "statistic\tvalue\n"
      << "episodes\t" << r.episodes << '\n'
      << "total_minutes\t" << FormatFixed(r.total_minutes, 2) << '\n'
      << "narrations\t" << r.narrations << '\n'
      << "dialogues\t" << r.dialogues << '\n'
      << "dialogue_length_avg_tokens\t" << FormatFixed(r.avg_dialogue_tokens, 2) << '\n'
      << "narration_length_avg_tokens\t" << FormatFixed(r.avg_narration_tokens, 2) << '\n'
      << "vocabulary\t" << r.vocabulary << '\n'
      << "narration_vocabulary\t" << r.narration_vocabulary << '\n'
      << "narration_unique_vocabulary\t" << r.narration_unique_vocabulary << '\n';
  return out.str();
}

std::string HistogramTsv(const Histogram &h) {
  std::ostringstream out;
  out << h.bin_label << "\tcount\n";
  for (const auto &[bin, count] : h.bins) out << bin << '\t' << count << '\n';
  return out.str();
}

void WriteStats(const StatsReport &r, const std::string &dir) {
  std::filesystem::create_directories(dir);
  auto write = [&](const std::string &name, const std::string &text) {
    const auto path = std::filesystem::path(dir) / name;
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error("cannot write " + path.string());
    out << text;
  };
  write("stats.tsv", StatsTsv(r));
  for (const Histogram &h : r.histograms) write("hist_" + h.name + ".tsv", HistogramTsv(h));
}

}  // namespace narb
