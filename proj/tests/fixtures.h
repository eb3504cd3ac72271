// tests/fixtures.h

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

#ifndef NARB_TESTS_FIXTURES_H_
#define NARB_TESTS_FIXTURES_H_

#include <string>
#include <vector>

#include "narb/common.h"
#include "narb/corpus.h"
#include "narb/random.h"

namespace narb::testing {

inline Token MakeToken(const std::string &text, bool narrator, std::int64_t t = 0, int d_img = 2,
                       int d_aud = 2) {
  Token tok;
  tok.text = text;
  tok.speaker = narrator ? Speaker::kNarrator : Speaker::kDialogue;
  tok.start_ms = t;
  tok.end_ms = t + 300;
  tok.img.assign(static_cast<std::size_t>(d_img), 0.0);
  tok.aud.assign(static_cast<std::size_t>(d_aud), 0.0);
  return tok;
}

/// Episode from a speaker pattern such as "DDNND"; token texts are w0, w1, ...
inline Episode PatternEpisode(const std::string &pattern, const std::string &id = "ep") {
  Episode ep;
  ep.episode_id = id;
  ep.title = id;
  for (std::size_t i = 0; i < pattern.size(); ++i)
    ep.tokens.push_back(MakeToken("w" + std::to_string(i), pattern[i] == 'N',
                                  static_cast<std::int64_t>(i) * 300));
  return ep;
}

/// The worked timing-label example: one dialogue line followed by a narration.
inline Episode WorkedEpisode() {
  Episode ep;
  ep.episode_id = "worked";
  std::int64_t t = 0;
  for (const auto &w : std::vector<std::string>{"George,", "if", "you", "jump", "in", "muddy",
                                                "puddles,", "you", "must", "wear", "your",
                                                "boots."})
    ep.tokens.push_back(MakeToken(w, false, t += 300));
  for (const auto &w : std::vector<std::string>{"Peppa", "likes", "to", "look", "after", "her",
                                                "little", "brother,", "George."})
    ep.tokens.push_back(MakeToken(w, true, t += 300));
  return ep;
}

inline std::vector<Token> RandomTokens(Rng &rng, const std::vector<std::string> &words,
                                       std::size_t n, bool narrator, int d_img, int d_aud) {
  std::vector<Token> out;
  for (std::size_t i = 0; i < n; ++i) {
    Token t = MakeToken(words[rng.Below(words.size())], narrator, static_cast<std::int64_t>(i) * 300,
                        d_img, d_aud);
    for (double &v : t.img) v = rng.Normal();
    for (double &v : t.aud) v = rng.Normal();
    out.push_back(std::move(t));
  }
  return out;
}

inline NarrationInstance RandomInstance(Rng &rng, const std::vector<std::string> &words,
                                        std::size_t prev, std::size_t narr, std::size_t next,
                                        int d_img, int d_aud, const std::string &id = "x:0") {
  NarrationInstance inst;
  inst.id = id;
  inst.prev_dialogue = RandomTokens(rng, words, prev, false, d_img, d_aud);
  inst.narration = RandomTokens(rng, words, narr, true, d_img, d_aud);
  inst.next_dialogue = RandomTokens(rng, words, next, false, d_img, d_aud);
  return inst;
}

}  // namespace narb::testing

#endif  // NARB_TESTS_FIXTURES_H_
