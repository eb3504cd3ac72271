// src/syngen.cc

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

#include "narb/syngen.h"

#include <algorithm>
#include <cctype>
#include <cstdio>

#include "narb/common.h"

namespace narb {

GenConfig GenConfig::Defaults() {
  GenConfig cfg;
  cfg.cast = {"Peppa", "George", "Mummy", "Daddy", "Suzy", "Rebecca", "Danny", "Pedro",
              "Emily", "Zoe"};
  cfg.actions = {{"jumping", "jump"},   {"playing", "play"},     {"running", "run"},
                 {"swimming", "swim"},  {"painting", "paint"},   {"reading", "read"},
                 {"dancing", "dance"},  {"singing", "sing"},     {"cooking", "cook"},
                 {"sleeping", "sleep"}, {"digging", "dig"},      {"flying", "fly"},
                 {"climbing", "climb"}, {"building", "build"},   {"shopping", "shop"}};
  cfg.locations = {"garden", "house", "beach", "school", "park",  "playground",
                   "farm",   "forest", "shop",  "pond",  "hill", "museum"};
  cfg.sound_events = {"music", "bell", "splash", "thunder", "whistle", "pig_sound"};
  return cfg;
}

FeatureSpec GenConfig::Spec() const {
  FeatureSpec spec;
  const int need_img = static_cast<int>(cast.size() + actions.size() + locations.size());
  const int need_aud = static_cast<int>(sound_events.size());
  spec.d_img = d_img > 0 ? d_img : need_img;
  spec.d_aud = d_aud > 0 ? d_aud : need_aud;
  return spec;
}

void GenConfig::Validate() const {
  if (cast.empty() || actions.empty() || locations.empty() || sound_events.empty())
    throw Error("syngen: cast, action, location and sound inventories must be non-empty");
  if (n_episodes < 1 || scenes_per_episode < 1)
    throw Error("syngen: need at least one episode and one scene per episode");
  if (!(sigma >= 0.0)) throw Error("syngen: sigma must be non-negative");
  if (!(narration_rate >= 0.0 && narration_rate <= 1.0))
    throw Error("syngen: narration_rate must lie in [0, 1]");
  const FeatureSpec spec = Spec();
  if (spec.d_img < static_cast<int>(cast.size() + actions.size() + locations.size()))
    throw Error("syngen: d_img smaller than the image inventories");
  if (spec.d_aud < static_cast<int>(sound_events.size()))
    throw Error("syngen: d_aud smaller than the sound inventory");
}

std::pair<std::vector<double>, std::vector<double>> DeriveFeatures(
    const SceneState &state, const GenConfig &cfg, const FeatureSpec &spec, double sigma,
    Rng &rng) {
  const int n_cast = static_cast<int>(cfg.cast.size());
  const int n_act = static_cast<int>(cfg.actions.size());
  const int n_loc = static_cast<int>(cfg.locations.size());
  if (spec.d_img < n_cast + n_act + n_loc)
    throw Error("derive_features: d_img=" + std::to_string(spec.d_img) + " < " +
                std::to_string(n_cast + n_act + n_loc) + " inventory slots");
  if (spec.d_aud < static_cast<int>(cfg.sound_events.size()))
    throw Error("derive_features: d_aud=" + std::to_string(spec.d_aud) + " < " +
                std::to_string(cfg.sound_events.size()) + " sound events");
  std::vector<double> img(static_cast<std::size_t>(spec.d_img), 0.0);
  std::vector<double> aud(static_cast<std::size_t>(spec.d_aud), 0.0);
  for (int c : state.characters) img[static_cast<std::size_t>(c)] = 1.0;
  img[static_cast<std::size_t>(n_cast + state.action)] = 1.0;
  img[static_cast<std::size_t>(n_cast + n_act + state.location)] = 1.0;
  if (state.sound_event) aud[static_cast<std::size_t>(*state.sound_event)] = 1.0;
  if (sigma > 0.0) {
    for (double &v : img) v += rng.Normal(0.0, sigma);
    for (double &v : aud) v += rng.Normal(0.0, sigma);
  }
  return {std::move(img), std::move(aud)};
}

std::vector<std::string> NarrationFor(const SceneState &state, const GenConfig &cfg) {
  std::vector<std::string> w;
  for (std::size_t i = 0; i < state.characters.size(); ++i) {
    if (i > 0) w.push_back("and");
    w.push_back(cfg.cast[static_cast<std::size_t>(state.characters[i])]);
  }
  w.push_back(state.characters.size() > 1 ? "are" : "is");
  w.push_back(cfg.actions[static_cast<std::size_t>(state.action)].participle);
  w.push_back("at");
  w.push_back("the");
  w.push_back(cfg.locations[static_cast<std::size_t>(state.location)] + ".");
  return w;
}

namespace {

const std::vector<std::string> kGreetings = {"Hello", "Hi", "Look,"};
const std::vector<std::string> kReplies = {"Yes", "Okay", "Great"};
// Closing lines; their last word only ever ends a scene's dialogue.
const std::vector<std::vector<std::string>> kClosings = {
    {"This", "is", "fun!"}, {"Hooray!"}, {"How", "exciting!"}, {"Yippee!"}};

std::string Capitalize(std::string s) {
  if (!s.empty()) s[0] = static_cast<char>(std::toupper(static_cast<unsigned char>(s[0])));
  return s;
}

template <typename T>
const T &Pick(const std::vector<T> &v, Rng &rng) {
  return v[rng.Below(v.size())];
}

SceneState DrawScene(const GenConfig &cfg, Rng &rng) {
  SceneState s;
  const int first = static_cast<int>(rng.Below(cfg.cast.size()));
  s.characters.push_back(first);
  if (cfg.cast.size() > 1 && rng.Bernoulli(0.5)) {
    int second = static_cast<int>(rng.Below(cfg.cast.size() - 1));
    if (second >= first) ++second;
    s.characters.push_back(second);
  }
  std::sort(s.characters.begin(), s.characters.end());
  s.action = static_cast<int>(rng.Below(cfg.actions.size()));
  s.location = static_cast<int>(rng.Below(cfg.locations.size()));
  return s;
}

std::vector<std::vector<std::string>> DialogueFor(const SceneState &s, const GenConfig &cfg,
                                                  Rng &rng) {
  const std::string &a = cfg.cast[static_cast<std::size_t>(s.characters.front())];
  const std::string b = s.characters.size() > 1
                            ? cfg.cast[static_cast<std::size_t>(s.characters.back())]
                            : std::string("everyone");
  const Action &act = cfg.actions[static_cast<std::size_t>(s.action)];
  const std::string &loc = cfg.locations[static_cast<std::size_t>(s.location)];
  std::vector<std::vector<std::string>> lines;
  lines.push_back({Pick(kGreetings, rng), b + "!"});
  switch (rng.Below(4)) {
    case 0: lines.push_back({"Shall", "we", act.base, "today?"}); break;
    case 1: lines.push_back({"I", "love", "the", loc + "!"}); break;
    case 2: lines.push_back({"What", "a", "lovely", "day!"}); break;
    default: lines.push_back({"Can", "we", "go", "to", "the", loc + "?"}); break;
  }
  lines.push_back({Pick(kReplies, rng) + ",", a + "!"});
  lines.push_back(Pick(kClosings, rng));
  return lines;
}

Episode GenerateEpisode(const GenConfig &cfg, const FeatureSpec &spec, int index) {
  Rng rng(StageSeed(cfg.seed, "episode-" + std::to_string(index)));
  Episode ep;
  char id[32];
  std::snprintf(id, sizeof id, "ep%03d", index + 1);
  ep.episode_id = id;
  ep.title = "Episode " + std::to_string(index + 1);
  std::int64_t clock = 0;
  auto emit = [&](const std::vector<std::string> &words, Speaker who, const SceneState &s) {
    for (const auto &w : words) {
      const std::int64_t dur = 250 + static_cast<std::int64_t>(rng.Below(101));
      Token t;
      t.text = w;
      t.speaker = who;
      t.start_ms = clock;
      t.end_ms = clock + dur;
      auto [img, aud] = DeriveFeatures(s, cfg, spec, cfg.sigma, rng);
      t.img = std::move(img);
      t.aud = std::move(aud);
      ep.tokens.push_back(std::move(t));
      clock += dur;
    }
  };
  std::vector<SceneState> scenes;
  for (int k = 0; k < cfg.scenes_per_episode; ++k) {
    SceneState s = DrawScene(cfg, rng);
    const bool narrated = rng.Bernoulli(cfg.narration_rate);
    // The soundtrack cues an upcoming narration, standing in for the pause
    // or music a real episode has before the narrator speaks.
    if (narrated) s.sound_event = static_cast<int>(rng.Below(cfg.sound_events.size()));
    for (const auto &line : DialogueFor(s, cfg, rng)) {
      emit(line, Speaker::kDialogue, s);
      clock += 400;
    }
    if (narrated) {
      clock += 400;
      emit(NarrationFor(s, cfg), Speaker::kNarrator, s);
      clock += 800;
    }
    scenes.push_back(std::move(s));
  }
  const SceneState &first = scenes.front();
  const SceneState &last = scenes.back();
  std::vector<std::string> plot = NarrationFor(first, cfg);
  plot.back().pop_back();  // drop the period
  plot.push_back("and");
  plot.push_back("later");
  for (const auto &w : NarrationFor(last, cfg)) plot.push_back(w);
  plot.front() = Capitalize(plot.front());
  ep.plot_summary = Join(plot);
  return ep;
}

}  // namespace

Corpus GenerateCorpus(const GenConfig &cfg) {
  cfg.Validate();
  Corpus corpus;
  corpus.spec = cfg.Spec();
  corpus.episodes.resize(static_cast<std::size_t>(cfg.n_episodes));
#pragma omp parallel for schedule(dynamic)
  for (int e = 0; e < cfg.n_episodes; ++e)
    corpus.episodes[static_cast<std::size_t>(e)] = GenerateEpisode(cfg, corpus.spec, e);
  return corpus;
}

}  // namespace narb
