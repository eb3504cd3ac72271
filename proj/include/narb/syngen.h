// include/narb/syngen.h

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

#ifndef NARB_SYNGEN_H_
#define NARB_SYNGEN_H_

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "narb/corpus.h"
#include "narb/random.h"

namespace narb {

/// An action with the participle used by the narrator and the base form
/// used by the characters ("jumping" / "jump").
struct Action {
  std::string participle;
  std::string base;
};

/// What is on screen during one scene.
struct SceneState {
  std::vector<int> characters;  // sorted indices into the cast
  int action = 0;
  int location = 0;
  std::optional<int> sound_event;
};

struct GenConfig {
  int n_episodes = 50;
  int scenes_per_episode = 12;
  std::vector<std::string> cast;
  std::vector<Action> actions;
  std::vector<std::string> locations;
  std::vector<std::string> sound_events;
  double sigma = 0.1;
  double narration_rate = 0.7;
  std::uint64_t seed = 1;
  // 0 means "smallest width that fits the inventories".
  int d_img = 0;
  int d_aud = 0;

  /// Inventories populated with the built-in cartoon cast and settings.
  static GenConfig Defaults();

  FeatureSpec Spec() const;
  void Validate() const;
};

/// Image vector: multi-hot over [characters | action | location] in the
/// first C+A+L dims. Audio vector: one-hot sound event (zero if none). Both
/// get i.i.d. N(0, sigma^2) noise drawn from rng in a fixed order.
std::pair<std::vector<double>, std::vector<double>> DeriveFeatures(
    const SceneState &state, const GenConfig &cfg, const FeatureSpec &spec, double sigma,
    Rng &rng);

/// The narration the narrator speaks over a scene; a pure function of the
/// characters, action and location.
std::vector<std::string> NarrationFor(const SceneState &state, const GenConfig &cfg);

/// Builds the whole corpus. Each episode draws from its own stream
/// (StageSeed(seed, "episode-<k>")), so episodes are generated in parallel
/// and the result does not depend on the thread count.
Corpus GenerateCorpus(const GenConfig &cfg);

}  // namespace narb

#endif  // NARB_SYNGEN_H_
