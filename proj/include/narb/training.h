// include/narb/training.h

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

#ifndef NARB_TRAINING_H_
#define NARB_TRAINING_H_

#include <cstdint>
#include <string>
#include <vector>

#include "narb/corpus.h"
#include "narb/narrator.h"
#include "narb/tagger.h"

namespace narb {

struct TrainConfig {
  double lr = 1e-3;
  double teacher_forcing = 0.5;
  int max_epochs = 20;
  int patience = 3;    // epochs without validation improvement before stopping
  int batch_size = 1;  // sequences whose gradients are summed before an Adam step
  std::uint64_t seed = 1;
  int hidden = 64;
  int fusion = 32;
  int emb = 32;
  int max_len = 25;

  void Validate() const;
};

struct EpochLog {
  int epoch = 0;
  double train_loss = 0.0;
  double valid_metric = 0.0;
};

struct TrainLog {
  std::vector<EpochLog> epochs;
  int best_epoch = 0;
  std::string metric_name;  // "valid_loss" or "valid_f1"

  /// Header "epoch\ttrain_loss\tvalid_metric", then one row per epoch.
  std::string ToTsv() const;
};

/// Sequence-at-a-time Adam training of a narrator. Validation loss is the
/// mean per-token cross-entropy with full teacher forcing; the parameters of
/// the best epoch are restored before returning.
TrainLog TrainNarrator(NarratorModel &model, const std::vector<NarrationInstance> &train,
                       const std::vector<NarrationInstance> &valid, const TrainConfig &cfg);

/// Trains a Timing@n tagger on every token of the training episodes and
/// stops early on validation F1 at threshold 0.5. With `mask_narration` the
/// validation score only counts dialogue positions.
TrainLog TrainTagger(TaggerModel &model, const std::vector<const Episode *> &train,
                     const std::vector<const Episode *> &valid, int n, const TrainConfig &cfg,
                     bool mask_narration = false);

/// Mean validation loss of a narrator with full teacher forcing.
double NarratorValidLoss(const NarratorModel &model, const std::vector<NarrationInstance> &data);

/// Binary predictions at threshold 0.5 over a set of episodes, with the
/// matching gold labels. Narrator positions are dropped when `mask_narration`.
void TaggerPredict(const TaggerModel &model, const std::vector<const Episode *> &episodes, int n,
                   bool mask_narration, std::vector<int> *gold, std::vector<int> *pred);

}  // namespace narb

#endif  // NARB_TRAINING_H_
