// include/narb/tagger.h

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

#ifndef NARB_TAGGER_H_
#define NARB_TAGGER_H_

#include <cstdint>
#include <string>
#include <vector>

#include "narb/autodiff.h"
#include "narb/corpus.h"
#include "narb/layers.h"

namespace narb {

struct TaggerConfig {
  bool multimodal = true;
  int window_n = 1;  // Timing@n the model is trained for
  int emb = 32;
  int fusion = 32;
  int hidden = 64;
  int d_img = 1;
  int d_aud = 1;
};

/// Incremental narration-timing tagger: embedding, early fusion of
/// [text] or [text; audio; image], a unidirectional LSTM and a two-way
/// output layer. Step i only sees tokens 0..i.
class TaggerModel {
 public:
  TaggerModel(const TaggerConfig &cfg, Vocab vocab, std::uint64_t seed);

  /// One logit pair per token; index 1 is "narration follows".
  std::vector<ad::Var> Logits(ad::Tape &tape, const std::vector<Token> &tokens) const;

  /// P(label = 1) for every token. Throws on an empty sequence.
  std::vector<double> Forward(const std::vector<Token> &tokens) const;

  /// Summed cross-entropy over the positions with mask[i] != 0.
  ad::Var Loss(ad::Tape &tape, const std::vector<Token> &tokens, const std::vector<int> &labels,
               const std::vector<int> &mask) const;

  const TaggerConfig &config() const { return cfg_; }
  const Vocab &vocab() const { return vocab_; }
  ad::ParameterSet &params() { return params_; }
  const ad::ParameterSet &params() const { return params_; }

  void Save(const std::string &path) const;
  static TaggerModel Load(const std::string &path);

 private:
  TaggerConfig cfg_;
  Vocab vocab_;
  ad::ParameterSet params_;
  ad::Parameter *embedding_ = nullptr;
  FusionLayer fusion_;
  LstmParams lstm_;
  ad::Parameter *out_w_ = nullptr;
  ad::Parameter *out_b_ = nullptr;
};

}  // namespace narb

#endif  // NARB_TAGGER_H_
