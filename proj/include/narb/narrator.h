// include/narb/narrator.h

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

#ifndef NARB_NARRATOR_H_
#define NARB_NARRATOR_H_

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "narb/autodiff.h"
#include "narb/corpus.h"
#include "narb/layers.h"

namespace narb {

/// Encoder layout of a narrator model. The attentive variants attend over
/// the states of the preceding-dialogue encoder.
enum class Variant { kDiNaAtt, kDiViNa, kDiViNaAtt, kDi2ViNa, kDi2ViNaAtt };

inline bool HasVideoEncoder(Variant v) { return v != Variant::kDiNaAtt; }
inline bool HasFutureEncoder(Variant v) { return v == Variant::kDi2ViNa || v == Variant::kDi2ViNaAtt; }
inline bool HasAttention(Variant v) {
  return v == Variant::kDiNaAtt || v == Variant::kDiViNaAtt || v == Variant::kDi2ViNaAtt;
}

inline constexpr Variant kAllVariants[] = {Variant::kDiNaAtt, Variant::kDiViNa,
                                           Variant::kDiViNaAtt, Variant::kDi2ViNa,
                                           Variant::kDi2ViNaAtt};

/// "dina-att", "divina", "divina-att", "di2vina", "di2vina-att", plus "-mmd".
std::string VariantName(Variant v, bool mmd);
/// Inverse of VariantName; returns the variant and the mmd flag.
std::pair<Variant, bool> ParseVariant(const std::string &name);
/// Display name used in report tables, e.g. "Di2ViNa+att+mmd".
std::string VariantLabel(Variant v, bool mmd);

struct NarratorConfig {
  Variant variant = Variant::kDi2ViNa;
  bool mmd = false;
  int emb = 32;
  int fusion = 32;
  int hidden = 64;
  int d_img = 1;
  int d_aud = 1;
};

class NarratorModel {
 public:
  NarratorModel(const NarratorConfig &cfg, Vocab vocab, std::uint64_t seed);

  struct Encoded {
    ad::Var h_d;
    std::optional<ad::Var> h_v;
    std::optional<ad::Var> h_fd;
    ad::Var dialogue_states;  // T x H, rows are dialogue encoder states
  };
  using State = LstmParams::State;

  /// Final states of every encoder the variant has. An empty dialogue
  /// context is encoded as one BOS step with zero image and audio.
  Encoded Encode(ad::Tape &tape, const NarrationInstance &inst) const;

  /// h_0 = ReLU(W [h_d; h_v?; h_fd?] + b); c_0 = 0.
  State InitDecoder(ad::Tape &tape, const Encoded &enc) const;

  /// Context vector over the dialogue encoder states.
  ad::Var Attend(ad::Var dec_h, const Encoded &enc) const;

  /// One decoder step: input fuse(emb(prev) [; img; aud]) [; context].
  /// `frame` must be given iff the model has the multimodal decoder and
  /// `context` iff it is attentive. Returns logits over the vocabulary.
  std::pair<ad::Var, State> DecodeStep(ad::Tape &tape, int prev_token, const State &state,
                                       const Token *frame, std::optional<ad::Var> context) const;

  /// Convenience wrapper computing the context itself when attentive.
  std::pair<ad::Var, State> Step(ad::Tape &tape, int prev_token, const State &state,
                                 const Token *frame, const Encoded &enc) const;

  /// Gold decoder targets: narration word ids, plus EOS unless mmd.
  std::vector<int> Targets(const NarrationInstance &inst) const;

  /// Mean per-token cross-entropy. At every step after the first the gold
  /// previous token is fed with probability `teacher_forcing`, else the
  /// model's argmax. Gold image/audio frames are fed to mmd regardless.
  ad::Var Loss(ad::Tape &tape, const NarrationInstance &inst, double teacher_forcing,
               Rng &rng) const;

  const NarratorConfig &config() const { return cfg_; }
  const Vocab &vocab() const { return vocab_; }
  ad::ParameterSet &params() { return params_; }
  const ad::ParameterSet &params() const { return params_; }
  std::size_t decoder_input_width() const { return dec_lstm_.input_width; }

  void Save(const std::string &path) const;
  static NarratorModel Load(const std::string &path);

 private:
  ad::Var EncodeDialogue(ad::Tape &tape, const std::vector<Token> &tokens, const FusionLayer &fuse,
                         const LstmParams &lstm, std::vector<ad::Var> *states) const;

  NarratorConfig cfg_;
  Vocab vocab_;
  ad::ParameterSet params_;
  ad::Parameter *embedding_ = nullptr;
  FusionLayer dlg_fuse_;
  LstmParams dlg_lstm_;
  FusionLayer vid_fuse_;
  LstmParams vid_lstm_;
  FusionLayer fut_fuse_;
  LstmParams fut_lstm_;
  FusionLayer init_;
  FusionLayer dec_fuse_;
  LstmParams dec_lstm_;
  ad::Parameter *out_w_ = nullptr;
  ad::Parameter *out_b_ = nullptr;
};

// Decoding -------------------------------------------------------------------

struct BeamConfig {
  int beam = 3;
  int max_len = 25;  // ignored by mmd models, which decode |narration| steps
};

struct BeamHyp {
  std::vector<int> tokens;  // generated ids, including a final EOS if any
  double logprob = 0.0;
  bool finished = false;
  NarratorModel::State state;

  /// Length-normalized score: logprob / number of generated tokens.
  double Score() const { return tokens.empty() ? 0.0 : logprob / static_cast<double>(tokens.size()); }
};

/// True for ids that may be generated: never PAD, BOS or UNK, and EOS only
/// for models without the multimodal decoder.
bool Generatable(const NarratorModel &model, int id);

/// Beam search. Each step expands every live hypothesis, keeps the `beam`
/// best candidates by log-probability and retires those ending in EOS or
/// reaching max_len. Returns the finished hypothesis with the highest
/// length-normalized score (EOS stripped). mmd models decode exactly
/// |narration| steps, feeding the gold frames, with EOS disallowed.
std::vector<int> BeamSearch(const NarratorModel &model, const NarrationInstance &inst,
                            const BeamConfig &cfg);

/// Same search, returning the chosen hypothesis with its score.
BeamHyp BeamSearchHyp(const NarratorModel &model, const NarrationInstance &inst,
                      const BeamConfig &cfg);

/// Argmax decoding.
std::vector<int> GreedyDecode(const NarratorModel &model, const NarrationInstance &inst,
                              int max_len);

/// Log-probability of a fixed output sequence under the model (teacher
/// forced, including a final EOS if present in `tokens`).
double SequenceLogProb(const NarratorModel &model, const NarrationInstance &inst,
                       const std::vector<int> &tokens);

std::string Detokenize(const Vocab &vocab, const std::vector<int> &ids);

}  // namespace narb

#endif  // NARB_NARRATOR_H_
