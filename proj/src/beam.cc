// src/beam.cc

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
#include <numeric>

#include "narb/common.h"
#include "narb/narrator.h"

namespace narb {

bool Generatable(const NarratorModel &model, int id) {
  if (id == Vocab::kPad || id == Vocab::kBos || id == Vocab::kUnk) return false;
  if (id == Vocab::kEos) return !model.config().mmd;
  return id >= 0 && id < model.vocab().size();
}

namespace {

struct Candidate {
  std::size_t parent;
  int token;
  double logprob;
};

// Candidates are ranked by
// total log-probability; ties go to the earlier hypothesis, then to the
// lower token id, so beam=1 and greedy agree exactly.
BeamHyp Search(const NarratorModel &model, const NarrationInstance &inst, int beam, int max_len) {
  if (beam < 1) throw Error("beam_search: beam must be >= 1, got " + std::to_string(beam));
  const bool mmd = model.config().mmd;
  const int steps = mmd ? static_cast<int>(inst.narration.size()) : max_len;
  if (steps < 1) throw Error("beam_search: max_len must be >= 1");

  ad::Tape tape(false);
  const NarratorModel::Encoded enc = model.Encode(tape, inst);
  BeamHyp root;
  root.state = model.InitDecoder(tape, enc);
  std::vector<BeamHyp> alive{root};
  std::vector<BeamHyp> finished;

  for (int t = 0; t < steps && !alive.empty(); ++t) {
    const Token *frame = mmd ? &inst.narration[static_cast<std::size_t>(t)] : nullptr;
    std::vector<Candidate> cands;
    std::vector<NarratorModel::State> next_states;
    for (std::size_t h = 0; h < alive.size(); ++h) {
      const int prev = alive[h].tokens.empty() ? Vocab::kBos : alive[h].tokens.back();
      auto [logits, next] = model.Step(tape, prev, alive[h].state, frame, enc);
      next_states.push_back(next);
      const std::vector<double> lp = ad::LogSoftmaxOf(logits.value().span());
      for (int k = 0; k < static_cast<int>(lp.size()); ++k)
        if (Generatable(model, k))
          cands.push_back({h, k, alive[h].logprob + lp[static_cast<std::size_t>(k)]});
    }
    const std::size_t keep = std::min(cands.size(), static_cast<std::size_t>(beam));
    std::partial_sort(cands.begin(), cands.begin() + static_cast<std::ptrdiff_t>(keep), cands.end(),
                      [](const Candidate &a, const Candidate &b) {
                        if (a.logprob != b.logprob) return a.logprob > b.logprob;
                        if (a.parent != b.parent) return a.parent < b.parent;
                        return a.token < b.token;
                      });
    std::vector<BeamHyp> next_alive;
    for (std::size_t i = 0; i < keep; ++i) {
      BeamHyp hyp;
      hyp.tokens = alive[cands[i].parent].tokens;
      hyp.tokens.push_back(cands[i].token);
      hyp.logprob = cands[i].logprob;
      hyp.state = next_states[cands[i].parent];
      hyp.finished = cands[i].token == Vocab::kEos || t + 1 == steps;
      (hyp.finished ? finished : next_alive).push_back(std::move(hyp));
    }
    alive = std::move(next_alive);
  }

  // Earliest-found hypothesis wins ties.
  const BeamHyp *best = nullptr;
  for (const BeamHyp &h : finished)
    if (!best || h.Score() > best->Score()) best = &h;
  return *best;
}

std::vector<int> StripEos(std::vector<int> tokens) {
  if (!tokens.empty() && tokens.back() == Vocab::kEos) tokens.pop_back();
  return tokens;
}

}  // namespace

BeamHyp BeamSearchHyp(const NarratorModel &model, const NarrationInstance &inst,
                      const BeamConfig &cfg) {
  return Search(model, inst, cfg.beam, cfg.max_len);
}

std::vector<int> BeamSearch(const NarratorModel &model, const NarrationInstance &inst,
                            const BeamConfig &cfg) {
  return StripEos(BeamSearchHyp(model, inst, cfg).tokens);
}

std::vector<int> GreedyDecode(const NarratorModel &model, const NarrationInstance &inst,
                              int max_len) {
  if (max_len < 1 && !model.config().mmd) throw Error("greedy: max_len must be >= 1");
  const bool mmd = model.config().mmd;
  const int steps = mmd ? static_cast<int>(inst.narration.size()) : max_len;
  ad::Tape tape(false);
  const NarratorModel::Encoded enc = model.Encode(tape, inst);
  NarratorModel::State state = model.InitDecoder(tape, enc);
  std::vector<int> out;
  int prev = Vocab::kBos;
  double total = 0.0;  // summed the same way as in Search
  for (int t = 0; t < steps; ++t) {
    const Token *frame = mmd ? &inst.narration[static_cast<std::size_t>(t)] : nullptr;
    auto [logits, next] = model.Step(tape, prev, state, frame, enc);
    state = next;
    const std::vector<double> lp = ad::LogSoftmaxOf(logits.value().span());
    int best = -1;
    double best_total = 0.0;
    for (int k = 0; k < static_cast<int>(lp.size()); ++k) {
      const double cand = total + lp[static_cast<std::size_t>(k)];
      if (Generatable(model, k) && (best < 0 || cand > best_total)) {
        best = k;
        best_total = cand;
      }
    }
    total = best_total;
    out.push_back(best);
    prev = best;
    if (best == Vocab::kEos) break;
  }
  return StripEos(out);
}

double SequenceLogProb(const NarratorModel &model, const NarrationInstance &inst,
                       const std::vector<int> &tokens) {
  const bool mmd = model.config().mmd;
  if (mmd && tokens.size() != inst.narration.size())
    throw Error("sequence_logprob: multimodal decoder needs exactly one token per narration frame");
  ad::Tape tape(false);
  const NarratorModel::Encoded enc = model.Encode(tape, inst);
  NarratorModel::State state = model.InitDecoder(tape, enc);
  double total = 0.0;
  int prev = Vocab::kBos;
  for (std::size_t t = 0; t < tokens.size(); ++t) {
    const Token *frame = mmd ? &inst.narration[t] : nullptr;
    auto [logits, next] = model.Step(tape, prev, state, frame, enc);
    state = next;
    total += ad::LogSoftmaxOf(logits.value().span())[static_cast<std::size_t>(tokens[t])];
    prev = tokens[t];
  }
  return total;
}

}  // namespace narb
