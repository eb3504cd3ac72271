// src/narrator.cc

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

#include "narb/narrator.h"

#include <algorithm>
#include <fstream>
#include <tuple>
#include <utility>

#include "json.hpp"
#include "narb/common.h"

namespace narb {

namespace {

const char *BaseName(Variant v) {
  switch (v) {
    case Variant::kDiNaAtt: return "dina-att";
    case Variant::kDiViNa: return "divina";
    case Variant::kDiViNaAtt: return "divina-att";
    case Variant::kDi2ViNa: return "di2vina";
    case Variant::kDi2ViNaAtt: return "di2vina-att";
  }
  return "?";
}

}  // namespace

std::string VariantName(Variant v, bool mmd) { return std::string(BaseName(v)) + (mmd ? "-mmd" : ""); }

std::pair<Variant, bool> ParseVariant(const std::string &name) {
  for (Variant v : kAllVariants)
    for (bool mmd : {false, true})
      if (VariantName(v, mmd) == name) return {v, mmd};
  throw Error("unknown narrator variant '" + name +
              "' (expected dina-att, divina, divina-att, di2vina, di2vina-att, optionally -mmd)");
}

std::string VariantLabel(Variant v, bool mmd) {
  std::string s;
  switch (v) {
    case Variant::kDiNaAtt: s = "DiNa+att"; break;
    case Variant::kDiViNa: s = "DiViNa"; break;
    case Variant::kDiViNaAtt: s = "DiViNa+att"; break;
    case Variant::kDi2ViNa: s = "Di2ViNa"; break;
    case Variant::kDi2ViNaAtt: s = "Di2ViNa+att"; break;
  }
  return mmd ? s + "+mmd" : s;
}

NarratorModel::NarratorModel(const NarratorConfig &cfg, Vocab vocab, std::uint64_t seed)
    : cfg_(cfg), vocab_(std::move(vocab)) {
  if (cfg.emb < 1 || cfg.fusion < 1 || cfg.hidden < 1 || cfg.d_img < 1 || cfg.d_aud < 1)
    throw Error("narrator: all widths must be positive");
  Rng rng(seed);
  const auto E = static_cast<std::size_t>(cfg.emb);
  const auto F = static_cast<std::size_t>(cfg.fusion);
  const auto H = static_cast<std::size_t>(cfg.hidden);
  const auto A = static_cast<std::size_t>(cfg.d_aud);
  const auto I = static_cast<std::size_t>(cfg.d_img);
  const auto V = static_cast<std::size_t>(vocab_.size());
  embedding_ = &params_.AddGlorot("embedding", V, E, rng);
  dlg_fuse_ = FusionLayer::Create(params_, "dialogue.fusion", E + A + I, F, rng);
  dlg_lstm_ = LstmParams::Create(params_, "dialogue.lstm", F, H, rng);
  std::size_t init_in = H;
  if (HasVideoEncoder(cfg.variant)) {
    vid_fuse_ = FusionLayer::Create(params_, "video.fusion", I + A, F, rng);
    vid_lstm_ = LstmParams::Create(params_, "video.lstm", F, H, rng);
    init_in += H;
  }
  if (HasFutureEncoder(cfg.variant)) {
    fut_fuse_ = FusionLayer::Create(params_, "future.fusion", E + A + I, F, rng);
    fut_lstm_ = LstmParams::Create(params_, "future.lstm", F, H, rng);
    init_in += H;
  }
  init_ = FusionLayer::Create(params_, "decoder.init", init_in, H, rng);
  dec_fuse_ = FusionLayer::Create(params_, "decoder.fusion", cfg.mmd ? E + A + I : E, F, rng);
  dec_lstm_ = LstmParams::Create(params_, "decoder.lstm", HasAttention(cfg.variant) ? F + H : F, H, rng);
  out_w_ = &params_.AddGlorot("decoder.out.W", V, H, rng);
  out_b_ = &params_.Add("decoder.out.b", V, 1);
}

ad::Var NarratorModel::EncodeDialogue(ad::Tape &tape, const std::vector<Token> &tokens,
                                      const FusionLayer &fuse, const LstmParams &lstm,
                                      std::vector<ad::Var> *states) const {
  ad::Var table = tape.Param(*embedding_);
  LstmParams::State s = lstm.Zero(tape);
  auto step = [&](std::size_t word, const std::vector<double> &aud, const std::vector<double> &img) {
    ad::Var x = fuse.Apply(tape, {ad::EmbedLookup(table, word), tape.Constant(Tensor::Column(aud)),
                                  tape.Constant(Tensor::Column(img))});
    s = lstm.Step(tape, x, s);
    if (states) states->push_back(s.h);
  };
  if (tokens.empty()) {
    step(Vocab::kBos, std::vector<double>(static_cast<std::size_t>(cfg_.d_aud), 0.0),
         std::vector<double>(static_cast<std::size_t>(cfg_.d_img), 0.0));
  } else {
    for (const Token &t : tokens) {
      if (static_cast<int>(t.aud.size()) != cfg_.d_aud || static_cast<int>(t.img.size()) != cfg_.d_img)
        throw Error("narrator: token features do not match the model's feature widths");
      step(static_cast<std::size_t>(vocab_.Index(t.text)), t.aud, t.img);
    }
  }
  return s.h;
}

NarratorModel::Encoded NarratorModel::Encode(ad::Tape &tape, const NarrationInstance &inst) const {
  if (inst.narration.empty()) throw Error("narrator: instance " + inst.id + " has no narration");
  Encoded enc;
  std::vector<ad::Var> states;
  enc.h_d = EncodeDialogue(tape, inst.prev_dialogue, dlg_fuse_, dlg_lstm_, &states);
  enc.dialogue_states = ad::Stack(states);
  if (HasVideoEncoder(cfg_.variant)) {
    LstmParams::State s = vid_lstm_.Zero(tape);
    for (const Token &t : inst.narration) {
      ad::Var y = vid_fuse_.Apply(tape, {tape.Constant(Tensor::Column(t.img)),
                                         tape.Constant(Tensor::Column(t.aud))});
      s = vid_lstm_.Step(tape, y, s);
    }
    enc.h_v = s.h;
  }
  if (HasFutureEncoder(cfg_.variant))
    enc.h_fd = EncodeDialogue(tape, inst.next_dialogue, fut_fuse_, fut_lstm_, nullptr);
  return enc;
}

NarratorModel::State NarratorModel::InitDecoder(ad::Tape &tape, const Encoded &enc) const {
  if (enc.h_v.has_value() != HasVideoEncoder(cfg_.variant) ||
      enc.h_fd.has_value() != HasFutureEncoder(cfg_.variant))
    throw Error("init_decoder: encoder states do not match variant " +
                VariantName(cfg_.variant, cfg_.mmd));
  std::vector<ad::Var> parts{enc.h_d};
  if (enc.h_v) parts.push_back(*enc.h_v);
  if (enc.h_fd) parts.push_back(*enc.h_fd);
  return {init_.Apply(tape, parts), tape.Constant(Tensor(static_cast<std::size_t>(cfg_.hidden), 1))};
}

ad::Var NarratorModel::Attend(ad::Var dec_h, const Encoded &enc) const {
  return DotAttention(dec_h, enc.dialogue_states).first;
}

std::pair<ad::Var, NarratorModel::State> NarratorModel::DecodeStep(
    ad::Tape &tape, int prev_token, const State &state, const Token *frame,
    std::optional<ad::Var> context) const {
  if ((frame != nullptr) != cfg_.mmd)
    throw Error(cfg_.mmd ? "decode_step: multimodal decoder needs image/audio input"
                         : "decode_step: image/audio given to a text-only decoder");
  if (context.has_value() != HasAttention(cfg_.variant))
    throw Error(HasAttention(cfg_.variant) ? "decode_step: attentive decoder needs a context"
                                           : "decode_step: context given to a non-attentive decoder");
  ad::Var emb = ad::EmbedLookup(tape.Param(*embedding_), static_cast<std::size_t>(prev_token));
  ad::Var x;
  if (frame) {
    if (static_cast<int>(frame->aud.size()) != cfg_.d_aud || static_cast<int>(frame->img.size()) != cfg_.d_img)
      throw Error("decode_step: frame features do not match the model's feature widths");
    x = dec_fuse_.Apply(tape, {emb, tape.Constant(Tensor::Column(frame->aud)),
                               tape.Constant(Tensor::Column(frame->img))});
  } else {
    x = dec_fuse_.Apply(tape, {emb});
  }
  if (context) x = ad::Concat({x, *context});
  State next = dec_lstm_.Step(tape, x, state);
  ad::Var logits = ad::Add(ad::Matmul(tape.Param(*out_w_), next.h), tape.Param(*out_b_));
  return {logits, next};
}

std::pair<ad::Var, NarratorModel::State> NarratorModel::Step(ad::Tape &tape, int prev_token,
                                                             const State &state, const Token *frame,
                                                             const Encoded &enc) const {
  std::optional<ad::Var> ctx;
  if (HasAttention(cfg_.variant)) ctx = Attend(state.h, enc);
  return DecodeStep(tape, prev_token, state, frame, ctx);
}

std::vector<int> NarratorModel::Targets(const NarrationInstance &inst) const {
  std::vector<int> ids;
  for (const Token &t : inst.narration) ids.push_back(vocab_.Index(t.text));
  if (!cfg_.mmd) ids.push_back(Vocab::kEos);
  return ids;
}

ad::Var NarratorModel::Loss(ad::Tape &tape, const NarrationInstance &inst, double teacher_forcing,
                            Rng &rng) const {
  const Encoded enc = Encode(tape, inst);
  State state = InitDecoder(tape, enc);
  const std::vector<int> gold = Targets(inst);
  ad::Var total;
  int prev = Vocab::kBos;
  for (std::size_t t = 0; t < gold.size(); ++t) {
    const Token *frame = cfg_.mmd ? &inst.narration[t] : nullptr;
    auto [logits, next] = Step(tape, prev, state, frame, enc);
    state = next;
    ad::Var ce = ad::SoftmaxCrossEntropy(logits, static_cast<std::size_t>(gold[t]));
    total = t == 0 ? ce : ad::Add(total, ce);
    if (rng.Bernoulli(teacher_forcing)) {
      prev = gold[t];
    } else {
      const auto &z = logits.value();
      int best = -1;
      for (int k = 0; k < static_cast<int>(z.size()); ++k)
        if (Generatable(*this, k) && (best < 0 || z[static_cast<std::size_t>(k)] > z[static_cast<std::size_t>(best)]))
          best = k;
      prev = best;
    }
  }
  return ad::Scale(total, 1.0 / static_cast<double>(gold.size()));
}

void NarratorModel::Save(const std::string &path) const {
  ad::SaveCheckpoint(path, params_);
  nlohmann::ordered_json j;
  j["kind"] = "narrator";
  j["variant"] = VariantName(cfg_.variant, cfg_.mmd);
  j["emb"] = cfg_.emb;
  j["fusion"] = cfg_.fusion;
  j["hidden"] = cfg_.hidden;
  j["d_img"] = cfg_.d_img;
  j["d_aud"] = cfg_.d_aud;
  j["vocab"] = std::vector<std::string>(vocab_.words().begin() + Vocab::kNumReserved,
                                        vocab_.words().end());
  std::ofstream out(path + ".json", std::ios::binary);
  if (!out) throw Error("cannot write " + path + ".json");
  out << j.dump(1) << '\n';
}

NarratorModel NarratorModel::Load(const std::string &path) {
  std::ifstream in(path + ".json");
  if (!in) throw Error("cannot open model description " + path + ".json");
  try {
    nlohmann::json j = nlohmann::json::parse(in);
    if (j.at("kind").get<std::string>() != "narrator") throw Error(path + " is not a narrator model");
    NarratorConfig cfg;
    std::tie(cfg.variant, cfg.mmd) = ParseVariant(j.at("variant").get<std::string>());
    cfg.emb = j.at("emb").get<int>();
    cfg.fusion = j.at("fusion").get<int>();
    cfg.hidden = j.at("hidden").get<int>();
    cfg.d_img = j.at("d_img").get<int>();
    cfg.d_aud = j.at("d_aud").get<int>();
    NarratorModel m(cfg, Vocab(j.at("vocab").get<std::vector<std::string>>()), 0);
    ad::LoadCheckpoint(path, m.params_);
    return m;
  } catch (const nlohmann::json::exception &e) {
    throw Error(path + ".json: " + e.what());
  }
}

std::string Detokenize(const Vocab &vocab, const std::vector<int> &ids) {
  std::vector<std::string> words;
  for (int id : ids)
    if (id >= Vocab::kNumReserved || id == Vocab::kUnk) words.push_back(vocab.Word(id));
  return Join(words);
}

}  // namespace narb
