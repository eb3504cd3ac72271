// src/tagger.cc

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

#include "narb/tagger.h"

#include <fstream>

#include "json.hpp"
#include "narb/common.h"

namespace narb {

TaggerModel::TaggerModel(const TaggerConfig &cfg, Vocab vocab, std::uint64_t seed)
    : cfg_(cfg), vocab_(std::move(vocab)) {
  if (cfg.emb < 1 || cfg.fusion < 1 || cfg.hidden < 1 || cfg.d_img < 1 || cfg.d_aud < 1)
    throw Error("tagger: all widths must be positive");
  Rng rng(seed);
  const auto E = static_cast<std::size_t>(cfg.emb);
  const auto F = static_cast<std::size_t>(cfg.fusion);
  const auto H = static_cast<std::size_t>(cfg.hidden);
  embedding_ = &params_.AddGlorot("tagger.embedding", static_cast<std::size_t>(vocab_.size()), E, rng);
  const std::size_t fuse_in =
      cfg.multimodal ? E + static_cast<std::size_t>(cfg.d_aud + cfg.d_img) : E;
  fusion_ = FusionLayer::Create(params_, "tagger.fusion", fuse_in, F, rng);
  lstm_ = LstmParams::Create(params_, "tagger.lstm", F, H, rng);
  out_w_ = &params_.AddGlorot("tagger.out.W", 2, H, rng);
  out_b_ = &params_.Add("tagger.out.b", 2, 1);
}

std::vector<ad::Var> TaggerModel::Logits(ad::Tape &tape, const std::vector<Token> &tokens) const {
  if (tokens.empty()) throw Error("tagger: empty episode");
  ad::Var table = tape.Param(*embedding_);
  ad::Var out_w = tape.Param(*out_w_);
  ad::Var out_b = tape.Param(*out_b_);
  LstmParams::State state = lstm_.Zero(tape);
  std::vector<ad::Var> logits;
  logits.reserve(tokens.size());
  for (const Token &t : tokens) {
    ad::Var emb = ad::EmbedLookup(table, static_cast<std::size_t>(vocab_.Index(t.text)));
    ad::Var x;
    if (cfg_.multimodal) {
      if (static_cast<int>(t.aud.size()) != cfg_.d_aud || static_cast<int>(t.img.size()) != cfg_.d_img)
        throw Error("tagger: token features do not match the model's feature widths");
      x = fusion_.Apply(tape, {emb, tape.Constant(Tensor::Column(t.aud)),
                               tape.Constant(Tensor::Column(t.img))});
    } else {
      x = fusion_.Apply(tape, {emb});
    }
    state = lstm_.Step(tape, x, state);
    logits.push_back(ad::Add(ad::Matmul(out_w, state.h), out_b));
  }
  return logits;
}

std::vector<double> TaggerModel::Forward(const std::vector<Token> &tokens) const {
  ad::Tape tape(false);
  std::vector<double> probs;
  for (const ad::Var &z : Logits(tape, tokens)) probs.push_back(ad::SoftmaxOf(z.value().span())[1]);
  return probs;
}

ad::Var TaggerModel::Loss(ad::Tape &tape, const std::vector<Token> &tokens,
                          const std::vector<int> &labels, const std::vector<int> &mask) const {
  if (labels.size() != tokens.size() || mask.size() != tokens.size())
    throw Error("tagger: labels/mask length differs from token count");
  auto logits = Logits(tape, tokens);
  std::vector<ad::Var> terms;
  for (std::size_t i = 0; i < logits.size(); ++i)
    if (mask[i]) terms.push_back(ad::SoftmaxCrossEntropy(logits[i], labels[i] ? 1 : 0));
  if (terms.empty()) return ad::Scale(ad::Sum(logits.front()), 0.0);
  ad::Var total = terms.front();
  for (std::size_t i = 1; i < terms.size(); ++i) total = ad::Add(total, terms[i]);
  return total;
}

void TaggerModel::Save(const std::string &path) const {
  ad::SaveCheckpoint(path, params_);
  nlohmann::ordered_json j;
  j["kind"] = "tagger";
  j["multimodal"] = cfg_.multimodal;
  j["window_n"] = cfg_.window_n;
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

TaggerModel TaggerModel::Load(const std::string &path) {
  std::ifstream in(path + ".json");
  if (!in) throw Error("cannot open model description " + path + ".json");
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(in);
    if (j.at("kind").get<std::string>() != "tagger") throw Error(path + " is not a tagger model");
    TaggerConfig cfg;
    cfg.multimodal = j.at("multimodal").get<bool>();
    cfg.window_n = j.at("window_n").get<int>();
    cfg.emb = j.at("emb").get<int>();
    cfg.fusion = j.at("fusion").get<int>();
    cfg.hidden = j.at("hidden").get<int>();
    cfg.d_img = j.at("d_img").get<int>();
    cfg.d_aud = j.at("d_aud").get<int>();
    TaggerModel m(cfg, Vocab(j.at("vocab").get<std::vector<std::string>>()), 0);
    ad::LoadCheckpoint(path, m.params_);
    return m;
  } catch (const nlohmann::json::exception &e) {
    throw Error(path + ".json: " + e.what());
  }
}

}  // namespace narb
