// src/training.cc

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

#include "narb/training.h"

#include <cmath>
#include <numeric>
#include <sstream>

#include "narb/common.h"
#include "narb/metrics.h"
#include "narb/random.h"

namespace narb {

void TrainConfig::Validate() const {
  if (!(lr > 0.0) || !std::isfinite(lr)) throw Error("train: lr must be positive");
  if (!(teacher_forcing >= 0.0 && teacher_forcing <= 1.0))
    throw Error("train: teacher_forcing must lie in [0, 1]");
  if (max_epochs < 1 || patience < 1 || batch_size < 1 || hidden < 1 || fusion < 1 || emb < 1 ||
      max_len < 1)
    throw Error("train: epochs, patience, batch size, widths and max_len must be positive");
}

std::string TrainLog::ToTsv() const {
  std::ostringstream out;
  out.precision(17);
  out << "epoch\ttrain_loss\tvalid_metric\n";
  for (const EpochLog &e : epochs) out << e.epoch << '\t' << e.train_loss << '\t' << e.valid_metric << '\n';
  return out.str();
}

namespace {

void Shuffle(std::vector<std::size_t> &v, Rng &rng) {
  for (std::size_t i = v.size(); i > 1; --i) std::swap(v[i - 1], v[rng.Below(i)]);
}

std::vector<Tensor> Snapshot(const ad::ParameterSet &params) {
  std::vector<Tensor> out;
  for (const ad::Parameter *p : params.All()) out.push_back(p->value);
  return out;
}

void Restore(ad::ParameterSet &params, const std::vector<Tensor> &values) {
  auto all = params.All();
  for (std::size_t i = 0; i < all.size(); ++i) all[i]->value = values[i];
}

// Shared epoch loop. `epoch_fn` runs one training pass and returns the mean
// loss; `score_fn` returns the validation metric, oriented by `higher_better`.
template <typename EpochFn, typename ScoreFn>
TrainLog RunEpochs(ad::ParameterSet &params, const TrainConfig &cfg, bool higher_better,
                   const std::string &metric, EpochFn epoch_fn, ScoreFn score_fn) {
  TrainLog log;
  log.metric_name = metric;
  std::vector<Tensor> best_values = Snapshot(params);
  double best = 0.0;
  int since_best = 0;
  for (int epoch = 1; epoch <= cfg.max_epochs; ++epoch) {
    EpochLog e;
    e.epoch = epoch;
    e.train_loss = epoch_fn();
    e.valid_metric = score_fn();
    log.epochs.push_back(e);
    const bool better = log.best_epoch == 0 ||
                        (higher_better ? e.valid_metric > best : e.valid_metric < best);
    if (better) {
      best = e.valid_metric;
      log.best_epoch = epoch;
      best_values = Snapshot(params);
      since_best = 0;
    } else if (++since_best >= cfg.patience) {
      break;
    }
  }
  Restore(params, best_values);
  return log;
}

void CheckFinite(double loss, const std::string &what) {
  if (!std::isfinite(loss)) throw Error("training diverged: non-finite loss on " + what);
}

}  // namespace

double NarratorValidLoss(const NarratorModel &model, const std::vector<NarrationInstance> &data) {
  if (data.empty()) return 0.0;
  Rng unused(0);
  double total = 0.0;
  for (const NarrationInstance &inst : data) {
    ad::Tape tape(false);
    total += model.Loss(tape, inst, 1.0, unused).value()[0];
  }
  return total / static_cast<double>(data.size());
}

TrainLog TrainNarrator(NarratorModel &model, const std::vector<NarrationInstance> &train,
                       const std::vector<NarrationInstance> &valid, const TrainConfig &cfg) {
  cfg.Validate();
  if (train.empty()) throw Error("train_narrator: empty training split");
  ad::AdamConfig acfg;
  acfg.lr = cfg.lr;
  ad::Adam adam(model.params(), acfg);
  Rng rng(StageSeed(cfg.seed, "train-narrator"));
  std::vector<std::size_t> order(train.size());
  std::iota(order.begin(), order.end(), 0);

  auto epoch_fn = [&] {
    Shuffle(order, rng);
    double total = 0.0;
    int pending = 0;
    for (std::size_t idx : order) {
      ad::Tape tape(true);
      ad::Var loss = model.Loss(tape, train[idx], cfg.teacher_forcing, rng);
      const double v = loss.value()[0];
      CheckFinite(v, "instance " + train[idx].id);
      total += v;
      tape.Backward(loss);
      if (++pending == cfg.batch_size) {
        adam.Step();
        pending = 0;
      }
    }
    if (pending > 0) adam.Step();
    return total / static_cast<double>(train.size());
  };
  auto score_fn = [&] {
    return valid.empty() ? NarratorValidLoss(model, train) : NarratorValidLoss(model, valid);
  };
  return RunEpochs(model.params(), cfg, false, "valid_loss", epoch_fn, score_fn);
}

void TaggerPredict(const TaggerModel &model, const std::vector<const Episode *> &episodes, int n,
                   bool mask_narration, std::vector<int> *gold, std::vector<int> *pred) {
  gold->clear();
  pred->clear();
  for (const Episode *ep : episodes) {
    const std::vector<int> labels = LabelTiming(*ep, n).labels;
    const std::vector<double> probs = model.Forward(ep->tokens);
    for (std::size_t i = 0; i < labels.size(); ++i) {
      if (mask_narration && ep->tokens[i].IsNarrator()) continue;
      gold->push_back(labels[i]);
      pred->push_back(probs[i] >= 0.5 ? 1 : 0);
    }
  }
}

TrainLog TrainTagger(TaggerModel &model, const std::vector<const Episode *> &train,
                     const std::vector<const Episode *> &valid, int n, const TrainConfig &cfg,
                     bool mask_narration) {
  cfg.Validate();
  if (train.empty()) throw Error("train_tagger: empty training split");
  if (n < 1) throw Error("train_tagger: timing window must be >= 1");
  ad::AdamConfig acfg;
  acfg.lr = cfg.lr;
  ad::Adam adam(model.params(), acfg);
  Rng rng(StageSeed(cfg.seed, "train-tagger"));
  std::vector<std::vector<int>> labels;
  for (const Episode *ep : train) labels.push_back(LabelTiming(*ep, n).labels);
  std::vector<std::size_t> order(train.size());
  std::iota(order.begin(), order.end(), 0);

  auto epoch_fn = [&] {
    Shuffle(order, rng);
    double total = 0.0;
    long count = 0;
    int pending = 0;
    for (std::size_t idx : order) {
      const Episode &ep = *train[idx];
      ad::Tape tape(true);
      ad::Var loss = model.Loss(tape, ep.tokens, labels[idx], std::vector<int>(ep.tokens.size(), 1));
      const double v = loss.value()[0];
      CheckFinite(v, "episode " + ep.episode_id);
      total += v;
      count += static_cast<long>(ep.tokens.size());
      tape.Backward(loss);
      if (++pending == cfg.batch_size) {
        adam.Step();
        pending = 0;
      }
    }
    if (pending > 0) adam.Step();
    return total / static_cast<double>(count);
  };
  auto score_fn = [&] {
    std::vector<int> gold, pred;
    TaggerPredict(model, valid.empty() ? train : valid, n, mask_narration, &gold, &pred);
    return Prf(gold, pred).f1;
  };
  return RunEpochs(model.params(), cfg, true, "valid_f1", epoch_fn, score_fn);
}

}  // namespace narb
