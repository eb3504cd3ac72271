// tools/narb.cc

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

// narb: command-line front end. Every subcommand reads and writes plain
// files (JSONL corpora, JSON splits, TSV reports, binary checkpoints).

#include <array>
#include <cstdint>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "narb/common.h"
#include "narb/corpus.h"
#include "narb/metrics.h"
#include "narb/narrator.h"
#include "narb/retrieval.h"
#include "narb/syngen.h"
#include "narb/tagger.h"
#include "narb/training.h"

namespace {

using narb::Error;

// JSON config files: top-level keys are global flags, nested objects are
// per-subcommand flags, e.g. {"seed": 3, "train-narrator": {"epochs": 5}}.
class JsonConfig : public CLI::Config {
 public:
  std::string to_config(const CLI::App *, bool, bool, std::string) const override { return "{}\n"; }

  std::vector<CLI::ConfigItem> from_config(std::istream &input) const override {
    nlohmann::json j;
    try {
      j = nlohmann::json::parse(input);
    } catch (const nlohmann::json::exception &e) {
      throw CLI::ConversionError(std::string("config file is not valid JSON: ") + e.what());
    }
    if (!j.is_object()) throw CLI::ConversionError("config file must hold a JSON object");
    std::vector<CLI::ConfigItem> items;
    Collect(j, {}, items);
    return items;
  }

 private:
  static std::string Scalar(const nlohmann::json &v) {
    if (v.is_string()) return v.get<std::string>();
    if (v.is_boolean()) return v.get<bool>() ? "true" : "false";
    return v.dump();
  }

  static void Collect(const nlohmann::json &j, std::vector<std::string> parents,
                      std::vector<CLI::ConfigItem> &items) {
    for (const auto &[key, value] : j.items()) {
      if (value.is_object()) {
        auto p = parents;
        p.push_back(key);
        Collect(value, p, items);
        continue;
      }
      CLI::ConfigItem item;
      item.parents = parents;
      item.name = key;
      if (value.is_array()) {
        for (const auto &v : value) item.inputs.push_back(Scalar(v));
      } else {
        item.inputs.push_back(Scalar(value));
      }
      items.push_back(std::move(item));
    }
  }
};

void WriteText(const std::string &path, const std::string &text) {
  if (path.empty() || path == "-") {
    std::cout << text;
    return;
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot write " + path);
  out << text;
  if (!out) throw Error("write failed: " + path);
}

std::string SeedLine(std::uint64_t seed) { return "# seed=" + std::to_string(seed) + "\n"; }

std::array<double, 3> ParseRatios(const std::string &s) {
  std::array<double, 3> r{};
  std::stringstream in(s);
  std::string cell;
  std::size_t i = 0;
  while (std::getline(in, cell, ',')) {
    if (i == 3) throw Error("--ratios needs exactly three comma-separated values");
    try {
      r[i++] = std::stod(cell);
    } catch (const std::exception &) {
      throw Error("--ratios: bad number '" + cell + "'");
    }
  }
  if (i != 3) throw Error("--ratios needs exactly three comma-separated values");
  return r;
}

const std::vector<std::string> &Part(const narb::SplitSpec &split, const std::string &name) {
  if (name == "train") return split.train;
  if (name == "valid") return split.valid;
  if (name == "test") return split.test;
  throw Error("unknown split part '" + name + "' (expected train, valid or test)");
}

narb::SplitSpec RequireLevel(narb::SplitSpec split, narb::SplitLevel level, const char *cmd) {
  if (split.level != level)
    throw Error(std::string(cmd) + " needs an " + narb::ToString(level) + "-level split");
  return split;
}

struct GenOutputs {
  std::vector<std::string> ids, gold, generated;
};

std::string GenerationTsv(const GenOutputs &g, std::uint64_t seed) {
  std::string out = SeedLine(seed) + "instance_id\tgold\tgenerated\n";
  for (std::size_t i = 0; i < g.ids.size(); ++i)
    out += g.ids[i] + '\t' + g.gold[i] + '\t' + g.generated[i] + '\n';
  return out;
}

GenOutputs ReadGenerationTsv(const std::string &path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open " + path);
  GenOutputs g;
  std::string line;
  int lineno = 0;
  bool header = false;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty() || line[0] == '#') continue;
    if (!header) {
      if (line != "instance_id\tgold\tgenerated")
        throw Error(path + ":" + std::to_string(lineno) + ": expected header instance_id/gold/generated");
      header = true;
      continue;
    }
    std::vector<std::string> cols;
    std::stringstream fields(line);
    std::string cell;
    while (std::getline(fields, cell, '\t')) cols.push_back(cell);
    if (cols.size() == 2) cols.emplace_back();  // empty generation
    if (cols.size() != 3) throw Error(path + ":" + std::to_string(lineno) + ": expected 3 columns");
    g.ids.push_back(cols[0]);
    g.gold.push_back(cols[1]);
    g.generated.push_back(cols[2]);
  }
  if (g.ids.empty()) throw Error(path + ": no generations");
  return g;
}

std::string NarrationText(const narb::NarrationInstance &inst) {
  std::vector<std::string> words;
  for (const narb::Token &t : inst.narration) words.push_back(t.text);
  return narb::Join(words);
}

struct TrainFlags {
  narb::TrainConfig cfg;
  std::string log_path;

  void Register(CLI::App *cmd) {
    cmd->add_option("--epochs", cfg.max_epochs, "Maximum training epochs")->capture_default_str();
    cmd->add_option("--patience", cfg.patience, "Epochs without validation gain before stopping")
        ->capture_default_str();
    cmd->add_option("--lr", cfg.lr, "Adam learning rate")->capture_default_str();
    cmd->add_option("--batch-size", cfg.batch_size, "Sequences per Adam step")->capture_default_str();
    cmd->add_option("--hidden", cfg.hidden, "LSTM hidden width")->capture_default_str();
    cmd->add_option("--fusion", cfg.fusion, "Fusion layer output width")->capture_default_str();
    cmd->add_option("--emb", cfg.emb, "Word embedding width")->capture_default_str();
    cmd->add_option("--log", log_path, "Write the epoch log TSV here");
  }
};

}  // namespace

int main(int argc, char **argv) {
  CLI::App app{"narb: narration timing and generation toolkit"};
  app.config_formatter(std::make_shared<JsonConfig>());
  app.set_config("--config", "", "JSON config file; command-line flags override its values");
  app.require_subcommand(1);
  app.fallthrough();
  std::uint64_t seed = 1;
  app.add_option("--seed", seed, "Seed for every random stage (env NARB_SEED)")
      ->envname("NARB_SEED")
      ->capture_default_str();

  // gen-data ----------------------------------------------------------------
  narb::GenConfig gen = narb::GenConfig::Defaults();
  std::string gen_out;
  auto *gen_cmd = app.add_subcommand("gen-data", "Generate a synthetic narrated corpus (JSONL)");
  gen_cmd->add_option("--episodes", gen.n_episodes, "Number of episodes")->capture_default_str();
  gen_cmd->add_option("--scenes", gen.scenes_per_episode, "Scenes per episode")->capture_default_str();
  gen_cmd->add_option("--narration-rate", gen.narration_rate, "Probability a scene is narrated")
      ->capture_default_str();
  gen_cmd->add_option("--sigma", gen.sigma, "Feature noise standard deviation")->capture_default_str();
  gen_cmd->add_option("-o,--output", gen_out, "Output corpus path")->required();

  // stats -------------------------------------------------------------------
  std::string corpus_path, out_path;
  auto *stats_cmd = app.add_subcommand("stats", "Corpus statistics and histograms");
  stats_cmd->add_option("corpus", corpus_path, "Corpus JSONL")->required()->check(CLI::ExistingFile);
  stats_cmd->add_option("-o,--output", out_path, "Directory for stats.tsv and hist_*.tsv (default: print stats)");

  // label -------------------------------------------------------------------
  int window_n = 1;
  auto *label_cmd = app.add_subcommand("label", "Timing@n labels for every token");
  label_cmd->add_option("corpus", corpus_path, "Corpus JSONL")->required()->check(CLI::ExistingFile);
  label_cmd->add_option("--n", window_n, "Look-ahead window")->capture_default_str();
  label_cmd->add_option("-o,--output", out_path, "Output TSV (default: stdout)");

  // split -------------------------------------------------------------------
  std::string level = "episode", ratios = "0.8,0.1,0.1";
  auto *split_cmd = app.add_subcommand("split", "Seeded train/valid/test split");
  split_cmd->add_option("corpus", corpus_path, "Corpus JSONL")->required()->check(CLI::ExistingFile);
  split_cmd->add_option("--level", level, "episode or instance")
      ->check(CLI::IsMember({"episode", "instance"}))
      ->capture_default_str();
  split_cmd->add_option("--ratios", ratios, "train,valid,test shares")->capture_default_str();
  split_cmd->add_option("-o,--output", out_path, "Output split JSON")->required();

  // train-timing ------------------------------------------------------------
  std::string split_path, modality = "multimodal";
  TrainFlags timing_flags;
  auto *tt_cmd = app.add_subcommand("train-timing", "Train a Timing@n tagger");
  tt_cmd->add_option("corpus", corpus_path, "Corpus JSONL")->required()->check(CLI::ExistingFile);
  tt_cmd->add_option("--split", split_path, "Episode-level split JSON")->required()->check(CLI::ExistingFile);
  tt_cmd->add_option("--n", window_n, "Look-ahead window")->capture_default_str();
  tt_cmd->add_option("--modality", modality, "text or multimodal")
      ->check(CLI::IsMember({"text", "multimodal"}))
      ->capture_default_str();
  tt_cmd->add_option("-o,--output", out_path, "Model path (checkpoint plus .json sidecar)")->required();
  timing_flags.Register(tt_cmd);

  // eval-timing -------------------------------------------------------------
  std::vector<std::string> model_paths;
  std::string part = "test";
  bool mask_narration = false;
  auto *et_cmd = app.add_subcommand("eval-timing", "Precision/recall/F1 of timing taggers");
  et_cmd->add_option("corpus", corpus_path, "Corpus JSONL")->required()->check(CLI::ExistingFile);
  et_cmd->add_option("--split", split_path, "Episode-level split JSON")->required()->check(CLI::ExistingFile);
  et_cmd->add_option("--model", model_paths, "Tagger model (repeatable)")->required();
  et_cmd->add_option("--subset", part, "train, valid or test")->capture_default_str();
  et_cmd->add_flag("--mask-narration", mask_narration, "Score dialogue positions only");
  et_cmd->add_option("-o,--output", out_path, "Report TSV (default: stdout)");

  // train-narrator ----------------------------------------------------------
  std::string variant = "di2vina-mmd";
  TrainFlags narr_flags;
  auto *tn_cmd = app.add_subcommand("train-narrator", "Train a narration generator");
  tn_cmd->add_option("corpus", corpus_path, "Corpus JSONL")->required()->check(CLI::ExistingFile);
  tn_cmd->add_option("--split", split_path, "Instance-level split JSON")->required()->check(CLI::ExistingFile);
  tn_cmd->add_option("--variant", variant,
                     "dina-att, divina, divina-att, di2vina or di2vina-att, optionally with -mmd")
      ->capture_default_str();
  tn_cmd->add_option("--teacher-forcing", narr_flags.cfg.teacher_forcing,
                     "Probability of feeding the gold previous token")
      ->capture_default_str();
  tn_cmd->add_option("-o,--output", out_path, "Model path (checkpoint plus .json sidecar)")->required();
  narr_flags.Register(tn_cmd);

  // generate ----------------------------------------------------------------
  std::string model_path;
  narb::BeamConfig beam;
  auto *gen_text_cmd = app.add_subcommand("generate", "Decode narrations with a trained model");
  gen_text_cmd->add_option("corpus", corpus_path, "Corpus JSONL")->required()->check(CLI::ExistingFile);
  gen_text_cmd->add_option("--split", split_path, "Instance-level split JSON")->required()->check(CLI::ExistingFile);
  gen_text_cmd->add_option("--model", model_path, "Narrator model")->required()->check(CLI::ExistingFile);
  gen_text_cmd->add_option("--subset", part, "train, valid or test")->capture_default_str();
  gen_text_cmd->add_option("--beam", beam.beam, "Beam size")->capture_default_str();
  gen_text_cmd->add_option("--max-len", beam.max_len, "Maximum length without the multimodal decoder")
      ->capture_default_str();
  gen_text_cmd->add_option("-o,--output", out_path, "Output TSV (default: stdout)");

  // retrieve ----------------------------------------------------------------
  std::string method = "tfidf", embeddings_path, cca_out;
  int cca_k = 16;
  double cca_eps = 1e-6;
  auto *ret_cmd = app.add_subcommand("retrieve", "Retrieval baselines");
  ret_cmd->add_option("corpus", corpus_path, "Corpus JSONL")->required()->check(CLI::ExistingFile);
  ret_cmd->add_option("--split", split_path, "Instance-level split JSON")->required()->check(CLI::ExistingFile);
  ret_cmd->add_option("--method", method, "tfidf, cca or precomputed")
      ->check(CLI::IsMember({"tfidf", "cca", "precomputed"}))
      ->capture_default_str();
  ret_cmd->add_option("--subset", part, "train, valid or test")->capture_default_str();
  ret_cmd->add_option("--k", cca_k, "CCA dimensionality")->capture_default_str();
  ret_cmd->add_option("--eps", cca_eps, "CCA covariance ridge")->capture_default_str();
  ret_cmd->add_option("--save-cca", cca_out, "Write the fitted CCA model here");
  ret_cmd->add_option("--embeddings", embeddings_path, "Dialogue embedding TSV keyed by instance id")
      ->check(CLI::ExistingFile);
  ret_cmd->add_option("-o,--output", out_path, "Output TSV (default: stdout)");

  // eval-gen ----------------------------------------------------------------
  std::vector<std::string> systems;
  auto *eg_cmd = app.add_subcommand("eval-gen", "Word-overlap metrics for generation TSVs");
  eg_cmd->add_option("--system", systems, "NAME=PATH of a generate/retrieve TSV (repeatable)")->required();
  eg_cmd->add_option("-o,--output", out_path, "Report TSV (default: stdout)");

  // summary-eval ------------------------------------------------------------
  std::string mode = "full";
  auto *se_cmd = app.add_subcommand("summary-eval", "Narrations as episode summaries (ROUGE)");
  se_cmd->add_option("corpus", corpus_path, "Corpus JSONL")->required()->check(CLI::ExistingFile);
  se_cmd->add_option("--mode", mode, "full or bytes75")
      ->check(CLI::IsMember({"full", "bytes75"}))
      ->capture_default_str();
  se_cmd->add_option("-o,--output", out_path, "Report TSV (default: stdout)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp &e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp &e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion &e) {
    return app.exit(e);
  } catch (const CLI::ParseError &e) {
    app.exit(e);
    return 2;
  }

  try {
    if (gen_cmd->parsed()) {
      gen.seed = seed;
      narb::SaveCorpus(narb::GenerateCorpus(gen), gen_out);
    } else if (stats_cmd->parsed()) {
      const narb::StatsReport r = narb::CorpusStats(narb::LoadCorpus(corpus_path));
      if (out_path.empty()) {
        std::cout << SeedLine(seed) << narb::StatsTsv(r);
      } else {
        std::filesystem::create_directories(out_path);
        const std::filesystem::path dir(out_path);
        WriteText((dir / "stats.tsv").string(), SeedLine(seed) + narb::StatsTsv(r));
        for (const narb::Histogram &h : r.histograms)
          WriteText((dir / ("hist_" + h.name + ".tsv")).string(), SeedLine(seed) + narb::HistogramTsv(h));
      }
    } else if (label_cmd->parsed()) {
      const narb::Corpus corpus = narb::LoadCorpus(corpus_path);
      std::string out = SeedLine(seed) + "episode_id\tindex\ttoken\tspeaker\tlabel\n";
      for (const narb::Episode &ep : corpus.episodes) {
        const auto labels = narb::LabelTiming(ep, window_n).labels;
        for (std::size_t i = 0; i < labels.size(); ++i)
          out += ep.episode_id + '\t' + std::to_string(i) + '\t' + ep.tokens[i].text + '\t' +
                 (ep.tokens[i].IsNarrator() ? "narrator" : "dialogue") + '\t' +
                 std::to_string(labels[i]) + '\n';
      }
      WriteText(out_path, out);
    } else if (split_cmd->parsed()) {
      const narb::Corpus corpus = narb::LoadCorpus(corpus_path);
      narb::SaveSplit(narb::SplitCorpus(corpus, ParseRatios(ratios), narb::ParseSplitLevel(level), seed),
                      out_path);
    } else if (tt_cmd->parsed()) {
      const narb::Corpus corpus = narb::LoadCorpus(corpus_path);
      const narb::SplitSpec split =
          RequireLevel(narb::LoadSplit(split_path), narb::SplitLevel::kEpisode, "train-timing");
      narb::TaggerConfig mc;
      mc.multimodal = modality == "multimodal";
      mc.window_n = window_n;
      mc.emb = timing_flags.cfg.emb;
      mc.fusion = timing_flags.cfg.fusion;
      mc.hidden = timing_flags.cfg.hidden;
      mc.d_img = corpus.spec.d_img;
      mc.d_aud = corpus.spec.d_aud;
      timing_flags.cfg.seed = seed;
      narb::TaggerModel model(mc, narb::BuildVocab(corpus, split), narb::StageSeed(seed, "init-tagger"));
      const narb::TrainLog log =
          narb::TrainTagger(model, narb::SelectEpisodes(corpus, split.train),
                            narb::SelectEpisodes(corpus, split.valid), window_n, timing_flags.cfg);
      model.Save(out_path);
      if (!timing_flags.log_path.empty()) WriteText(timing_flags.log_path, SeedLine(seed) + log.ToTsv());
    } else if (et_cmd->parsed()) {
      const narb::Corpus corpus = narb::LoadCorpus(corpus_path);
      const narb::SplitSpec split =
          RequireLevel(narb::LoadSplit(split_path), narb::SplitLevel::kEpisode, "eval-timing");
      const auto episodes = narb::SelectEpisodes(corpus, Part(split, part));
      std::string out = SeedLine(seed) + narb::TaggingReportHeader() + '\n';
      for (const std::string &path : model_paths) {
        const narb::TaggerModel model = narb::TaggerModel::Load(path);
        std::vector<int> gold, pred;
        narb::TaggerPredict(model, episodes, model.config().window_n, mask_narration, &gold, &pred);
        const std::string name = "T@" + std::to_string(model.config().window_n) + ' ' +
                                 (model.config().multimodal ? "multimodal" : "text");
        out += narb::TaggingReportRow(name, narb::Prf(gold, pred)) + '\n';
      }
      WriteText(out_path, out);
    } else if (tn_cmd->parsed()) {
      const narb::Corpus corpus = narb::LoadCorpus(corpus_path);
      const narb::SplitSpec split =
          RequireLevel(narb::LoadSplit(split_path), narb::SplitLevel::kInstance, "train-narrator");
      const auto all = narb::ExtractInstances(corpus);
      narb::NarratorConfig mc;
      std::tie(mc.variant, mc.mmd) = narb::ParseVariant(variant);
      mc.emb = narr_flags.cfg.emb;
      mc.fusion = narr_flags.cfg.fusion;
      mc.hidden = narr_flags.cfg.hidden;
      mc.d_img = corpus.spec.d_img;
      mc.d_aud = corpus.spec.d_aud;
      narr_flags.cfg.seed = seed;
      narb::NarratorModel model(mc, narb::BuildVocab(corpus, split), narb::StageSeed(seed, "init-narrator"));
      const narb::TrainLog log =
          narb::TrainNarrator(model, narb::SelectInstances(all, split.train),
                              narb::SelectInstances(all, split.valid), narr_flags.cfg);
      model.Save(out_path);
      if (!narr_flags.log_path.empty()) WriteText(narr_flags.log_path, SeedLine(seed) + log.ToTsv());
    } else if (gen_text_cmd->parsed()) {
      const narb::Corpus corpus = narb::LoadCorpus(corpus_path);
      const narb::SplitSpec split =
          RequireLevel(narb::LoadSplit(split_path), narb::SplitLevel::kInstance, "generate");
      const auto insts = narb::SelectInstances(narb::ExtractInstances(corpus), Part(split, part));
      const narb::NarratorModel model = narb::NarratorModel::Load(model_path);
      GenOutputs g;
      g.generated.resize(insts.size());
      std::vector<std::string> errors(insts.size());
      const auto count = static_cast<long>(insts.size());
#pragma omp parallel for schedule(dynamic)
      for (long i = 0; i < count; ++i) {
        const auto k = static_cast<std::size_t>(i);
        try {
          g.generated[k] = narb::Detokenize(model.vocab(), narb::BeamSearch(model, insts[k], beam));
        } catch (const std::exception &e) {
          errors[k] = insts[k].id + ": " + e.what();
        }
      }
      for (const auto &e : errors)
        if (!e.empty()) throw Error(e);
      for (const auto &inst : insts) {
        g.ids.push_back(inst.id);
        g.gold.push_back(NarrationText(inst));
      }
      WriteText(out_path, GenerationTsv(g, seed));
    } else if (ret_cmd->parsed()) {
      const narb::Corpus corpus = narb::LoadCorpus(corpus_path);
      const narb::SplitSpec split =
          RequireLevel(narb::LoadSplit(split_path), narb::SplitLevel::kInstance, "retrieve");
      const auto all = narb::ExtractInstances(corpus);
      const auto rc = narb::RetrievalCorpus::From(narb::SelectInstances(all, split.train));
      const auto queries = narb::SelectInstances(all, Part(split, part));
      GenOutputs g;
      auto emit = [&](const narb::NarrationInstance &q, const narb::RetrievalHit &hit) {
        g.ids.push_back(q.id);
        g.gold.push_back(NarrationText(q));
        g.generated.push_back(rc.narration_text[hit.row]);
      };
      if (method == "tfidf") {
        const auto index = narb::TfidfIndex::Fit(rc);
        for (const auto &q : queries) emit(q, index.Retrieve(q.PrevWords()));
      } else if (method == "cca") {
        const narb::CcaRetriever cca(rc, cca_k, cca_eps);
        if (!cca_out.empty()) cca.model().Save(cca_out);
        for (const auto &q : queries) emit(q, cca.Retrieve(q.PrevWords()));
      } else {
        if (embeddings_path.empty()) throw Error("--method precomputed needs --embeddings");
        const narb::PrecomputedRetriever pre(rc, narb::EmbeddingTable::Load(embeddings_path));
        for (const auto &q : queries) emit(q, pre.Retrieve(q.id));
      }
      WriteText(out_path, GenerationTsv(g, seed));
    } else if (eg_cmd->parsed()) {
      std::string out = SeedLine(seed) + "# METEOR is METEOR-lite: exact and stem matches, no synonyms\n" +
                        narb::GenReportHeader() + '\n';
      for (const std::string &spec : systems) {
        const auto eq = spec.find('=');
        const std::string name = eq == std::string::npos ? std::filesystem::path(spec).stem().string()
                                                         : spec.substr(0, eq);
        const std::string path = eq == std::string::npos ? spec : spec.substr(eq + 1);
        const GenOutputs g = ReadGenerationTsv(path);
        out += narb::GenReportRow(name, narb::EvaluateGeneration(g.generated, g.gold)) + '\n';
      }
      WriteText(out_path, out);
    } else if (se_cmd->parsed()) {
      const narb::SummaryReport r =
          narb::NarrationSummaryEval(narb::LoadCorpus(corpus_path), narb::ParseSummaryMode(mode));
      WriteText(out_path, SeedLine(seed) + narb::SummaryReportTsv(r));
    }
  } catch (const std::exception &e) {
    std::cerr << "narb: error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
