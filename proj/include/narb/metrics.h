// include/narb/metrics.h

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

#ifndef NARB_METRICS_H_
#define NARB_METRICS_H_

#include <string>
#include <vector>

#include "narb/corpus.h"

namespace narb {

using Words = std::vector<std::string>;

struct TaggingReport {
  double precision = 0.0;
  double recall = 0.0;
  double f1 = 0.0;
  long tp = 0;
  long fp = 0;
  long fn = 0;
};

/// Positive class 1. Zero denominators give 0.
TaggingReport Prf(const std::vector<int> &gold, const std::vector<int> &pred);

struct Prf3 {
  double p = 0.0;
  double r = 0.0;
  double f = 0.0;
};

/// Corpus BLEU-1..max_n (x100), one reference per candidate.
std::vector<double> BleuCorpus(const std::vector<Words> &candidates,
                               const std::vector<Words> &references, int max_n);

/// LCS-based ROUGE-L with F = (1+b^2)PR / (R + b^2 P).
Prf3 RougeL(const Words &candidate, const Words &reference, double beta = 1.2);

/// n-gram overlap (n = 1 or 2) with clipped counts; F is the harmonic mean.
Prf3 RougeN(const Words &candidate, const Words &reference, int n);

/// Per-pair CIDEr: 10 x mean over n = 1..4 of the cosine between TF-IDF
/// n-gram vectors, idf = ln(N) - ln(max(1, df)) over the references.
std::vector<double> CiderPerPair(const std::vector<Words> &candidates,
                                 const std::vector<Words> &references);
/// Corpus mean of CiderPerPair.
double Cider(const std::vector<Words> &candidates, const std::vector<Words> &references);

/// Porter (1980) suffix stripping, lowercase ASCII input.
std::string PorterStem(const std::string &word);

/// Unigram METEOR without synonyms: exact matches, then stem matches,
/// Fmean = 10PR/(R+9P), penalty = 0.5 (chunks/m)^3.
double MeteorLite(const Words &candidate, const Words &reference);

struct GenReport {
  double bleu1 = 0.0;
  double bleu2 = 0.0;
  double bleu3 = 0.0;
  double rouge_l = 0.0;  // mean sentence F, x100
  double meteor = 0.0;   // mean sentence score, x100
  double cider = 0.0;    // corpus mean, 10x cosine scale
};

/// All generation metrics over aligned output/gold strings, tokenized with
/// the corpus tokenizer. Empty outputs score zero.
GenReport EvaluateGeneration(const std::vector<std::string> &outputs,
                             const std::vector<std::string> &gold);

/// "model\tBLEU-1\tBLEU-2\tBLEU-3\tROUGE-L\tMETEOR\tCIDEr"
std::string GenReportHeader();
std::string GenReportRow(const std::string &model, const GenReport &r);

/// "model\tP\tR\tF1" with one row per tagger, values x100.
std::string TaggingReportHeader();
std::string TaggingReportRow(const std::string &model, const TaggingReport &r);

enum class SummaryMode { kFull, kBytes75 };
std::string ToString(SummaryMode m);
SummaryMode ParseSummaryMode(const std::string &s);

struct SummaryReport {
  SummaryMode mode = SummaryMode::kFull;
  int episodes = 0;
  Prf3 rouge1;
  Prf3 rouge2;
  Prf3 rougel;
};

/// Longest prefix of `s` of at most `max_bytes` bytes that does not split a
/// UTF-8 sequence.
std::string TruncateUtf8(const std::string &s, std::size_t max_bytes);

/// Concatenated narration text of each episode against its plot summary,
/// macro-averaged ROUGE-1/2/L (F = F1). Episodes without a summary are
/// skipped; throws when none has one.
SummaryReport NarrationSummaryEval(const Corpus &corpus, SummaryMode mode);

/// Candidate text NarrationSummaryEval uses for one episode.
std::string NarrationSummary(const Episode &episode, SummaryMode mode);

/// "metric\tP\tR\tF1" rows for ROUGE-1, ROUGE-2 and ROUGE-L, values x100.
std::string SummaryReportTsv(const SummaryReport &r);

}  // namespace narb

#endif  // NARB_METRICS_H_
