// src/metrics.cc

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

#include "narb/metrics.h"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdio>
#include <map>
#include <unordered_map>

#include "narb/common.h"

namespace narb {

namespace {

using NgramCounts = std::map<Words, int>;

NgramCounts Ngrams(const Words &w, int n) {
  NgramCounts out;
  const auto len = static_cast<std::size_t>(n);
  for (std::size_t i = 0; i + len <= w.size(); ++i)
    ++out[Words(w.begin() + static_cast<std::ptrdiff_t>(i),
                w.begin() + static_cast<std::ptrdiff_t>(i + len))];
  return out;
}

long Overlap(const NgramCounts &cand, const NgramCounts &ref) {
  long hits = 0;
  for (const auto &[g, c] : cand) {
    auto it = ref.find(g);
    if (it != ref.end()) hits += std::min(c, it->second);
  }
  return hits;
}

double Harmonic(double p, double r) { return p + r > 0.0 ? 2.0 * p * r / (p + r) : 0.0; }

void CheckAligned(std::size_t a, std::size_t b, const char *what) {
  if (a != b)
    throw Error(std::string(what) + ": " + std::to_string(a) + " candidates vs " +
                std::to_string(b) + " references");
  if (a == 0) throw Error(std::string(what) + ": empty corpus");
}

std::string Fixed2(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.2f", v);
  return buf;
}

}  // namespace

TaggingReport Prf(const std::vector<int> &gold, const std::vector<int> &pred) {
  if (gold.size() != pred.size())
    throw Error("prf: gold has " + std::to_string(gold.size()) + " labels, prediction " +
                std::to_string(pred.size()));
  TaggingReport r;
  for (std::size_t i = 0; i < gold.size(); ++i) {
    const bool g = gold[i] != 0;
    const bool p = pred[i] != 0;
    if (g && p) ++r.tp;
    else if (p) ++r.fp;
    else if (g) ++r.fn;
  }
  r.precision = r.tp + r.fp > 0 ? static_cast<double>(r.tp) / static_cast<double>(r.tp + r.fp) : 0.0;
  r.recall = r.tp + r.fn > 0 ? static_cast<double>(r.tp) / static_cast<double>(r.tp + r.fn) : 0.0;
  r.f1 = Harmonic(r.precision, r.recall);
  return r;
}

std::vector<double> BleuCorpus(const std::vector<Words> &candidates,
                               const std::vector<Words> &references, int max_n) {
  CheckAligned(candidates.size(), references.size(), "bleu");
  if (max_n < 1) throw Error("bleu: max_n must be >= 1");
  const auto N = static_cast<std::size_t>(max_n);
  const auto pairs = static_cast<long>(candidates.size());
  std::vector<std::vector<long>> hits(candidates.size(), std::vector<long>(N, 0));
  std::vector<std::vector<long>> totals(candidates.size(), std::vector<long>(N, 0));
#pragma omp parallel for schedule(static)
  for (long i = 0; i < pairs; ++i) {
    const auto k = static_cast<std::size_t>(i);
    for (std::size_t n = 1; n <= N; ++n) {
      const NgramCounts c = Ngrams(candidates[k], static_cast<int>(n));
      hits[k][n - 1] = Overlap(c, Ngrams(references[k], static_cast<int>(n)));
      const long len = static_cast<long>(candidates[k].size()) - static_cast<long>(n) + 1;
      totals[k][n - 1] = std::max(0L, len);
    }
  }
  long c_len = 0, r_len = 0;
  std::vector<long> hit(N, 0), total(N, 0);
  for (std::size_t k = 0; k < candidates.size(); ++k) {
    c_len += static_cast<long>(candidates[k].size());
    r_len += static_cast<long>(references[k].size());
    for (std::size_t n = 0; n < N; ++n) {
      hit[n] += hits[k][n];
      total[n] += totals[k][n];
    }
  }
  std::vector<double> out(N, 0.0);
  if (c_len == 0) return out;
  const double bp = c_len < r_len ? std::exp(1.0 - static_cast<double>(r_len) / static_cast<double>(c_len)) : 1.0;
  double log_sum = 0.0;
  bool zero = false;
  for (std::size_t n = 0; n < N; ++n) {
    if (hit[n] == 0 || total[n] == 0) zero = true;
    if (!zero) log_sum += std::log(static_cast<double>(hit[n]) / static_cast<double>(total[n]));
    out[n] = zero ? 0.0 : 100.0 * bp * std::exp(log_sum / static_cast<double>(n + 1));
  }
  return out;
}

Prf3 RougeL(const Words &candidate, const Words &reference, double beta) {
  if (candidate.empty() || reference.empty()) throw Error("rouge_l: empty input");
  const std::size_t m = candidate.size(), n = reference.size();
  std::vector<int> prev(n + 1, 0), cur(n + 1, 0);
  for (std::size_t i = 1; i <= m; ++i) {
    for (std::size_t j = 1; j <= n; ++j)
      cur[j] = candidate[i - 1] == reference[j - 1] ? prev[j - 1] + 1 : std::max(prev[j], cur[j - 1]);
    std::swap(prev, cur);
  }
  const double lcs = prev[n];
  Prf3 r;
  if (lcs == 0) return r;
  r.p = lcs / static_cast<double>(m);
  r.r = lcs / static_cast<double>(n);
  const double b2 = beta * beta;
  r.f = (1.0 + b2) * r.p * r.r / (r.r + b2 * r.p);
  return r;
}

Prf3 RougeN(const Words &candidate, const Words &reference, int n) {
  if (n != 1 && n != 2) throw Error("rouge_n: n must be 1 or 2, got " + std::to_string(n));
  if (candidate.empty() || reference.empty()) throw Error("rouge_n: empty input");
  const NgramCounts c = Ngrams(candidate, n), g = Ngrams(reference, n);
  const long hits = Overlap(c, g);
  const long c_total = std::max(0L, static_cast<long>(candidate.size()) - n + 1);
  const long g_total = std::max(0L, static_cast<long>(reference.size()) - n + 1);
  Prf3 r;
  if (hits == 0) return r;
  r.p = static_cast<double>(hits) / static_cast<double>(c_total);
  r.r = static_cast<double>(hits) / static_cast<double>(g_total);
  r.f = Harmonic(r.p, r.r);
  return r;
}

std::vector<double> CiderPerPair(const std::vector<Words> &candidates,
                                 const std::vector<Words> &references) {
  CheckAligned(candidates.size(), references.size(), "cider");
  constexpr int kMaxN = 4;
  const double log_docs = std::log(static_cast<double>(references.size()));
  std::vector<std::map<Words, int>> df(kMaxN);
  for (const Words &ref : references)
    for (int n = 1; n <= kMaxN; ++n)
      for (const auto &entry : Ngrams(ref, n)) ++df[static_cast<std::size_t>(n - 1)][entry.first];

  const auto pairs = static_cast<long>(candidates.size());
  std::vector<double> out(candidates.size(), 0.0);
#pragma omp parallel for schedule(static)
  for (long i = 0; i < pairs; ++i) {
    const auto k = static_cast<std::size_t>(i);
    double sum = 0.0;
    for (int n = 1; n <= kMaxN; ++n) {
      const auto &table = df[static_cast<std::size_t>(n - 1)];
      auto weight = [&](const Words &g) {
        auto it = table.find(g);
        return log_docs - std::log(std::max(1.0, it == table.end() ? 0.0 : static_cast<double>(it->second)));
      };
      const NgramCounts c = Ngrams(candidates[k], n), r = Ngrams(references[k], n);
      double dot = 0.0, nc = 0.0, nr = 0.0;
      for (const auto &[g, cnt] : c) {
        const double v = cnt * weight(g);
        nc += v * v;
        auto it = r.find(g);
        if (it != r.end()) dot += v * it->second * weight(g);
      }
      for (const auto &[g, cnt] : r) {
        const double v = cnt * weight(g);
        nr += v * v;
      }
      if (nc > 0.0 && nr > 0.0) sum += dot / (std::sqrt(nc) * std::sqrt(nr));
    }
    out[k] = 10.0 * sum / kMaxN;
  }
  return out;
}

double Cider(const std::vector<Words> &candidates, const std::vector<Words> &references) {
  const std::vector<double> per = CiderPerPair(candidates, references);
  double s = 0.0;
  for (double v : per) s += v;
  return s / static_cast<double>(per.size());
}

double MeteorLite(const Words &candidate, const Words &reference) {
  if (candidate.empty() || reference.empty()) throw Error("meteor: empty input");
  std::vector<int> align(candidate.size(), -1);
  std::vector<bool> used(reference.size(), false);
  auto stage = [&](auto key) {
    for (std::size_t i = 0; i < candidate.size(); ++i) {
      if (align[i] >= 0) continue;
      const std::string ki = key(candidate[i]);
      for (std::size_t j = 0; j < reference.size(); ++j)
        if (!used[j] && key(reference[j]) == ki) {
          align[i] = static_cast<int>(j);
          used[j] = true;
          break;
        }
    }
  };
  stage([](const std::string &w) { return ToLower(w); });
  stage([](const std::string &w) { return PorterStem(ToLower(w)); });

  int m = 0, chunks = 0;
  int prev = -2;
  for (int j : align) {
    if (j < 0) {
      prev = -2;
      continue;
    }
    ++m;
    if (j != prev + 1) ++chunks;
    prev = j;
  }
  if (m == 0) return 0.0;
  const double p = static_cast<double>(m) / static_cast<double>(candidate.size());
  const double r = static_cast<double>(m) / static_cast<double>(reference.size());
  const double fmean = 10.0 * p * r / (r + 9.0 * p);
  const double frag = static_cast<double>(chunks) / m;
  return fmean * (1.0 - 0.5 * frag * frag * frag);
}

GenReport EvaluateGeneration(const std::vector<std::string> &outputs,
                             const std::vector<std::string> &gold) {
  CheckAligned(outputs.size(), gold.size(), "evaluate_generation");
  std::vector<Words> cands, refs;
  for (const auto &s : outputs) cands.push_back(Tokenize(s));
  for (const auto &s : gold) refs.push_back(Tokenize(s));
  GenReport rep;
  const std::vector<double> bleu = BleuCorpus(cands, refs, 3);
  rep.bleu1 = bleu[0];
  rep.bleu2 = bleu[1];
  rep.bleu3 = bleu[2];
  const auto pairs = static_cast<long>(cands.size());
  std::vector<double> rl(cands.size(), 0.0), met(cands.size(), 0.0);
#pragma omp parallel for schedule(static)
  for (long i = 0; i < pairs; ++i) {
    const auto k = static_cast<std::size_t>(i);
    if (cands[k].empty() || refs[k].empty()) continue;
    rl[k] = RougeL(cands[k], refs[k]).f;
    met[k] = MeteorLite(cands[k], refs[k]);
  }
  for (std::size_t k = 0; k < cands.size(); ++k) {
    rep.rouge_l += rl[k];
    rep.meteor += met[k];
  }
  rep.rouge_l *= 100.0 / static_cast<double>(cands.size());
  rep.meteor *= 100.0 / static_cast<double>(cands.size());
  rep.cider = Cider(cands, refs);
  return rep;
}

std::string GenReportHeader() { return "model\tBLEU-1\tBLEU-2\tBLEU-3\tROUGE-L\tMETEOR\tCIDEr"; }

std::string GenReportRow(const std::string &model, const GenReport &r) {
  return model + '\t' + Fixed2(r.bleu1) + '\t' + Fixed2(r.bleu2) + '\t' + Fixed2(r.bleu3) + '\t' +
         Fixed2(r.rouge_l) + '\t' + Fixed2(r.meteor) + '\t' + Fixed2(r.cider);
}

std::string TaggingReportHeader() { return "model\tP\tR\tF1"; }

std::string TaggingReportRow(const std::string &model, const TaggingReport &r) {
  return model + '\t' + Fixed2(100.0 * r.precision) + '\t' + Fixed2(100.0 * r.recall) + '\t' +
         Fixed2(100.0 * r.f1);
}

std::string ToString(SummaryMode m) { return m == SummaryMode::kFull ? "full" : "bytes75"; }

SummaryMode ParseSummaryMode(const std::string &s) {
  if (s == "full") return SummaryMode::kFull;
  if (s == "bytes75") return SummaryMode::kBytes75;
  throw Error("unknown summary mode '" + s + "' (expected full or bytes75)");
}

std::string TruncateUtf8(const std::string &s, std::size_t max_bytes) {
  if (s.size() <= max_bytes) return s;
  std::size_t cut = max_bytes;
  while (cut > 0 && (static_cast<unsigned char>(s[cut]) & 0xC0) == 0x80) --cut;
  return s.substr(0, cut);
}

std::string NarrationSummary(const Episode &episode, SummaryMode mode) {
  Words words;
  for (const Token &t : episode.tokens)
    if (t.IsNarrator()) words.push_back(t.text);
  const std::string full = Join(words);
  return mode == SummaryMode::kFull ? full : TruncateUtf8(full, 75);
}

SummaryReport NarrationSummaryEval(const Corpus &corpus, SummaryMode mode) {
  std::vector<const Episode *> eps;
  for (const Episode &e : corpus.episodes)
    if (e.plot_summary && !Tokenize(*e.plot_summary).empty()) eps.push_back(&e);
  if (eps.empty()) throw Error("summary_eval: no episode has a plot summary");
  const auto count = static_cast<long>(eps.size());
  std::vector<std::array<Prf3, 3>> scores(eps.size());
#pragma omp parallel for schedule(static)
  for (long i = 0; i < count; ++i) {
    const auto k = static_cast<std::size_t>(i);
    const Words cand = Tokenize(NarrationSummary(*eps[k], mode));
    const Words ref = Tokenize(*eps[k]->plot_summary);
    if (cand.empty()) continue;
    scores[k] = {RougeN(cand, ref, 1), RougeN(cand, ref, 2), RougeL(cand, ref, 1.0)};
  }
  SummaryReport rep;
  rep.mode = mode;
  rep.episodes = static_cast<int>(eps.size());
  Prf3 *dst[3] = {&rep.rouge1, &rep.rouge2, &rep.rougel};
  for (const auto &s : scores)
    for (int m = 0; m < 3; ++m) {
      dst[m]->p += s[static_cast<std::size_t>(m)].p;
      dst[m]->r += s[static_cast<std::size_t>(m)].r;
      dst[m]->f += s[static_cast<std::size_t>(m)].f;
    }
  const double inv = 1.0 / static_cast<double>(eps.size());
  for (Prf3 *d : dst) {
    d->p *= inv;
    d->r *= inv;
    d->f *= inv;
  }
  return rep;
}

std::string SummaryReportTsv(const SummaryReport &r) {
  std::string out = "metric\tP\tR\tF1\n";
  auto row = [&](const char *name, const Prf3 &s) {
    out += std::string(name) + '\t' + Fixed2(100.0 * s.p) + '\t' + Fixed2(100.0 * s.r) + '\t' +
           Fixed2(100.0 * s.f) + '\n';
  };
  row("ROUGE-1", r.rouge1);
  row("ROUGE-2", r.rouge2);
  row("ROUGE-L", r.rougel);
  return out;
}

}  // namespace narb
