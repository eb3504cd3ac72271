// include/narb/retrieval.h

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

#ifndef NARB_RETRIEVAL_H_
#define NARB_RETRIEVAL_H_

#include <map>
#include <optional>
#include <span>
#include <string>
#include <unordered_map>
#include <vector>

#include "narb/corpus.h"
#include "narb/tensor.h"

namespace narb {

/// Training pairs every retriever draws its answers from, in split order.
struct RetrievalCorpus {
  std::vector<std::string> ids;
  std::vector<std::vector<std::string>> dialogues;  // preceding dialogue words
  std::vector<std::vector<std::string>> narrations;
  std::vector<std::string> narration_text;  // verbatim narration strings
  std::size_t fallback = 0;  // row of the most frequent narration (earliest on ties)

  static RetrievalCorpus From(const std::vector<NarrationInstance> &train);
  std::size_t size() const { return ids.size(); }
};

struct RetrievalHit {
  std::size_t row = 0;
  double score = 0.0;
  bool fallback = false;
};

/// Row of `m` with the highest cosine to `query`, lowest row on ties.
/// Returns nullopt when the query has zero norm.
std::optional<RetrievalHit> NearestRow(const Tensor &m, std::span<const double> query);

class TfidfIndex {
 public:
  /// Every training dialogue and every training narration is one document;
  /// tf is the raw count and idf = ln((1 + N) / (1 + df)) + 1.
  static TfidfIndex Fit(const RetrievalCorpus &corpus);

  /// Dense tf-idf vector; terms outside the index are ignored.
  std::vector<double> Vectorize(const std::vector<std::string> &words) const;

  /// Nearest training dialogue by cosine; zero queries fall back to the
  /// most frequent training narration.
  RetrievalHit Retrieve(const std::vector<std::string> &query) const;

  std::size_t num_terms() const { return idf_.size(); }
  std::size_t num_docs() const { return num_docs_; }
  double Idf(const std::string &term) const;       // throws for unknown terms
  int DocumentFrequency(const std::string &term) const;
  const Tensor &dialogue_matrix() const { return dialogues_; }
  const Tensor &narration_matrix() const { return narrations_; }
  std::size_t fallback() const { return fallback_; }

 private:
  std::map<std::string, std::size_t> terms_;
  std::vector<double> idf_;
  std::vector<int> df_;
  std::size_t num_docs_ = 0;
  Tensor dialogues_;
  Tensor narrations_;
  std::size_t fallback_ = 0;
};

class CcaModel {
 public:
  /// Rows of x and y are paired samples. Both views are centered, whitened
  /// with (C + eps I)^(-1/2), and the SVD of the whitened cross-covariance
  /// gives the top-k projection pairs.
  static CcaModel Fit(const Tensor &x, const Tensor &y, int k, double eps = 1e-6);

  /// (v - mean) W for one sample of the given view.
  std::vector<double> ProjectX(std::span<const double> v) const;
  std::vector<double> ProjectY(std::span<const double> v) const;

  const std::vector<double> &correlations() const { return corr_; }
  int k() const { return static_cast<int>(corr_.size()); }
  double eps() const { return eps_; }

  void Save(const std::string &path) const;
  static CcaModel Load(const std::string &path);

 private:
  std::vector<double> Project(std::span<const double> v, const std::vector<double> &mean,
                              const Tensor &w) const;

  std::vector<double> mean_x_, mean_y_;
  Tensor wx_, wy_;  // dim x k
  std::vector<double> corr_;
  double eps_ = 0.0;
};

/// Projects the query dialogue and returns the training narration whose
/// projection is closest by cosine.
class CcaRetriever {
 public:
  CcaRetriever(const RetrievalCorpus &corpus, int k, double eps = 1e-6);
  CcaRetriever(const RetrievalCorpus &corpus, CcaModel model);

  RetrievalHit Retrieve(const std::vector<std::string> &query) const;
  const CcaModel &model() const { return cca_; }
  const TfidfIndex &tfidf() const { return tfidf_; }
  const Tensor &projected_narrations() const { return projected_; }

 private:
  void Build(const RetrievalCorpus &corpus);

  TfidfIndex tfidf_;
  CcaModel cca_;
  Tensor projected_;
  std::size_t fallback_ = 0;
};

/// id -> vector table read from "id<TAB>v1<TAB>...<TAB>vD" lines.
class EmbeddingTable {
 public:
  static EmbeddingTable Load(const std::string &path);
  void Add(const std::string &id, std::vector<double> v);

  bool Has(const std::string &id) const { return index_.count(id) != 0; }
  std::span<const double> Get(const std::string &id) const;
  std::size_t dim() const { return dim_; }
  std::size_t size() const { return ids_.size(); }

 private:
  std::vector<std::string> ids_;
  std::unordered_map<std::string, std::size_t> index_;
  std::vector<std::vector<double>> rows_;
  std::size_t dim_ = 0;
};

/// Dialogue-to-dialogue matching over externally computed embeddings.
class PrecomputedRetriever {
 public:
  /// Every training instance id must be present in `dialogues`.
  PrecomputedRetriever(const RetrievalCorpus &corpus, const EmbeddingTable &dialogues);

  RetrievalHit Retrieve(const std::string &query_id) const;
  RetrievalHit Retrieve(std::span<const double> query) const;
  const Tensor &matrix() const { return matrix_; }

 private:
  EmbeddingTable table_;
  Tensor matrix_;
  std::size_t fallback_ = 0;
};

}  // namespace narb

#endif  // NARB_RETRIEVAL_H_
