// src/retrieval.cc

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

#include "narb/retrieval.h"

#include <Eigen/Dense>
#include <cmath>
#include <fstream>
#include <sstream>

#include "narb/autodiff.h"
#include "narb/common.h"
#include "narb/kernels.h"

namespace narb {

RetrievalCorpus RetrievalCorpus::From(const std::vector<NarrationInstance> &train) {
  if (train.empty()) throw Error("retrieval: empty training set");
  RetrievalCorpus c;
  std::map<std::string, std::pair<int, std::size_t>> freq;  // text -> (count, first row)
  for (std::size_t i = 0; i < train.size(); ++i) {
    c.ids.push_back(train[i].id);
    c.dialogues.push_back(train[i].PrevWords());
    c.narrations.push_back(train[i].NarrationWords());
    std::vector<std::string> raw;
    for (const Token &t : train[i].narration) raw.push_back(t.text);
    c.narration_text.push_back(Join(raw));
    auto [it, fresh] = freq.try_emplace(c.narration_text.back(), 0, i);
    ++it->second.first;
  }
  int best = -1;
  for (const auto &[text, entry] : freq)
    if (entry.first > best || (entry.first == best && entry.second < c.fallback)) {
      best = entry.first;
      c.fallback = entry.second;
    }
  return c;
}

std::optional<RetrievalHit> NearestRow(const Tensor &m, std::span<const double> query) {
  if (query.size() != m.cols())
    throw Error("retrieval: query dimension " + std::to_string(query.size()) +
                " != table dimension " + std::to_string(m.cols()));
  if (kernels::Norm(query) == 0.0) return std::nullopt;
  std::vector<double> scores(m.rows());
  kernels::CosineRows(m.span(), m.rows(), m.cols(), query, scores);
  RetrievalHit hit;
  hit.score = scores.empty() ? 0.0 : scores[0];
  for (std::size_t i = 1; i < scores.size(); ++i)
    if (scores[i] > hit.score) {
      hit.score = scores[i];
      hit.row = i;
    }
  return hit;
}

namespace {

RetrievalHit Fallback(std::size_t row) {
  RetrievalHit h;
  h.row = row;
  h.fallback = true;
  return h;
}

void SetRow(Tensor &m, std::size_t r, const std::vector<double> &v) {
  std::copy(v.begin(), v.end(), m.span().begin() + static_cast<std::ptrdiff_t>(r * m.cols()));
}

}  // namespace

// TF-IDF ---------------------------------------------------------------------

TfidfIndex TfidfIndex::Fit(const RetrievalCorpus &corpus) {
  if (corpus.size() == 0) throw Error("fit_tfidf: empty training set");
  TfidfIndex idx;
  std::map<std::string, int> df;
  auto count_doc = [&](const std::vector<std::string> &doc) {
    std::map<std::string, int> seen;
    for (const auto &w : doc) seen[w] = 1;
    for (const auto &entry : seen) ++df[entry.first];
  };
  for (std::size_t i = 0; i < corpus.size(); ++i) {
    count_doc(corpus.dialogues[i]);
    count_doc(corpus.narrations[i]);
  }
  idx.num_docs_ = 2 * corpus.size();
  const double n = static_cast<double>(idx.num_docs_);
  for (const auto &[term, d] : df) {
    idx.terms_[term] = idx.idf_.size();
    idx.idf_.push_back(std::log((1.0 + n) / (1.0 + d)) + 1.0);
    idx.df_.push_back(d);
  }
  idx.dialogues_ = Tensor(corpus.size(), idx.idf_.size());
  idx.narrations_ = Tensor(corpus.size(), idx.idf_.size());
  for (std::size_t i = 0; i < corpus.size(); ++i) {
    SetRow(idx.dialogues_, i, idx.Vectorize(corpus.dialogues[i]));
    SetRow(idx.narrations_, i, idx.Vectorize(corpus.narrations[i]));
  }
  idx.fallback_ = corpus.fallback;
  return idx;
}

std::vector<double> TfidfIndex::Vectorize(const std::vector<std::string> &words) const {
  std::vector<double> v(idf_.size(), 0.0);
  for (const auto &w : words) {
    auto it = terms_.find(w);
    if (it != terms_.end()) v[it->second] += 1.0;
  }
  for (std::size_t i = 0; i < v.size(); ++i) v[i] *= idf_[i];
  return v;
}

RetrievalHit TfidfIndex::Retrieve(const std::vector<std::string> &query) const {
  auto hit = NearestRow(dialogues_, Vectorize(query));
  return hit ? *hit : Fallback(fallback_);
}

double TfidfIndex::Idf(const std::string &term) const {
  auto it = terms_.find(term);
  if (it == terms_.end()) throw Error("tfidf: unknown term '" + term + "'");
  return idf_[it->second];
}

int TfidfIndex::DocumentFrequency(const std::string &term) const {
  auto it = terms_.find(term);
  return it == terms_.end() ? 0 : df_[it->second];
}

// CCA ------------------------------------------------------------------------

namespace {

using Mat = Eigen::MatrixXd;

Mat ToEigen(const Tensor &t) {
  Mat m(t.rows(), t.cols());
  for (std::size_t r = 0; r < t.rows(); ++r)
    for (std::size_t c = 0; c < t.cols(); ++c) m(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) = t(r, c);
  return m;
}

Tensor FromEigen(const Mat &m) {
  Tensor t(static_cast<std::size_t>(m.rows()), static_cast<std::size_t>(m.cols()));
  for (Eigen::Index r = 0; r < m.rows(); ++r)
    for (Eigen::Index c = 0; c < m.cols(); ++c) t(static_cast<std::size_t>(r), static_cast<std::size_t>(c)) = m(r, c);
  return t;
}

// (C + eps I)^(-1/2) of a symmetric covariance.
Mat InverseSqrt(const Mat &c, double eps, const char *view) {
  Eigen::SelfAdjointEigenSolver<Mat> es(c + eps * Mat::Identity(c.rows(), c.cols()));
  const Eigen::VectorXd &ev = es.eigenvalues();
  const double floor = 1e-12 * std::max(1.0, ev.maxCoeff());
  if (ev.minCoeff() <= floor)
    throw Error(std::string("fit_cca: ") + view + " covariance is rank deficient (min eigenvalue " +
                std::to_string(ev.minCoeff()) + "); increase eps");
  return es.eigenvectors() * ev.cwiseInverse().cwiseSqrt().asDiagonal() * es.eigenvectors().transpose();
}

}  // namespace

CcaModel CcaModel::Fit(const Tensor &x, const Tensor &y, int k, double eps) {
  if (x.rows() != y.rows())
    throw Error("fit_cca: " + std::to_string(x.rows()) + " x samples vs " +
                std::to_string(y.rows()) + " y samples");
  if (x.rows() < 2) throw Error("fit_cca: need at least 2 samples");
  if (!(eps >= 0.0)) throw Error("fit_cca: eps must be >= 0");
  const std::size_t limit = std::min({x.cols(), y.cols(), x.rows()});
  if (k < 1 || static_cast<std::size_t>(k) > limit)
    throw Error("fit_cca: k=" + std::to_string(k) + " must lie in [1, " + std::to_string(limit) + "]");
  Mat X = ToEigen(x), Y = ToEigen(y);
  const Eigen::RowVectorXd mx = X.colwise().mean(), my = Y.colwise().mean();
  X.rowwise() -= mx;
  Y.rowwise() -= my;
  const double denom = static_cast<double>(x.rows() - 1);
  const Mat wxx = InverseSqrt(X.transpose() * X / denom, eps, "x");
  const Mat wyy = InverseSqrt(Y.transpose() * Y / denom, eps, "y");
  const Mat t = wxx * (X.transpose() * Y / denom) * wyy;
  Eigen::JacobiSVD<Mat> svd(t, Eigen::ComputeThinU | Eigen::ComputeThinV);
  CcaModel m;
  m.eps_ = eps;
  m.mean_x_.assign(mx.data(), mx.data() + mx.size());
  m.mean_y_.assign(my.data(), my.data() + my.size());
  m.wx_ = FromEigen(wxx * svd.matrixU().leftCols(k));
  m.wy_ = FromEigen(wyy * svd.matrixV().leftCols(k));
  for (int i = 0; i < k; ++i) m.corr_.push_back(svd.singularValues()(i));
  return m;
}

std::vector<double> CcaModel::Project(std::span<const double> v, const std::vector<double> &mean,
                                      const Tensor &w) const {
  if (v.size() != mean.size())
    throw Error("cca: vector dimension " + std::to_string(v.size()) + " != view dimension " +
                std::to_string(mean.size()));
  std::vector<double> centered(v.size());
  for (std::size_t i = 0; i < v.size(); ++i) centered[i] = v[i] - mean[i];
  std::vector<double> out(w.cols(), 0.0);
  kernels::GemvTransAcc(w.span(), w.rows(), w.cols(), centered, out);
  return out;
}

std::vector<double> CcaModel::ProjectX(std::span<const double> v) const { return Project(v, mean_x_, wx_); }
std::vector<double> CcaModel::ProjectY(std::span<const double> v) const { return Project(v, mean_y_, wy_); }

void CcaModel::Save(const std::string &path) const {
  std::vector<ad::CheckpointRecord> recs;
  recs.push_back({"cca.mean_x", Tensor::Column(mean_x_)});
  recs.push_back({"cca.mean_y", Tensor::Column(mean_y_)});
  recs.push_back({"cca.wx", wx_});
  recs.push_back({"cca.wy", wy_});
  recs.push_back({"cca.corr", Tensor::Column(corr_)});
  recs.push_back({"cca.eps", Tensor::Scalar(eps_)});
  ad::WriteCheckpoint(path, recs);
}

CcaModel CcaModel::Load(const std::string &path) {
  std::map<std::string, Tensor> by_name;
  for (auto &r : ad::ReadCheckpoint(path)) by_name[r.name] = std::move(r.value);
  auto get = [&](const std::string &name) -> const Tensor & {
    auto it = by_name.find(name);
    if (it == by_name.end()) throw Error(path + ": missing CCA record " + name);
    return it->second;
  };
  CcaModel m;
  m.mean_x_ = get("cca.mean_x").values();
  m.mean_y_ = get("cca.mean_y").values();
  m.wx_ = get("cca.wx");
  m.wy_ = get("cca.wy");
  m.corr_ = get("cca.corr").values();
  m.eps_ = get("cca.eps")[0];
  if (m.wx_.rows() != m.mean_x_.size() || m.wy_.rows() != m.mean_y_.size() ||
      m.wx_.cols() != m.corr_.size() || m.wy_.cols() != m.corr_.size())
    throw Error(path + ": inconsistent CCA shapes");
  return m;
}

CcaRetriever::CcaRetriever(const RetrievalCorpus &corpus, int k, double eps)
    : tfidf_(TfidfIndex::Fit(corpus)),
      cca_(CcaModel::Fit(tfidf_.dialogue_matrix(), tfidf_.narration_matrix(), k, eps)) {
  Build(corpus);
}

CcaRetriever::CcaRetriever(const RetrievalCorpus &corpus, CcaModel model)
    : tfidf_(TfidfIndex::Fit(corpus)), cca_(std::move(model)) {
  Build(corpus);
}

void CcaRetriever::Build(const RetrievalCorpus &corpus) {
  const Tensor &n = tfidf_.narration_matrix();
  projected_ = Tensor(n.rows(), static_cast<std::size_t>(cca_.k()));
  for (std::size_t i = 0; i < n.rows(); ++i)
    SetRow(projected_, i, cca_.ProjectY(n.span().subspan(i * n.cols(), n.cols())));
  fallback_ = corpus.fallback;
}

RetrievalHit CcaRetriever::Retrieve(const std::vector<std::string> &query) const {
  auto hit = NearestRow(projected_, cca_.ProjectX(tfidf_.Vectorize(query)));
  return hit ? *hit : Fallback(fallback_);
}

// Precomputed embeddings -----------------------------------------------------

void EmbeddingTable::Add(const std::string &id, std::vector<double> v) {
  if (v.empty()) throw Error("embedding table: empty vector for id '" + id + "'");
  if (rows_.empty()) dim_ = v.size();
  if (v.size() != dim_)
    throw Error("embedding table: id '" + id + "' has dimension " + std::to_string(v.size()) +
                ", table dimension is " + std::to_string(dim_));
  if (!index_.emplace(id, rows_.size()).second)
    throw Error("embedding table: duplicate id '" + id + "'");
  ids_.push_back(id);
  rows_.push_back(std::move(v));
}

EmbeddingTable EmbeddingTable::Load(const std::string &path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open embedding table " + path);
  EmbeddingTable t;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    std::istringstream fields(line);
    std::string id, cell;
    std::getline(fields, id, '\t');
    std::vector<double> v;
    while (std::getline(fields, cell, '\t')) {
      try {
        std::size_t used = 0;
        v.push_back(std::stod(cell, &used));
        if (used != cell.size()) throw std::invalid_argument(cell);
      } catch (const std::exception &) {
        throw Error(path + ":" + std::to_string(lineno) + ": bad number '" + cell + "'");
      }
    }
    try {
      t.Add(id, std::move(v));
    } catch (const Error &e) {
      throw Error(path + ":" + std::to_string(lineno) + ": " + e.what());
    }
  }
  if (t.size() == 0) throw Error(path + ": empty embedding table");
  return t;
}

std::span<const double> EmbeddingTable::Get(const std::string &id) const {
  auto it = index_.find(id);
  if (it == index_.end()) throw Error("embedding table: unknown id '" + id + "'");
  return rows_[it->second];
}

PrecomputedRetriever::PrecomputedRetriever(const RetrievalCorpus &corpus,
                                           const EmbeddingTable &dialogues)
    : table_(dialogues), matrix_(corpus.size(), dialogues.dim()), fallback_(corpus.fallback) {
  for (std::size_t i = 0; i < corpus.size(); ++i) {
    if (!dialogues.Has(corpus.ids[i]))
      throw Error("retrieve_precomputed: training instance " + corpus.ids[i] +
                  " missing from the dialogue table");
    auto v = dialogues.Get(corpus.ids[i]);
    SetRow(matrix_, i, std::vector<double>(v.begin(), v.end()));
  }
}

RetrievalHit PrecomputedRetriever::Retrieve(const std::string &query_id) const {
  return Retrieve(table_.Get(query_id));
}

RetrievalHit PrecomputedRetriever::Retrieve(std::span<const double> query) const {
  auto hit = NearestRow(matrix_, query);
  return hit ? *hit : Fallback(fallback_);
}

}  // namespace narb
