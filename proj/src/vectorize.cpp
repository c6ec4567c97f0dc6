#include "finsent/vectorize.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <set>

#include "finsent/errors.hpp"

namespace finsent {

void NgramConfig::validate() const {
  if (n_min < 1) throw ValidationError("n_min must be >= 1");
  if (n_max < n_min) throw ValidationError("n_max must be >= n_min");
  if (min_df < 1) throw ValidationError("min_df must be >= 1");
  if (max_features && *max_features < 1) throw ValidationError("max_features must be >= 1");
}

std::vector<std::string> extract_ngrams(const TokenSequence& doc, int n_min, int n_max) {
  std::vector<std::string> grams;
  const int len = static_cast<int>(doc.size());
  for (int n = n_min; n <= n_max; ++n) {
    for (int start = 0; start + n <= len; ++start) {
      std::string gram = doc[start];
      for (int k = 1; k < n; ++k) {
        gram += ' ';
        gram += doc[start + k];
      }
      grams.push_back(std::move(gram));
    }
  }
  return grams;
}

Vocabulary fit_ngram(const std::vector<TokenSequence>& corpus, const NgramConfig& config) {
  config.validate();
  if (corpus.empty()) throw ValidationError("cannot fit an n-gram vocabulary on an empty corpus");

  std::map<std::string, int> df;
  for (const auto& doc : corpus) {
    std::set<std::string> seen;
    for (auto& gram : extract_ngrams(doc, config.n_min, config.n_max)) seen.insert(std::move(gram));
    for (const auto& gram : seen) ++df[gram];
  }

  std::vector<std::pair<std::string, int>> retained;
  for (const auto& [term, count] : df)
    if (count >= config.min_df) retained.emplace_back(term, count);

  if (config.max_features && static_cast<int>(retained.size()) > *config.max_features) {
    // Most document-frequent first, lexicographic among equals.
    std::sort(retained.begin(), retained.end(), [](const auto& a, const auto& b) {
      if (a.second != b.second) return a.second > b.second;
      return a.first < b.first;
    });
    retained.resize(*config.max_features);
    std::sort(retained.begin(), retained.end());  // back to index order
  }

  Vocabulary vocab;
  vocab.config = config;
  vocab.num_docs = static_cast<int>(corpus.size());
  vocab.terms.reserve(retained.size());
  vocab.doc_freq.reserve(retained.size());
  for (const auto& [term, count] : retained) {
    vocab.index[term] = static_cast<int>(vocab.terms.size());
    vocab.terms.push_back(term);
    vocab.doc_freq.push_back(count);
  }
  return vocab;
}

SparseVector transform_ngram(const Vocabulary& vocab, const TokenSequence& doc) {
  std::map<int, double> counts;
  for (const auto& gram : extract_ngrams(doc, vocab.config.n_min, vocab.config.n_max)) {
    auto it = vocab.index.find(gram);
    if (it != vocab.index.end()) counts[it->second] += 1.0;
  }
  SparseVector v;
  v.dim = vocab.size();
  v.entries.assign(counts.begin(), counts.end());
  return v;
}

TfidfModel fit_tfidf(const std::vector<TokenSequence>& corpus, const NgramConfig& config) {
  TfidfModel model;
  model.vocabulary = fit_ngram(corpus, config);
  const int v = model.vocabulary.size();
  const double n = model.vocabulary.num_docs;
  model.idf.resize(v);
  for (int t = 0; t < v; ++t)
    model.idf[t] = std::log((1.0 + n) / (1.0 + model.vocabulary.doc_freq[t])) + 1.0;
  return model;
}

SparseVector transform_tfidf(const TfidfModel& model, const TokenSequence& doc) {
  SparseVector v = transform_ngram(model.vocabulary, doc);
  for (auto& [index, value] : v.entries) value *= model.idf[index];
  const double norm = std::sqrt(v.squared_norm());
  if (norm > 0.0) v.scale(1.0 / norm);
  return v;
}

}  // namespace finsent
