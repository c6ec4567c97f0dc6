#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "finsent/corpus.hpp"
#include "finsent/linalg.hpp"
#include "finsent/sparse.hpp"

namespace finsent {

struct NgramConfig {
  int n_min = 1;
  int n_max = 2;
  int min_df = 1;
  std::optional<int> max_features;

  void validate() const;  // throws ValidationError naming the bad field
  bool operator==(const NgramConfig&) const = default;
};

// Fitted n-gram vocabulary. Terms are space-joined word n-grams; indices are
// assigned lexicographically over the retained terms so fits do not depend on
// corpus order.
struct Vocabulary {
  NgramConfig config;
  std::vector<std::string> terms;    // index -> term, sorted
  std::map<std::string, int> index;  // term -> index
  std::vector<int> doc_freq;         // per index
  int num_docs = 0;

  int size() const { return static_cast<int>(terms.size()); }
  bool contains(const std::string& term) const { return index.count(term) > 0; }
  bool operator==(const Vocabulary&) const = default;
};

struct TfidfModel {
  Vocabulary vocabulary;
  DenseVector idf;  // idf[t] = ln((1 + N) / (1 + df(t))) + 1

  bool operator==(const TfidfModel& other) const {
    return vocabulary == other.vocabulary && exact_equal(idf, other.idf);
  }
};

std::vector<std::string> extract_ngrams(const TokenSequence& doc, int n_min, int n_max);

// Keeps every n-gram with document frequency >= min_df; if max_features is
// set, keeps the most document-frequent terms (ties broken lexicographically).
Vocabulary fit_ngram(const std::vector<TokenSequence>& corpus, const NgramConfig& config);

// Raw n-gram counts; out-of-vocabulary n-grams are ignored.
SparseVector transform_ngram(const Vocabulary& vocab, const TokenSequence& doc);

TfidfModel fit_tfidf(const std::vector<TokenSequence>& corpus, const NgramConfig& config);

// count * idf per term, then L2-normalized; an all-zero vector stays zero.
SparseVector transform_tfidf(const TfidfModel& model, const TokenSequence& doc);

}  // namespace finsent
