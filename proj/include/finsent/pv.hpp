#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "finsent/corpus.hpp"
#include "finsent/linalg.hpp"

namespace finsent {

struct PvConfig {
  int dim = 832;
  int epochs = 40;
  int window = 5;
  int negative = 5;
  double initial_rate = 0.025;
  double final_rate = 0.0001;
  std::uint32_t seed = 1;

  void validate() const;
  bool operator==(const PvConfig&) const = default;
};

struct PvWordVocab {
  std::vector<std::string> words;  // index -> word, lexicographic
  std::map<std::string, int> index;
  std::vector<std::int64_t> counts;

  int size() const { return static_cast<int>(words.size()); }
  bool operator==(const PvWordVocab&) const = default;
};

// Distributed-memory paragraph vectors trained with negative sampling.
// Training is single-threaded and fully determined by (corpus, config).
struct ParagraphVectorModel {
  PvConfig config;
  PvWordVocab vocab;
  RowMatrix input_word;   // |vocab| x dim, context side
  RowMatrix output_word;  // |vocab| x dim, negative-sampling side
  RowMatrix docs;         // one trained row per training document
  std::vector<double> epoch_mean_loss;  // mean negative-sampling loss per epoch

  // unigram^0.75 draw table; rebuilt from counts on load, not serialized
  std::vector<int> sampling_table;

  bool operator==(const ParagraphVectorModel& other) const {
    return config == other.config && vocab == other.vocab &&
           exact_equal(input_word, other.input_word) &&
           exact_equal(output_word, other.output_word) && exact_equal(docs, other.docs) &&
           epoch_mean_loss == other.epoch_mean_loss && sampling_table == other.sampling_table;
  }
};

std::vector<int> build_sampling_table(const std::vector<std::int64_t>& counts);

ParagraphVectorModel fit_pv(const std::vector<TokenSequence>& corpus, const PvConfig& config);

struct PvInference {
  DenseVector vector;
  bool all_oov = false;  // no token hit the vocabulary; vector is the seeded init
};

// Optimizes a fresh document vector against frozen word matrices for `steps`
// passes over the document.
PvInference infer_pv(const ParagraphVectorModel& model, const TokenSequence& doc, int steps,
                     std::uint32_t seed);

}  // namespace finsent
