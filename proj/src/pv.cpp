#include "finsent/pv.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <random>

#include "finsent/errors.hpp"
#include "finsent/rng.hpp"

namespace finsent {

void PvConfig::validate() const {
  if (dim < 1) throw ValidationError("pv dim must be >= 1");
  if (epochs < 1) throw ValidationError("pv epochs must be >= 1");
  if (window < 1) throw ValidationError("pv window must be >= 1");
  if (negative < 1) throw ValidationError("pv negative must be >= 1");
  if (!(initial_rate > final_rate && final_rate > 0.0))
    throw ValidationError("pv rates must satisfy initial_rate > final_rate > 0");
}

namespace {

constexpr int kSamplingTableSize = 1 << 20;

double sigmoid(double x) {
  if (x > 30.0) return 1.0;
  if (x < -30.0) return 0.0;
  return 1.0 / (1.0 + std::exp(-x));
}

double neg_log_sigmoid(double x) {
  // -log(sigmoid(x)), stable in both tails
  if (x > 30.0) return 0.0;
  if (x < -30.0) return -x;
  return std::log1p(std::exp(-x));
}

std::vector<std::vector<int>> to_word_ids(const std::vector<TokenSequence>& corpus,
                                          const PvWordVocab& vocab) {
  std::vector<std::vector<int>> ids(corpus.size());
  for (std::size_t d = 0; d < corpus.size(); ++d) {
    ids[d].reserve(corpus[d].size());
    for (const auto& tok : corpus[d]) {
      auto it = vocab.index.find(tok);
      if (it != vocab.index.end()) ids[d].push_back(it->second);
    }
  }
  return ids;
}

// One negative-sampling step against target `center` with hidden vector h.
// Returns the loss; the input-side gradient is accumulated into neu1e and the
// output matrix is updated in place (or left untouched for inference).
double ns_step(RowMatrix* output_word, const RowMatrix& output_const, int center, int negative,
               double alpha, const std::vector<int>& table, std::mt19937& rng,
               const DenseVector& h, DenseVector& neu1e) {
  double loss = 0.0;
  for (int k = 0; k <= negative; ++k) {
    int target;
    double label;
    if (k == 0) {
      target = center;
      label = 1.0;
    } else {
      target = table[bounded(rng, kSamplingTableSize)];
      if (target == center) continue;
      label = 0.0;
    }
    const auto row = output_const.row(target);
    const double f = row.dot(h);
    loss += label == 1.0 ? neg_log_sigmoid(f) : neg_log_sigmoid(-f);
    const double g = (label - sigmoid(f)) * alpha;
    neu1e += g * row.transpose();
    if (output_word) output_word->row(target) += g * h.transpose();
  }
  return loss;
}

}  // namespace

std::vector<int> build_sampling_table(const std::vector<std::int64_t>& counts) {
  std::vector<int> table(kSamplingTableSize);
  double total = 0.0;
  for (std::int64_t c : counts) total += std::pow(static_cast<double>(c), 0.75);

  int word = 0;
  double cumulative = std::pow(static_cast<double>(counts[0]), 0.75) / total;
  for (int i = 0; i < kSamplingTableSize; ++i) {
    table[i] = word;
    if ((i + 1.0) / kSamplingTableSize > cumulative && word + 1 < static_cast<int>(counts.size())) {
      ++word;
      cumulative += std::pow(static_cast<double>(counts[word]), 0.75) / total;
    }
  }
  return table;
}

// Distributed-memory training: each position predicts its center word from
// the mean of the document vector and the context word vectors, against the
// center plus `negative` draws from the unigram^0.75 table. The rate decays
// linearly from initial_rate to final_rate over all updates.
ParagraphVectorModel fit_pv(const std::vector<TokenSequence>& corpus, const PvConfig& config) {
  config.validate();
  if (corpus.empty()) throw ValidationError("cannot fit paragraph vectors on an empty corpus");

  ParagraphVectorModel model;
  model.config = config;

  std::map<std::string, std::int64_t> counts;
  for (const auto& doc : corpus)
    for (const auto& tok : doc) ++counts[tok];
  if (counts.empty())
    throw ValidationError("cannot fit paragraph vectors: corpus has no tokens");
  for (const auto& [word, count] : counts) {
    model.vocab.index[word] = static_cast<int>(model.vocab.words.size());
    model.vocab.words.push_back(word);
    model.vocab.counts.push_back(count);
  }
  model.sampling_table = build_sampling_table(model.vocab.counts);

  const int dim = config.dim;
  const int vocab_size = model.vocab.size();
  const int num_docs = static_cast<int>(corpus.size());

  std::mt19937 rng(config.seed);
  model.input_word.resize(vocab_size, dim);
  for (int w = 0; w < vocab_size; ++w)
    for (int j = 0; j < dim; ++j) model.input_word(w, j) = (uniform01(rng) - 0.5) / dim;
  model.docs.resize(num_docs, dim);
  for (int d = 0; d < num_docs; ++d)
    for (int j = 0; j < dim; ++j) model.docs(d, j) = (uniform01(rng) - 0.5) / dim;
  model.output_word = RowMatrix::Zero(vocab_size, dim);

  const auto doc_ids = to_word_ids(corpus, model.vocab);
  std::int64_t positions_per_epoch = 0;
  for (const auto& ids : doc_ids) positions_per_epoch += static_cast<std::int64_t>(ids.size());
  const double total_updates =
      static_cast<double>(positions_per_epoch) * static_cast<double>(config.epochs);

  DenseVector h(dim), neu1e(dim);
  std::int64_t update = 0;
  for (int epoch = 0; epoch < config.epochs; ++epoch) {
    double epoch_loss = 0.0;
    for (int d = 0; d < num_docs; ++d) {
      const auto& ids = doc_ids[d];
      const int len = static_cast<int>(ids.size());
      for (int pos = 0; pos < len; ++pos) {
        const double progress = static_cast<double>(update) / total_updates;
        const double alpha =
            std::max(config.final_rate,
                     config.initial_rate - (config.initial_rate - config.final_rate) * progress);

        const int lo = std::max(0, pos - config.window);
        const int hi = std::min(len - 1, pos + config.window);
        h = model.docs.row(d).transpose();
        int context = 1;
        for (int j = lo; j <= hi; ++j) {
          if (j == pos) continue;
          h += model.input_word.row(ids[j]).transpose();
          ++context;
        }
        h /= static_cast<double>(context);

        neu1e.setZero();
        epoch_loss += ns_step(&model.output_word, model.output_word, ids[pos], config.negative,
                              alpha, model.sampling_table, rng, h, neu1e);

        model.docs.row(d) += neu1e.transpose();
        for (int j = lo; j <= hi; ++j)
          if (j != pos) model.input_word.row(ids[j]) += neu1e.transpose();
        ++update;
      }
    }
    model.epoch_mean_loss.push_back(positions_per_epoch > 0
                                        ? epoch_loss / static_cast<double>(positions_per_epoch)
                                        : 0.0);
  }

  if (!model.input_word.allFinite() || !model.output_word.allFinite() || !model.docs.allFinite())
    throw std::runtime_error("paragraph-vector training produced non-finite values");
  return model;
}

PvInference infer_pv(const ParagraphVectorModel& model, const TokenSequence& doc, int steps,
                     std::uint32_t seed) {
  if (steps < 1) throw ValidationError("infer_pv steps must be >= 1");
  const PvConfig& config = model.config;
  const int dim = config.dim;

  std::mt19937 rng(seed);
  PvInference result;
  result.vector.resize(dim);
  for (int j = 0; j < dim; ++j) result.vector[j] = (uniform01(rng) - 0.5) / dim;

  std::vector<int> ids;
  for (const auto& tok : doc) {
    auto it = model.vocab.index.find(tok);
    if (it != model.vocab.index.end()) ids.push_back(it->second);
  }
  if (ids.empty()) {
    result.all_oov = true;
    return result;
  }

  const int len = static_cast<int>(ids.size());
  const double total_updates = static_cast<double>(steps) * static_cast<double>(len);
  DenseVector h(dim), neu1e(dim);
  std::int64_t update = 0;
  for (int step = 0; step < steps; ++step) {
    for (int pos = 0; pos < len; ++pos) {
      const double progress = static_cast<double>(update) / total_updates;
      const double alpha =
          std::max(config.final_rate,
                   config.initial_rate - (config.initial_rate - config.final_rate) * progress);

      const int lo = std::max(0, pos - config.window);
      const int hi = std::min(len - 1, pos + config.window);
      h = result.vector;
      int context = 1;
      for (int j = lo; j <= hi; ++j) {
        if (j == pos) continue;
        h += model.input_word.row(ids[j]).transpose();
        ++context;
      }
      h /= static_cast<double>(context);

      neu1e.setZero();
      ns_step(nullptr, model.output_word, ids[pos], config.negative, alpha, model.sampling_table,
              rng, h, neu1e);
      result.vector += neu1e;
      ++update;
    }
  }
  return result;
}

}  // namespace finsent
