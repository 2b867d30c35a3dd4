#pragma once

#include <cstdint>
#include <vector>

#include "embsvm/corpus.hpp"
#include "embsvm/embeddings.hpp"

namespace embsvm {

/// Seeded multi-label corpus with class-conditional token distributions and a
/// matching embedding table whose topic-word vectors cluster around a
/// per-class centroid.
struct SyntheticConfig {
  std::size_t n_docs = 5000;
  std::size_t n_classes = 20;
  std::uint32_t dim = 20;
  std::size_t topic_words_per_class = 60;
  std::size_t background_words = 3000;
  std::size_t min_length = 20;
  std::size_t max_length = 450;
  double topic_rate = 0.12;          // share of tokens drawn from the document's topics
  double centroid_scale = 1.0;
  double word_noise = 1.0;
  double extra_label_rate = 0.35;    // chance of each additional label (up to 3)
  double oov_rate = 0.1;             // share of vocabulary without an embedding
  std::uint64_t seed = 20160717;
};

struct SyntheticData {
  std::vector<RawDocument> docs;
  EmbeddingTable table;
};

SyntheticData make_synthetic(const SyntheticConfig& cfg);

}  // namespace embsvm
