#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "embsvm/compose.hpp"
#include "embsvm/corpus.hpp"
#include "embsvm/embeddings.hpp"
#include "embsvm/metrics.hpp"
#include "embsvm/onehot.hpp"
#include "embsvm/svm.hpp"
#include "embsvm/vector_io.hpp"

namespace embsvm {

enum class Representation { Tfidf, Hash, Avg, Min, Max, Conc, TfidfConc, HashConc };

std::string_view to_string(Representation rep);
/// Accepts "tfidf", "hash", "avg", "min", "max", "conc", "tfidf+conc", "hash+conc".
std::optional<Representation> parse_representation(std::string_view name);
bool needs_embeddings(Representation rep) noexcept;
bool needs_tfidf(Representation rep) noexcept;

struct FeatureConfig {
  Representation representation = Representation::Tfidf;
  std::uint32_t hash_dim = kDefaultHashDim;
  bool normalize_tfidf = true;
  bool normalize_hash = false;
  bool scale_blocks = true;

  /// One-line "key=value" description embedded in output files.
  std::string describe() const;
};

struct FeatureMatrix {
  std::uint32_t dim = 0;
  std::optional<std::uint32_t> boundary;  // set for fused representations
  std::vector<SparseVector> rows;
};

/// Turns tokenized documents into feature vectors for one representation.
class Featurizer {
 public:
  /// Fits the tf-idf vocabulary on `train` when the representation needs it.
  /// Throws ValidationError if embeddings are required but `table` is null.
  static Featurizer fit(const FeatureConfig& cfg, const Corpus& train,
                        const EmbeddingTable* table);

  /// Uses an already fitted tf-idf model (required for tf-idf representations).
  Featurizer(const FeatureConfig& cfg, const EmbeddingTable* table,
             std::optional<TfidfModel> tfidf);

  FeatureMatrix transform(const Corpus& docs) const;
  SparseVector transform(const TokenizedDocument& doc) const;

  std::uint32_t dim() const noexcept;
  std::optional<std::uint32_t> boundary() const noexcept;
  const FeatureConfig& config() const noexcept { return cfg_; }
  const std::optional<TfidfModel>& tfidf() const noexcept { return tfidf_; }

 private:
  std::uint32_t sparse_dim() const noexcept;
  std::uint32_t dense_dim() const noexcept;

  FeatureConfig cfg_;
  const EmbeddingTable* table_ = nullptr;
  std::optional<TfidfModel> tfidf_;
};

VectorFile to_vector_file(const FeatureMatrix& features, const Corpus& docs,
                          std::vector<std::string> comments = {});

std::vector<std::size_t> document_lengths(const Corpus& docs);

struct ExperimentConfig {
  FeatureConfig features;
  TrainConfig train;
  std::vector<double> cv_grid;  // empty: use train.lambda as is
  std::uint32_t cv_folds = 5;
  unsigned threads = 1;
};

struct ExperimentResult {
  EvalReport report;
  LinearModel model;
  double lambda = 0.0;
  double train_seconds = 0.0;
};

/// Featurize, (optionally) select lambda, train one-vs-rest, predict and
/// evaluate on `test`. The label universe is the sorted training label set.
ExperimentResult run_experiment(const Corpus& train, const Corpus& test,
                                const ExperimentConfig& cfg, const EmbeddingTable* table);

struct CurvePoint {
  Representation representation = Representation::Tfidf;
  std::size_t size = 0;
  double micro_f1 = 0.0;
  double train_seconds = 0.0;
};

/// For each representation and size: subsample the training corpus with
/// `seed`, train and evaluate on the fixed test corpus.
std::vector<CurvePoint> learning_curve(const Corpus& train, const Corpus& test,
                                       const ExperimentConfig& cfg,
                                       const std::vector<Representation>& representations,
                                       const std::vector<std::size_t>& sizes,
                                       std::uint64_t seed, const EmbeddingTable* table);

struct SweepPoint {
  std::uint32_t dim = 0;
  double micro_f1 = 0.0;
  double train_seconds = 0.0;
};

/// Hashing representation evaluated at each dimension.
std::vector<SweepPoint> hash_sweep(const Corpus& train, const Corpus& test,
                                   const ExperimentConfig& cfg,
                                   const std::vector<std::uint32_t>& dims);

struct Significance {
  std::vector<double> scores_a;
  std::vector<double> scores_b;
  TTest test;
};

/// Micro-F1 of two representations over `repeats` seeded stratified splits
/// (seeds spec.seed, spec.seed + 1, ...), compared by a two-sided t-test.
Significance compare_representations(const Corpus& corpus, const SplitSpec& spec,
                                     std::uint32_t repeats, const ExperimentConfig& cfg,
                                     Representation a, Representation b,
                                     const EmbeddingTable* table);

std::string curve_to_csv(const std::vector<CurvePoint>& points, std::string_view config = {});
std::string sweep_to_csv(const std::vector<SweepPoint>& points, std::string_view config = {});

}  // namespace embsvm
