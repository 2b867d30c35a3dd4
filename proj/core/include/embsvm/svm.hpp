#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "embsvm/corpus.hpp"
#include "embsvm/sparse.hpp"

namespace embsvm {

/// Settings for the L2-regularized hinge-loss objective
///
///   J(w, b) = (lambda / 2) * ||w||^2 + (1 / n) * sum_i max(0, 1 - y_i (w . x_i + b))
///
/// Users of the C convention: lambda = 1 / (n * C). The bias is not regularized.
struct TrainConfig {
  double lambda = 1e-4;
  double tol = 1e-4;             // bound on the dual KKT violation
  std::uint32_t max_iter = 1000;  // epochs
  std::uint64_t seed = 0;
  bool fit_bias = true;
  bool record_objective = false;  // keep the per-epoch dual objective

  void validate() const;
};

struct BinaryModel {
  std::vector<double> weights;
  double bias = 0.0;
  std::uint32_t epochs = 0;
  double violation = 0.0;  // KKT violation when the solver stopped
  bool converged = false;
  /// Dual objective after each epoch, on the scale of J.
  std::vector<double> dual_objective;
};

/// Dual coordinate descent. Without a bias every step is a single-coordinate
/// exact minimization; with a bias the dual gains the constraint
/// sum_i y_i alpha_i = 0 and steps move pairs of coordinates: the ranked
/// violating pairs of each epoch, then every index against a seeded random
/// free (0 < alpha < C) partner. The returned bias minimizes J exactly for
/// the final weights.
///
/// y holds +1 / -1. Throws ValidationError on empty input, a length or
/// dimension mismatch, or labels outside {-1, +1}.
BinaryModel train_binary(std::span<const SparseVector> x, std::span<const std::int8_t> y,
                         const TrainConfig& cfg);

double primal_objective(std::span<const SparseVector> x, std::span<const std::int8_t> y,
                        std::span<const double> weights, double bias, double lambda);

/// One-vs-rest linear model. Weights are stored as float, the precision of the
/// model file, so in-memory and reloaded models predict identically.
class LinearModel {
 public:
  LinearModel() = default;
  LinearModel(std::vector<std::string> labels, std::uint32_t feature_dim,
              std::vector<float> weights, std::vector<float> biases, double lambda,
              std::uint32_t fallback_index, bool has_bias);

  std::span<const std::string> labels() const noexcept { return labels_; }
  std::size_t n_labels() const noexcept { return labels_.size(); }
  std::uint32_t feature_dim() const noexcept { return feature_dim_; }
  double lambda() const noexcept { return lambda_; }
  bool has_bias() const noexcept { return has_bias_; }
  std::uint32_t fallback_index() const noexcept { return fallback_; }
  const std::string& fallback_label() const { return labels_.at(fallback_); }

  std::span<const float> weights(std::size_t label) const {
    return {weights_.data() + label * feature_dim_, feature_dim_};
  }
  std::span<const float> all_weights() const noexcept { return weights_; }
  std::span<const float> biases() const noexcept { return biases_; }

  /// Per-label scores w_c . x + b_c in label order.
  std::vector<double> decision(const SparseVector& x) const;

  /// Labels with strictly positive score, or {fallback_label} if none.
  LabelSet predict(const SparseVector& x) const;

  friend bool operator==(const LinearModel&, const LinearModel&) = default;

 private:
  std::vector<std::string> labels_;
  std::uint32_t feature_dim_ = 0;
  std::vector<float> weights_;  // n_labels x feature_dim, row-major
  std::vector<float> biases_;
  double lambda_ = 0.0;
  std::uint32_t fallback_ = 0;
  bool has_bias_ = true;
};

/// Most frequent label of the training sets; ties go to the lexicographically
/// smallest. Labels that never occur count as zero.
std::size_t most_frequent_label(std::span<const LabelSet> y, std::span<const std::string> universe);

/// Binary relevance training: label c's problem has y_i = +1 iff c is in y[i].
/// Each label uses a seed derived from (cfg.seed, label name), so results do
/// not depend on label order or on the number of worker threads.
LinearModel train_ovr(std::span<const SparseVector> x, std::span<const LabelSet> y,
                      std::span<const std::string> universe, const TrainConfig& cfg,
                      unsigned threads = 1);

/// Trains only `labels` (a subset of `universe`) plus the universe's fallback
/// label, in universe order. Validation and the fallback use the whole
/// universe, so merging shards that cover it reproduces train_ovr.
LinearModel train_ovr_shard(std::span<const SparseVector> x, std::span<const LabelSet> y,
                            std::span<const std::string> universe,
                            std::span<const std::string> labels, const TrainConfig& cfg,
                            unsigned threads = 1);

/// Predictions for every row.
std::vector<LabelSet> predict_all(const LinearModel& model, std::span<const SparseVector> x);

struct CrossValidation {
  double best_lambda = 0.0;
  std::vector<double> lambdas;       // deduplicated grid, ascending
  std::vector<double> mean_micro_f1;  // per lambda
};

/// k-fold selection of one global lambda by mean validation micro-F1. Folds are
/// stratified by each document's globally most frequent label. Ties go to the
/// smaller lambda.
CrossValidation cross_validate_lambda(std::span<const SparseVector> x,
                                      std::span<const LabelSet> y,
                                      std::span<const std::string> universe,
                                      std::span<const double> grid, std::uint32_t folds,
                                      std::uint64_t seed, const TrainConfig& base,
                                      unsigned threads = 1);

/// Combines models trained on label shards of the same data. Labels repeated
/// across shards must carry identical parameters. The merged label list is
/// sorted and all shards must agree on the fallback label.
LinearModel merge_models(std::span<const LinearModel> shards);

}  // namespace embsvm
