#include "embsvm/svm.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <limits>
#include <map>
#include <mutex>
#include <numeric>
#include <thread>

#include "embsvm/error.hpp"
#include "embsvm/metrics.hpp"
#include "embsvm/rng.hpp"

namespace embsvm {

void TrainConfig::validate() const {
  if (!(lambda > 0.0) || !std::isfinite(lambda)) throw ValidationError("lambda must be positive");
  if (!(tol > 0.0)) throw ValidationError("tol must be positive");
  if (max_iter == 0) throw ValidationError("max_iter must be positive");
}

namespace {

std::uint32_t check_problem(std::span<const SparseVector> x, std::span<const std::int8_t> y) {
  if (x.empty()) throw ValidationError("training set is empty");
  if (x.size() != y.size()) throw ValidationError("feature and label counts differ");
  const std::uint32_t dim = x.front().dim();
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (x[i].dim() != dim) {
      throw ValidationError("row " + std::to_string(i) + " has dim " + std::to_string(x[i].dim()) +
                            ", expected " + std::to_string(dim));
    }
    if (y[i] != 1 && y[i] != -1) throw ValidationError("binary labels must be +1 or -1");
  }
  return dim;
}

// argmin_b sum_i max(0, 1 - y_i (s_i + b)).
//
// Every hinge has one breakpoint (b = y_i - s_i) and crossing any breakpoint
// from left to right raises the slope by exactly one, starting at -#positives.
// The slope is therefore zero between the P-th and (P+1)-th smallest
// breakpoints; we return the midpoint, or the finite end of a half-line.
double optimal_bias(std::span<const double> scores, std::span<const std::int8_t> y) {
  const std::size_t n = scores.size();
  std::vector<double> bp(n);
  std::size_t positives = 0;
  for (std::size_t i = 0; i < n; ++i) {
    bp[i] = static_cast<double>(y[i]) - scores[i];
    positives += y[i] > 0 ? 1 : 0;
  }
  std::sort(bp.begin(), bp.end());
  if (positives == 0) return bp.front();
  if (positives == n) return bp.back();
  return 0.5 * (bp[positives - 1] + bp[positives]);
}

// Dual coordinate descent on
//
//   min_a  f(a) = 1/2 a'Qa - sum a,   Q_ij = y_i y_j x_i.x_j,   0 <= a_i <= C = 1/(lambda n)
//
// plus sum_i y_i a_i = 0 when a bias is fitted. w = sum_i a_i y_i x_i is kept
// in sync with a. All steps minimize f exactly along their direction, so the
// dual objective never decreases.
class DualSolver {
 public:
  DualSolver(std::span<const SparseVector> x, std::span<const std::int8_t> y,
             const TrainConfig& cfg, std::uint32_t dim)
      : x_(x),
        y_(y),
        cfg_(cfg),
        n_(x.size()),
        c_(1.0 / (cfg.lambda * static_cast<double>(x.size()))),
        alpha_(n_, 0.0),
        w_(dim, 0.0),
        qdiag_(n_),
        grad_(n_),
        rng_(cfg.seed) {
    for (std::size_t i = 0; i < n_; ++i) qdiag_[i] = x_[i].squared_norm();
  }

  BinaryModel run() {
    BinaryModel out;
    std::vector<std::size_t> order(n_);
    std::iota(order.begin(), order.end(), std::size_t{0});
    for (;;) {
      for (std::size_t i = 0; i < n_; ++i) grad_[i] = gradient(i);
      out.violation = cfg_.fit_bias ? pair_violation() : box_violation();
      if (out.violation <= cfg_.tol) {
        out.converged = true;
        break;
      }
      if (out.epochs == cfg_.max_iter) break;
      rng_.shuffle(std::span<std::size_t>(order));
      if (cfg_.fit_bias) {
        const std::vector<std::size_t> active = violating(order);
        greedy_pairs(active);
        free_partner_sweep(active);
      } else {
        for (std::size_t i : order) single_step(i);
      }
      ++out.epochs;
      if (cfg_.record_objective) out.dual_objective.push_back(dual_objective());
    }

    out.weights = w_;
    if (cfg_.fit_bias) {
      std::vector<double> scores(n_);
      for (std::size_t i = 0; i < n_; ++i) scores[i] = x_[i].dot(w_);
      out.bias = optimal_bias(scores, y_);
    }
    return out;
  }

 private:
  double gradient(std::size_t i) const { return y_[i] * x_[i].dot(w_) - 1.0; }

  bool in_up(std::size_t i) const { return y_[i] > 0 ? alpha_[i] < c_ : alpha_[i] > 0.0; }
  bool in_low(std::size_t i) const { return y_[i] > 0 ? alpha_[i] > 0.0 : alpha_[i] < c_; }

  // Largest projected gradient magnitude (box constraints only).
  double box_violation() const {
    double worst = 0.0;
    for (std::size_t i = 0; i < n_; ++i) {
      double pg = grad_[i];
      if (alpha_[i] == 0.0) pg = std::min(pg, 0.0);
      else if (alpha_[i] == c_) pg = std::max(pg, 0.0);
      worst = std::max(worst, std::abs(pg));
    }
    return worst;
  }

  // Maximal violating pair gap max_{up} -y G - min_{low} -y G.
  double pair_violation() const {
    double up = -std::numeric_limits<double>::infinity();
    double low = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < n_; ++i) {
      const double v = -y_[i] * grad_[i];
      if (in_up(i)) up = std::max(up, v);
      if (in_low(i)) low = std::min(low, v);
    }
    if (!std::isfinite(up) || !std::isfinite(low)) return 0.0;
    return std::max(0.0, up - low);
  }

  // Indices that take part in at least one violating pair under the gradients
  // of this epoch. Bound variables outside that range are skipped until a
  // later epoch brings them back; the stopping test always sees all of them.
  std::vector<std::size_t> violating(std::span<const std::size_t> order) const {
    double up = -std::numeric_limits<double>::infinity();
    double low = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < n_; ++i) {
      const double v = -y_[i] * grad_[i];
      if (in_up(i)) up = std::max(up, v);
      if (in_low(i)) low = std::min(low, v);
    }
    std::vector<std::size_t> out;
    out.reserve(order.size());
    for (std::size_t i : order) {
      const double v = -y_[i] * grad_[i];
      if ((in_up(i) && v > low) || (in_low(i) && v < up)) out.push_back(i);
    }
    return out;
  }

  // Pairs the k-th strongest violator of the up set with the k-th of the low
  // set, ranked by the gradients of this epoch. Steps recompute exact
  // gradients, so a pair that no longer violates just does nothing.
  void greedy_pairs(std::span<const std::size_t> order) {
    std::vector<std::pair<double, std::size_t>> up, low;
    for (std::size_t i : order) {
      const double v = -y_[i] * grad_[i];
      if (in_up(i)) up.emplace_back(v, i);
      if (in_low(i)) low.emplace_back(v, i);
    }
    std::stable_sort(up.begin(), up.end(), [](const auto& a, const auto& b) { return a.first > b.first; });
    std::stable_sort(low.begin(), low.end(), [](const auto& a, const auto& b) { return a.first < b.first; });
    const std::size_t pairs = std::min(up.size(), low.size());
    for (std::size_t k = 0; k < pairs; ++k) {
      if (up[k].first - low[k].first <= cfg_.tol) break;
      pair_step(up[k].second, low[k].second);
    }
  }

  // Each index steps against a random free variable. For a free j, -y_j G_j
  // is the current bias estimate, so this acts like a plain coordinate step
  // on i that stays feasible.
  void free_partner_sweep(std::span<const std::size_t> order) {
    std::vector<std::size_t> free;
    for (std::size_t i = 0; i < n_; ++i) {
      if (alpha_[i] > 0.0 && alpha_[i] < c_) free.push_back(i);
    }
    if (free.empty()) return;
    for (std::size_t i : order) pair_step(i, free[rng_.below(free.size())]);
  }

  void single_step(std::size_t i) {
    const double g = gradient(i);
    double next;
    if (qdiag_[i] > 0.0) {
      next = std::clamp(alpha_[i] - g / qdiag_[i], 0.0, c_);
    } else {
      next = g < 0.0 ? c_ : (g > 0.0 ? 0.0 : alpha_[i]);
    }
    const double delta = next - alpha_[i];
    if (delta == 0.0) return;
    alpha_[i] = next;
    x_[i].axpy_into(delta * y_[i], w_);
  }

  // Moves a_i by +y_i t and a_j by -y_j t, which keeps sum y a fixed, with t
  // the exact minimizer along that direction inside the box.
  void pair_step(std::size_t i, std::size_t j) {
    if (i == j) return;
    const double gi = gradient(i);
    const double gj = gradient(j);
    double curvature = qdiag_[i] + qdiag_[j] - 2.0 * x_[i].dot(x_[j]);
    if (curvature <= 1e-12) curvature = 1e-12;
    double t = -(y_[i] * gi - y_[j] * gj) / curvature;

    const double lo_i = y_[i] > 0 ? -alpha_[i] : alpha_[i] - c_;
    const double hi_i = y_[i] > 0 ? c_ - alpha_[i] : alpha_[i];
    const double lo_j = y_[j] > 0 ? alpha_[j] - c_ : -alpha_[j];
    const double hi_j = y_[j] > 0 ? alpha_[j] : c_ - alpha_[j];
    t = std::clamp(t, std::max(lo_i, lo_j), std::min(hi_i, hi_j));
    if (t == 0.0) return;

    alpha_[i] = snap(alpha_[i] + y_[i] * t);
    alpha_[j] = snap(alpha_[j] - y_[j] * t);
    x_[i].axpy_into(t, w_);
    x_[j].axpy_into(-t, w_);
  }

  double snap(double a) const {
    const double eps = 1e-12 * c_;
    if (a <= eps) return 0.0;
    if (a >= c_ - eps) return c_;
    return a;
  }

  // On the scale of J: lambda * (sum a - 1/2 |w|^2).
  double dual_objective() const {
    double sum_alpha = 0.0;
    for (double a : alpha_) sum_alpha += a;
    double wsq = 0.0;
    for (double v : w_) wsq += v * v;
    return cfg_.lambda * (sum_alpha - 0.5 * wsq);
  }

  std::span<const SparseVector> x_;
  std::span<const std::int8_t> y_;
  const TrainConfig& cfg_;
  std::size_t n_;
  double c_;
  std::vector<double> alpha_;
  std::vector<double> w_;
  std::vector<double> qdiag_;
  std::vector<double> grad_;
  Rng rng_;
};

}  // namespace

BinaryModel train_binary(std::span<const SparseVector> x, std::span<const std::int8_t> y,
                         const TrainConfig& cfg) {
  cfg.validate();
  const std::uint32_t dim = check_problem(x, y);
  return DualSolver(x, y, cfg, dim).run();
}

double primal_objective(std::span<const SparseVector> x, std::span<const std::int8_t> y,
                        std::span<const double> weights, double bias, double lambda) {
  double loss = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    loss += std::max(0.0, 1.0 - y[i] * (x[i].dot(weights) + bias));
  }
  double wsq = 0.0;
  for (double v : weights) wsq += v * v;
  return 0.5 * lambda * wsq + loss / static_cast<double>(x.size());
}

LinearModel::LinearModel(std::vector<std::string> labels, std::uint32_t feature_dim,
                         std::vector<float> weights, std::vector<float> biases, double lambda,
                         std::uint32_t fallback_index, bool has_bias)
    : labels_(std::move(labels)),
      feature_dim_(feature_dim),
      weights_(std::move(weights)),
      biases_(std::move(biases)),
      lambda_(lambda),
      fallback_(fallback_index),
      has_bias_(has_bias) {
  if (labels_.empty()) throw ValidationError("model needs at least one label");
  if (weights_.size() != labels_.size() * std::size_t{feature_dim_}) {
    throw ValidationError("weight matrix size does not match labels x feature_dim");
  }
  if (biases_.size() != labels_.size()) throw ValidationError("bias count does not match labels");
  if (fallback_ >= labels_.size()) throw ValidationError("fallback label index out of range");
  for (float v : weights_) {
    if (!std::isfinite(v)) throw ValidationError("non-finite model weight");
  }
  for (float v : biases_) {
    if (!std::isfinite(v)) throw ValidationError("non-finite model bias");
  }
}

std::vector<double> LinearModel::decision(const SparseVector& x) const {
  if (x.dim() != feature_dim_) {
    throw ValidationError("input dim " + std::to_string(x.dim()) + " does not match model dim " +
                          std::to_string(feature_dim_));
  }
  std::vector<double> scores(labels_.size());
  for (std::size_t c = 0; c < labels_.size(); ++c) {
    scores[c] = x.dot(weights(c)) + static_cast<double>(biases_[c]);
  }
  return scores;
}

LabelSet LinearModel::predict(const SparseVector& x) const {
  const auto scores = decision(x);
  LabelSet out;
  for (std::size_t c = 0; c < scores.size(); ++c) {
    if (scores[c] > 0.0) out.push_back(labels_[c]);
  }
  if (out.empty()) out.push_back(fallback_label());
  std::sort(out.begin(), out.end());
  return out;
}

std::size_t most_frequent_label(std::span<const LabelSet> y, std::span<const std::string> universe) {
  if (universe.empty()) throw ValidationError("label universe is empty");
  std::map<std::string, std::size_t> counts;
  for (const auto& l : universe) counts.emplace(l, 0);
  for (const auto& labels : y) {
    for (const auto& l : labels) {
      auto it = counts.find(l);
      if (it != counts.end()) ++it->second;
    }
  }
  std::size_t best = 0;
  for (std::size_t c = 1; c < universe.size(); ++c) {
    const std::size_t a = counts[universe[c]];
    const std::size_t b = counts[universe[best]];
    if (a > b || (a == b && universe[c] < universe[best])) best = c;
  }
  return best;
}

namespace {

// Trains the labels universe[picked[k]] (picked ascending, containing the
// fallback) after validating y against the whole universe.
LinearModel train_picked(std::span<const SparseVector> x, std::span<const LabelSet> y,
                         std::span<const std::string> universe, std::vector<std::size_t> picked,
                         const TrainConfig& cfg, unsigned threads) {
  cfg.validate();
  if (universe.empty()) throw ValidationError("label universe is empty");
  if (x.empty()) throw ValidationError("training set is empty");
  if (x.size() != y.size()) throw ValidationError("feature and label counts differ");
  {
    std::vector<std::string> sorted(universe.begin(), universe.end());
    std::sort(sorted.begin(), sorted.end());
    if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end()) {
      throw ValidationError("label universe contains duplicates");
    }
    for (const auto& labels : y) {
      for (const auto& l : labels) {
        if (!std::binary_search(sorted.begin(), sorted.end(), l)) {
          throw ValidationError("label \"" + l + "\" is not in the label universe");
        }
      }
    }
  }
  const std::uint32_t dim = x.front().dim();
  const std::size_t fallback = most_frequent_label(y, universe);
  picked.push_back(fallback);
  std::sort(picked.begin(), picked.end());
  picked.erase(std::unique(picked.begin(), picked.end()), picked.end());
  const std::size_t n_labels = picked.size();

  std::vector<BinaryModel> results(n_labels);
  auto train_label = [&](std::size_t c) {
    std::vector<std::int8_t> yc(x.size());
    for (std::size_t i = 0; i < x.size(); ++i) {
      yc[i] = std::binary_search(y[i].begin(), y[i].end(), universe[picked[c]]) ? 1 : -1;
    }
    TrainConfig label_cfg = cfg;
    label_cfg.seed = derive_seed(cfg.seed, universe[picked[c]]);
    results[c] = train_binary(x, yc, label_cfg);
  };

  const unsigned workers = std::max(1u, std::min<unsigned>(threads, static_cast<unsigned>(n_labels)));
  if (workers == 1) {
    for (std::size_t c = 0; c < n_labels; ++c) train_label(c);
  } else {
    std::atomic<std::size_t> next{0};
    std::exception_ptr failure;
    std::mutex failure_mutex;
    std::vector<std::jthread> pool;
    pool.reserve(workers);
    for (unsigned t = 0; t < workers; ++t) {
      pool.emplace_back([&] {
        for (std::size_t c = next++; c < n_labels; c = next++) {
          try {
            train_label(c);
          } catch (...) {
            std::lock_guard lock(failure_mutex);
            if (!failure) failure = std::current_exception();
          }
        }
      });
    }
    pool.clear();
    if (failure) std::rethrow_exception(failure);
  }

  std::vector<float> weights(n_labels * std::size_t{dim});
  std::vector<float> biases(n_labels);
  for (std::size_t c = 0; c < n_labels; ++c) {
    std::transform(results[c].weights.begin(), results[c].weights.end(),
                   weights.begin() + static_cast<std::ptrdiff_t>(c * dim),
                   [](double v) { return static_cast<float>(v); });
    biases[c] = static_cast<float>(results[c].bias);
  }
  std::vector<std::string> labels;
  for (std::size_t c : picked) labels.push_back(universe[c]);
  const auto fallback_index = static_cast<std::uint32_t>(
      std::lower_bound(picked.begin(), picked.end(), fallback) - picked.begin());
  return LinearModel(std::move(labels), dim, std::move(weights), std::move(biases), cfg.lambda,
                     fallback_index, cfg.fit_bias);
}

}  // namespace

LinearModel train_ovr(std::span<const SparseVector> x, std::span<const LabelSet> y,
                      std::span<const std::string> universe, const TrainConfig& cfg,
                      unsigned threads) {
  std::vector<std::size_t> all(universe.size());
  std::iota(all.begin(), all.end(), std::size_t{0});
  return train_picked(x, y, universe, std::move(all), cfg, threads);
}

LinearModel train_ovr_shard(std::span<const SparseVector> x, std::span<const LabelSet> y,
                            std::span<const std::string> universe,
                            std::span<const std::string> labels, const TrainConfig& cfg,
                            unsigned threads) {
  std::vector<std::size_t> picked;
  for (const auto& l : labels) {
    const auto it = std::find(universe.begin(), universe.end(), l);
    if (it == universe.end()) throw ValidationError("shard label \"" + l + "\" is not in the label universe");
    picked.push_back(static_cast<std::size_t>(it - universe.begin()));
  }
  return train_picked(x, y, universe, std::move(picked), cfg, threads);
}

std::vector<LabelSet> predict_all(const LinearModel& model, std::span<const SparseVector> x) {
  std::vector<LabelSet> out;
  out.reserve(x.size());
  for (const auto& row : x) out.push_back(model.predict(row));
  return out;
}

CrossValidation cross_validate_lambda(std::span<const SparseVector> x,
                                      std::span<const LabelSet> y,
                                      std::span<const std::string> universe,
                                      std::span<const double> grid, std::uint32_t folds,
                                      std::uint64_t seed, const TrainConfig& base,
                                      unsigned threads) {
  if (folds < 2) throw ValidationError("cross-validation needs at least 2 folds");
  if (grid.empty()) throw ValidationError("lambda grid is empty");
  if (x.size() != y.size()) throw ValidationError("feature and label counts differ");
  if (x.size() < folds) {
    throw ValidationError("fewer documents (" + std::to_string(x.size()) + ") than folds (" +
                          std::to_string(folds) + ")");
  }
  for (double l : grid) {
    if (!(l > 0.0) || !std::isfinite(l)) throw ValidationError("lambda grid values must be positive");
  }

  // Stratum of a document: its globally most frequent label.
  std::map<std::string, std::size_t> freq;
  for (const auto& labels : y) {
    for (const auto& l : labels) ++freq[l];
  }
  std::map<std::string, std::vector<std::size_t>> strata;
  for (std::size_t i = 0; i < y.size(); ++i) {
    std::string key;
    std::size_t best = 0;
    for (const auto& l : y[i]) {
      if (freq[l] > best) {  // labels are sorted, so ties keep the smaller one
        best = freq[l];
        key = l;
      }
    }
    strata[key].push_back(i);
  }
  Rng rng(seed);
  std::vector<std::uint32_t> fold_of(x.size());
  std::size_t dealt = 0;
  for (auto& [key, docs] : strata) {
    rng.shuffle(std::span<std::size_t>(docs));
    for (std::size_t i : docs) fold_of[i] = static_cast<std::uint32_t>(dealt++ % folds);
  }

  CrossValidation cv;
  cv.lambdas.assign(grid.begin(), grid.end());
  std::sort(cv.lambdas.begin(), cv.lambdas.end());
  cv.lambdas.erase(std::unique(cv.lambdas.begin(), cv.lambdas.end()), cv.lambdas.end());

  for (double lambda : cv.lambdas) {
    TrainConfig cfg = base;
    cfg.lambda = lambda;
    double total = 0.0;
    for (std::uint32_t f = 0; f < folds; ++f) {
      std::vector<SparseVector> xtr, xva;
      std::vector<LabelSet> ytr, yva;
      for (std::size_t i = 0; i < x.size(); ++i) {
        if (fold_of[i] == f) {
          xva.push_back(x[i]);
          yva.push_back(y[i]);
        } else {
          xtr.push_back(x[i]);
          ytr.push_back(y[i]);
        }
      }
      const LinearModel model = train_ovr(xtr, ytr, universe, cfg, threads);
      total += micro_f1(yva, predict_all(model, xva));
    }
    cv.mean_micro_f1.push_back(total / folds);
  }
  std::size_t best = 0;
  for (std::size_t k = 1; k < cv.lambdas.size(); ++k) {
    if (cv.mean_micro_f1[k] > cv.mean_micro_f1[best]) best = k;
  }
  cv.best_lambda = cv.lambdas[best];
  return cv;
}

LinearModel merge_models(std::span<const LinearModel> shards) {
  if (shards.empty()) throw ValidationError("nothing to merge");
  const LinearModel& first = shards.front();
  const std::string fallback = first.fallback_label();
  struct Row {
    std::span<const float> weights;
    float bias;
  };
  std::map<std::string, Row> rows;
  for (const auto& m : shards) {
    if (m.feature_dim() != first.feature_dim() || m.has_bias() != first.has_bias() ||
        m.lambda() != first.lambda()) {
      throw ValidationError("shards disagree on feature_dim, bias or lambda");
    }
    if (m.fallback_label() != fallback) throw ValidationError("shards disagree on fallback label");
    for (std::size_t c = 0; c < m.n_labels(); ++c) {
      const Row row{m.weights(c), m.biases()[c]};
      const auto [it, inserted] = rows.emplace(m.labels()[c], row);
      if (!inserted && (it->second.bias != row.bias ||
                        !std::equal(row.weights.begin(), row.weights.end(),
                                    it->second.weights.begin()))) {
        throw ValidationError("label \"" + m.labels()[c] + "\" differs between shards");
      }
    }
  }
  std::vector<std::string> labels;
  std::vector<float> weights;
  std::vector<float> biases;
  std::uint32_t fallback_index = 0;
  for (const auto& [label, row] : rows) {
    if (label == fallback) fallback_index = static_cast<std::uint32_t>(labels.size());
    labels.push_back(label);
    weights.insert(weights.end(), row.weights.begin(), row.weights.end());
    biases.push_back(row.bias);
  }
  return LinearModel(std::move(labels), first.feature_dim(), std::move(weights),
                     std::move(biases), first.lambda(), fallback_index, first.has_bias());
}

}  // namespace embsvm
