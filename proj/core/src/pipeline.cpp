#include "embsvm/pipeline.hpp"

#include <chrono>
#include <cstdio>

#include "embsvm/error.hpp"
#include "embsvm/fusion.hpp"
#include "text_format.hpp"

namespace embsvm {

std::string_view to_string(Representation rep) {
  switch (rep) {
    case Representation::Tfidf: return "tfidf";
    case Representation::Hash: return "hash";
    case Representation::Avg: return "avg";
    case Representation::Min: return "min";
    case Representation::Max: return "max";
    case Representation::Conc: return "conc";
    case Representation::TfidfConc: return "tfidf+conc";
    case Representation::HashConc: return "hash+conc";
  }
  return "?";
}

std::optional<Representation> parse_representation(std::string_view name) {
  for (auto rep : {Representation::Tfidf, Representation::Hash, Representation::Avg,
                   Representation::Min, Representation::Max, Representation::Conc,
                   Representation::TfidfConc, Representation::HashConc}) {
    if (name == to_string(rep)) return rep;
  }
  return std::nullopt;
}

bool needs_embeddings(Representation rep) noexcept {
  return rep != Representation::Tfidf && rep != Representation::Hash;
}

bool needs_tfidf(Representation rep) noexcept {
  return rep == Representation::Tfidf || rep == Representation::TfidfConc;
}

namespace {

bool uses_hash(Representation rep) noexcept {
  return rep == Representation::Hash || rep == Representation::HashConc;
}

bool is_fused(Representation rep) noexcept {
  return rep == Representation::TfidfConc || rep == Representation::HashConc;
}

std::optional<Composition> composition_of(Representation rep) {
  switch (rep) {
    case Representation::Avg: return Composition::Avg;
    case Representation::Min: return Composition::Min;
    case Representation::Max: return Composition::Max;
    case Representation::Conc:
    case Representation::TfidfConc:
    case Representation::HashConc: return Composition::Conc;
    default: return std::nullopt;
  }
}

std::string seconds_text(double s) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.3f", s);
  return buf;
}

}  // namespace

std::string FeatureConfig::describe() const {
  std::string s = "representation=" + std::string(to_string(representation));
  if (uses_hash(representation)) s += " hash_dim=" + std::to_string(hash_dim);
  if (needs_tfidf(representation)) s += std::string(" normalize_tfidf=") + (normalize_tfidf ? "1" : "0");
  if (uses_hash(representation)) s += std::string(" normalize_hash=") + (normalize_hash ? "1" : "0");
  if (is_fused(representation)) s += std::string(" scale_blocks=") + (scale_blocks ? "1" : "0");
  return s;
}

Featurizer::Featurizer(const FeatureConfig& cfg, const EmbeddingTable* table,
                       std::optional<TfidfModel> tfidf)
    : cfg_(cfg), table_(table), tfidf_(std::move(tfidf)) {
  if (needs_embeddings(cfg_.representation) && table_ == nullptr) {
    throw ValidationError("representation " + std::string(to_string(cfg_.representation)) +
                          " requires an embedding table");
  }
  if (needs_tfidf(cfg_.representation)) {
    if (!tfidf_) throw ValidationError("tf-idf representations require a fitted tf-idf model");
    cfg_.normalize_tfidf = tfidf_->normalize();
  }
  if (uses_hash(cfg_.representation) && cfg_.hash_dim == 0) {
    throw ValidationError("hash dimension must be at least 1");
  }
}

Featurizer Featurizer::fit(const FeatureConfig& cfg, const Corpus& train,
                           const EmbeddingTable* table) {
  std::optional<TfidfModel> tfidf;
  if (needs_tfidf(cfg.representation)) tfidf = TfidfModel::fit(train, cfg.normalize_tfidf);
  return Featurizer(cfg, table, std::move(tfidf));
}

std::uint32_t Featurizer::sparse_dim() const noexcept {
  if (needs_tfidf(cfg_.representation)) return tfidf_->dim();
  if (uses_hash(cfg_.representation)) return cfg_.hash_dim;
  return 0;
}

std::uint32_t Featurizer::dense_dim() const noexcept {
  const auto mode = composition_of(cfg_.representation);
  if (!mode) return 0;
  return table_->dim() * (*mode == Composition::Conc ? 3u : 1u);
}

std::uint32_t Featurizer::dim() const noexcept { return sparse_dim() + dense_dim(); }

std::optional<std::uint32_t> Featurizer::boundary() const noexcept {
  if (is_fused(cfg_.representation)) return sparse_dim();
  return std::nullopt;
}

SparseVector Featurizer::transform(const TokenizedDocument& doc) const {
  const Representation rep = cfg_.representation;
  SparseVector sparse;
  if (needs_tfidf(rep)) {
    sparse = tfidf_->transform(doc.tokens);
  } else if (uses_hash(rep)) {
    sparse = hash_transform(doc.tokens, cfg_.hash_dim, cfg_.normalize_hash);
  }
  const auto mode = composition_of(rep);
  if (!mode) return sparse;
  const DenseVector dense = compose(doc, *table_, *mode).vector;
  if (is_fused(rep)) return fuse(sparse, dense, cfg_.scale_blocks).vector;
  return SparseVector::from_dense(dense);
}

FeatureMatrix Featurizer::transform(const Corpus& docs) const {
  FeatureMatrix m;
  m.dim = dim();
  m.boundary = boundary();
  m.rows.reserve(docs.size());
  for (const auto& d : docs) m.rows.push_back(transform(d));
  return m;
}

VectorFile to_vector_file(const FeatureMatrix& features, const Corpus& docs,
                          std::vector<std::string> comments) {
  if (features.rows.size() != docs.size()) {
    throw ValidationError("feature rows and documents differ in count");
  }
  VectorFile f;
  f.dim = features.dim;
  f.boundary = features.boundary;
  f.comments = std::move(comments);
  f.rows = features.rows;
  f.labels.reserve(docs.size());
  for (const auto& d : docs) f.labels.push_back(d.labels);
  return f;
}

std::vector<std::size_t> document_lengths(const Corpus& docs) {
  std::vector<std::size_t> lengths;
  lengths.reserve(docs.size());
  for (const auto& d : docs) lengths.push_back(d.tokens.size());
  return lengths;
}

ExperimentResult run_experiment(const Corpus& train, const Corpus& test,
                                const ExperimentConfig& cfg, const EmbeddingTable* table) {
  if (train.empty()) throw ValidationError("training corpus is empty");
  const auto universe = label_universe(train);
  if (universe.empty()) throw ValidationError("training corpus carries no labels");

  const Featurizer featurizer = Featurizer::fit(cfg.features, train, table);
  const FeatureMatrix xtr = featurizer.transform(train);
  std::vector<LabelSet> ytr;
  ytr.reserve(train.size());
  for (const auto& d : train) ytr.push_back(d.labels);

  ExperimentResult result;
  TrainConfig tc = cfg.train;
  if (!cfg.cv_grid.empty()) {
    tc.lambda = cross_validate_lambda(xtr.rows, ytr, universe, cfg.cv_grid, cfg.cv_folds,
                                      cfg.train.seed, cfg.train, cfg.threads)
                    .best_lambda;
  }
  result.lambda = tc.lambda;

  const auto start = std::chrono::steady_clock::now();
  result.model = train_ovr(xtr.rows, ytr, universe, tc, cfg.threads);
  result.train_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();

  const FeatureMatrix xte = featurizer.transform(test);
  std::vector<LabelSet> gold;
  gold.reserve(test.size());
  for (const auto& d : test) gold.push_back(d.labels);
  const auto pred = predict_all(result.model, xte.rows);
  result.report = evaluate(gold, pred, document_lengths(test), result.model.labels());
  return result;
}

std::vector<CurvePoint> learning_curve(const Corpus& train, const Corpus& test,
                                       const ExperimentConfig& cfg,
                                       const std::vector<Representation>& representations,
                                       const std::vector<std::size_t>& sizes,
                                       std::uint64_t seed, const EmbeddingTable* table) {
  for (std::size_t size : sizes) {
    if (size < 1 || size > train.size()) {
      throw ValidationError("learning-curve size " + std::to_string(size) +
                            " exceeds the training corpus (" + std::to_string(train.size()) + ")");
    }
  }
  std::vector<CurvePoint> points;
  for (Representation rep : representations) {
    ExperimentConfig run_cfg = cfg;
    run_cfg.features.representation = rep;
    for (std::size_t size : sizes) {
      const Corpus sample = subsample(train, size, seed);
      const auto r = run_experiment(sample, test, run_cfg, table);
      points.push_back({rep, size, r.report.micro_f1, r.train_seconds});
    }
  }
  return points;
}

std::vector<SweepPoint> hash_sweep(const Corpus& train, const Corpus& test,
                                   const ExperimentConfig& cfg,
                                   const std::vector<std::uint32_t>& dims) {
  for (auto d : dims) {
    if (d == 0) throw ValidationError("hash dimensions must be at least 1");
  }
  std::vector<SweepPoint> points;
  for (auto d : dims) {
    ExperimentConfig run_cfg = cfg;
    run_cfg.features.representation = Representation::Hash;
    run_cfg.features.hash_dim = d;
    const auto r = run_experiment(train, test, run_cfg, nullptr);
    points.push_back({d, r.report.micro_f1, r.train_seconds});
  }
  return points;
}

Significance compare_representations(const Corpus& corpus, const SplitSpec& spec,
                                     std::uint32_t repeats, const ExperimentConfig& cfg,
                                     Representation a, Representation b,
                                     const EmbeddingTable* table) {
  if (repeats < 2) throw ValidationError("significance testing needs at least 2 repeats");
  Significance s;
  for (std::uint32_t r = 0; r < repeats; ++r) {
    const auto [train, test] = stratified_split(corpus, SplitSpec{spec.train_fraction, spec.seed + r});
    ExperimentConfig ca = cfg, cb = cfg;
    ca.features.representation = a;
    cb.features.representation = b;
    s.scores_a.push_back(run_experiment(train, test, ca, table).report.micro_f1);
    s.scores_b.push_back(run_experiment(train, test, cb, table).report.micro_f1);
  }
  s.test = two_sided_t_test(s.scores_a, s.scores_b);
  return s;
}

std::string curve_to_csv(const std::vector<CurvePoint>& points, std::string_view config) {
  std::string out;
  if (!config.empty()) out += "# " + std::string(config) + "\n";
  out += "representation,size,micro_f1,train_seconds\n";
  for (const auto& p : points) {
    out += to_string(p.representation);
    out += ',' + std::to_string(p.size) + ',';
    detail::append_shortest(out, p.micro_f1);
    out += ',' + seconds_text(p.train_seconds) + '\n';
  }
  return out;
}

std::string sweep_to_csv(const std::vector<SweepPoint>& points, std::string_view config) {
  std::string out;
  if (!config.empty()) out += "# " + std::string(config) + "\n";
  out += "dim,micro_f1,train_seconds\n";
  for (const auto& p : points) {
    out += std::to_string(p.dim) + ',';
    detail::append_shortest(out, p.micro_f1);
    out += ',' + seconds_text(p.train_seconds) + '\n';
  }
  return out;
}

}  // namespace embsvm
