#include "cli_app.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <charconv>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <json.hpp>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include "embsvm/corpus.hpp"
#include "embsvm/embeddings.hpp"
#include "embsvm/error.hpp"
#include "embsvm/metrics.hpp"
#include "embsvm/model_io.hpp"
#include "embsvm/onehot.hpp"
#include "embsvm/pipeline.hpp"
#include "embsvm/svm.hpp"
#include "embsvm/synthetic.hpp"
#include "embsvm/vector_io.hpp"

namespace embsvm::cli {
namespace {

namespace fs = std::filesystem;
using json = nlohmann::ordered_json;

struct FeatureArgs {
  std::string representation = "tfidf";
  std::uint32_t hash_dim = kDefaultHashDim;
  bool normalize_tfidf = true;
  bool normalize_hash = false;
  bool scale_blocks = true;
  std::string embeddings;

  FeatureConfig config(const std::string& rep_name) const {
    FeatureConfig cfg;
    const auto rep = parse_representation(rep_name);
    if (!rep) throw ValidationError("unknown representation '" + rep_name + "'");
    cfg.representation = *rep;
    cfg.hash_dim = hash_dim;
    cfg.normalize_tfidf = normalize_tfidf;
    cfg.normalize_hash = normalize_hash;
    cfg.scale_blocks = scale_blocks;
    return cfg;
  }
  FeatureConfig config() const { return config(representation); }
};

struct TrainArgs {
  double lambda = 1e-4;
  std::vector<double> cv_grid;
  std::uint32_t cv_folds = 5;
  double tol = 1e-4;
  std::uint32_t max_iter = 1000;
  bool no_bias = false;
  unsigned threads = 1;

  TrainConfig config(std::uint64_t seed) const {
    TrainConfig cfg;
    cfg.lambda = lambda;
    cfg.tol = tol;
    cfg.max_iter = max_iter;
    cfg.seed = seed;
    cfg.fit_bias = !no_bias;
    cfg.validate();
    return cfg;
  }

  ExperimentConfig experiment(const FeatureConfig& features, std::uint64_t seed) const {
    ExperimentConfig cfg;
    cfg.features = features;
    cfg.train = config(seed);
    cfg.cv_grid = cv_grid;
    cfg.cv_folds = cv_folds;
    cfg.threads = threads;
    return cfg;
  }

  std::string describe(std::uint64_t seed) const {
    std::ostringstream s;
    s << std::setprecision(17);
    if (cv_grid.empty()) {
      s << "lambda=" << lambda;
    } else {
      s << "cv_grid=";
      for (std::size_t i = 0; i < cv_grid.size(); ++i) s << (i ? "," : "") << cv_grid[i];
      s << " cv_folds=" << cv_folds;
    }
    s << " tol=" << tol << " max_iter=" << max_iter << " fit_bias=" << (no_bias ? 0 : 1)
      << " seed=" << seed;
    return s.str();
  }
};

void add_feature_options(CLI::App* cmd, FeatureArgs& a) {
  cmd->add_option("--embeddings", a.embeddings, "word2vec text embedding file");
  cmd->add_option("--hash-dim", a.hash_dim, "hashing dimension")->capture_default_str();
  cmd->add_option("--normalize-tfidf", a.normalize_tfidf, "L2-normalize tf-idf rows (true/false)")
      ->capture_default_str();
  cmd->add_option("--normalize-hash", a.normalize_hash, "L2-normalize hashed rows (true/false)")
      ->capture_default_str();
  cmd->add_option("--scale-blocks", a.scale_blocks,
                  "scale each block of a fused vector to unit norm (true/false)")
      ->capture_default_str();
}

void add_train_options(CLI::App* cmd, TrainArgs& a) {
  cmd->add_option("--lambda", a.lambda, "regularization weight")->capture_default_str();
  cmd->add_option("--cv-grid", a.cv_grid, "comma-separated lambdas chosen by cross validation")
      ->delimiter(',');
  cmd->add_option("--cv-folds", a.cv_folds, "cross-validation folds")->capture_default_str();
  cmd->add_option("--tol", a.tol, "solver tolerance")->capture_default_str();
  cmd->add_option("--max-iter", a.max_iter, "solver epoch limit")->capture_default_str();
  cmd->add_flag("--no-bias", a.no_bias, "train without an intercept");
  cmd->add_option("--threads", a.threads, "worker threads for one-vs-rest training")
      ->capture_default_str();
}

std::ofstream open_output(const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot open '" + path + "' for writing");
  return out;
}

void write_text(const std::string& path, std::string_view text) {
  auto out = open_output(path);
  out << text;
  if (!out) throw IoError("write failed: " + path);
}

Corpus read_tokenized(const std::string& path, bool require_labels, std::size_t min_count = 1) {
  const auto raw = read_corpus(fs::path(path), require_labels);
  Corpus docs = tokenize(raw);
  if (min_count > 1) docs = filter_min_count(docs, min_count);
  return docs;
}

std::optional<EmbeddingTable> load_embeddings(const std::string& path, std::ostream& err) {
  if (path.empty()) return std::nullopt;
  EmbeddingLoad load = load_word2vec_text(fs::path(path));
  if (load.duplicates > 0) {
    err << "warning: " << load.duplicates << " duplicate token(s) in " << path
        << ", last occurrence kept\n";
  }
  return std::move(load.table);
}

const EmbeddingTable* table_for(const FeatureConfig& cfg, const std::optional<EmbeddingTable>& t) {
  if (needs_embeddings(cfg.representation) && !t) {
    throw ValidationError("representation " + std::string(to_string(cfg.representation)) +
                          " requires --embeddings");
  }
  return t ? &*t : nullptr;
}

std::vector<LabelSet> labels_of(const Corpus& docs) {
  std::vector<LabelSet> out;
  out.reserve(docs.size());
  for (const auto& d : docs) out.push_back(d.labels);
  return out;
}

std::vector<std::string> universe_of(std::span<const LabelSet> labels) {
  std::vector<std::string> out;
  for (const auto& set : labels) out.insert(out.end(), set.begin(), set.end());
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

std::pair<std::uint32_t, std::uint32_t> parse_shard(const std::string& text) {
  const auto slash = text.find('/');
  std::uint32_t i = 0, k = 0;
  const char* b = text.data();
  const char* e = text.data() + text.size();
  if (slash == std::string::npos ||
      std::from_chars(b, b + slash, i).ptr != b + slash ||
      std::from_chars(b + slash + 1, e, k).ptr != e || k == 0 || i >= k) {
    throw ValidationError("--label-shard expects i/k with 0 <= i < k, got '" + text + "'");
  }
  return {i, k};
}

struct SplitArgs {
  std::string corpus, train, test;
  double train_fraction = 8.0 / 9.0;
  std::uint64_t seed = 0;
};

int cmd_split(const SplitArgs& a, std::ostream& out) {
  const SplitSpec spec{a.train_fraction, a.seed};
  spec.validate();
  const auto docs = read_corpus(fs::path(a.corpus));
  const auto [train, test] = stratified_split<RawDocument>(std::span<const RawDocument>(docs), spec);
  write_corpus(fs::path(a.train), train);
  write_corpus(fs::path(a.test), test);

  std::vector<LabelSet> all;
  for (const auto& d : docs) all.push_back(d.labels);
  const auto universe = universe_of(all);
  auto count = [&](const std::vector<RawDocument>& part, const std::string& label) {
    std::size_t n = 0;
    for (const auto& d : part) n += std::binary_search(d.labels.begin(), d.labels.end(), label);
    return n;
  };
  out << "# split train_fraction=" << std::setprecision(17) << a.train_fraction
      << " seed=" << a.seed << " train=" << train.size() << " test=" << test.size() << '\n';
  out << "label\tcorpus\ttrain\ttest\n";
  for (const auto& label : universe) {
    const std::size_t tr = count(train, label), te = count(test, label);
    out << label << '\t' << tr + te << '\t' << tr << '\t' << te << '\n';
  }
  return 0;
}

struct VectorizeArgs {
  std::string corpus, out, tfidf_model;
  FeatureArgs features;
  bool fit_tfidf = false;
  std::optional<std::uint32_t> dim_check;
  std::size_t min_count = 1;
};

int cmd_vectorize(const VectorizeArgs& a, std::ostream& out, std::ostream& err) {
  const FeatureConfig cfg = a.features.config();
  const auto table = load_embeddings(a.features.embeddings, err);
  const Corpus docs = read_tokenized(a.corpus, false, a.min_count);

  std::optional<TfidfModel> tfidf;
  if (needs_tfidf(cfg.representation)) {
    if (a.tfidf_model.empty()) {
      throw ValidationError("tf-idf representations need --tfidf-model (with --fit-tfidf to create it)");
    }
    if (a.fit_tfidf) {
      tfidf = TfidfModel::fit(docs, cfg.normalize_tfidf);
      auto f = open_output(a.tfidf_model);
      tfidf->save(f);
      if (!f) throw IoError("write failed: " + a.tfidf_model);
    } else {
      std::ifstream f(a.tfidf_model, std::ios::binary);
      if (!f) throw IoError("cannot open '" + a.tfidf_model + "'");
      tfidf = TfidfModel::load(f, a.tfidf_model);
    }
  } else if (a.fit_tfidf) {
    throw ValidationError("--fit-tfidf only applies to tf-idf representations");
  }

  const Featurizer featurizer(cfg, table_for(cfg, table), std::move(tfidf));
  if (a.dim_check && *a.dim_check != featurizer.dim()) {
    throw ValidationError("feature dimension " + std::to_string(featurizer.dim()) +
                          " does not match --dim-check " + std::to_string(*a.dim_check));
  }
  const FeatureMatrix x = featurizer.transform(docs);
  std::vector<std::string> comments = {"config " + featurizer.config().describe() +
                                       (a.min_count > 1 ? " min_count=" + std::to_string(a.min_count) : "")};
  write_vector_file(fs::path(a.out), to_vector_file(x, docs, std::move(comments)));
  out << "wrote " << x.rows.size() << " rows, dim " << x.dim;
  if (x.boundary) out << ", boundary " << *x.boundary;
  out << '\n';
  return 0;
}

struct TrainCmdArgs {
  std::string train, model, label_shard;
  TrainArgs train_args;
  std::uint64_t seed = 0;
};

int cmd_train(const TrainCmdArgs& a, std::ostream& out) {
  const VectorFile data = read_vector_file(fs::path(a.train));
  if (data.rows.empty()) throw ValidationError("training file has no rows");
  const auto universe = universe_of(data.labels);
  if (universe.empty()) throw ValidationError("training file carries no labels");

  TrainConfig cfg = a.train_args.config(a.seed);
  if (!a.train_args.cv_grid.empty()) {
    const auto cv = cross_validate_lambda(data.rows, data.labels, universe, a.train_args.cv_grid,
                                          a.train_args.cv_folds, a.seed, cfg, a.train_args.threads);
    out << "lambda\tmean_micro_f1\n" << std::setprecision(17);
    for (std::size_t i = 0; i < cv.lambdas.size(); ++i) {
      out << cv.lambdas[i] << '\t' << cv.mean_micro_f1[i] << '\n';
    }
    cfg.lambda = cv.best_lambda;
  }

  LinearModel model;
  if (a.label_shard.empty()) {
    model = train_ovr(data.rows, data.labels, universe, cfg, a.train_args.threads);
  } else {
    const auto [i, k] = parse_shard(a.label_shard);
    std::vector<std::string> labels;
    for (std::size_t c = i; c < universe.size(); c += k) labels.push_back(universe[c]);
    model = train_ovr_shard(data.rows, data.labels, universe, labels, cfg, a.train_args.threads);
  }
  save_model(fs::path(a.model), model);
  out << "# train " << a.train_args.describe(a.seed) << std::setprecision(17)
      << " selected_lambda=" << cfg.lambda << '\n';
  out << "trained " << model.n_labels() << " labels, dim " << model.feature_dim()
      << ", fallback " << model.fallback_label() << '\n';
  return 0;
}

struct PredictArgs {
  std::string test, model, out;
};

int cmd_predict(const PredictArgs& a, std::ostream& out) {
  const LinearModel model = load_model(fs::path(a.model));
  const VectorFile data = read_vector_file(fs::path(a.test));
  if (data.dim != model.feature_dim()) {
    throw ValidationError("vector dim " + std::to_string(data.dim) + " does not match model dim " +
                          std::to_string(model.feature_dim()));
  }
  const auto pred = predict_all(model, data.rows);
  auto f = open_output(a.out);
  for (std::size_t i = 0; i < pred.size(); ++i) {
    f << json{{"row", i}, {"labels", pred[i]}}.dump() << '\n';
  }
  if (!f) throw IoError("write failed: " + a.out);
  out << "wrote " << pred.size() << " predictions\n";
  return 0;
}

std::vector<LabelSet> read_predictions(const std::string& path, std::size_t expected) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open '" + path + "'");
  std::vector<LabelSet> out;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    try {
      const auto j = json::parse(line);
      const auto row = j.at("row").get<std::size_t>();
      if (row != out.size()) throw ParseError(path, line_no, "rows must be numbered 0, 1, 2, ...");
      auto labels = j.at("labels").get<LabelSet>();
      std::sort(labels.begin(), labels.end());
      labels.erase(std::unique(labels.begin(), labels.end()), labels.end());
      out.push_back(std::move(labels));
    } catch (const json::exception& e) {
      throw ParseError(path, line_no, e.what());
    }
  }
  if (out.size() != expected) {
    throw ValidationError(path + " has " + std::to_string(out.size()) + " predictions for " +
                          std::to_string(expected) + " documents");
  }
  return out;
}

struct EvaluateArgs {
  std::string corpus, predictions, model, out, buckets_csv;
};

int cmd_evaluate(const EvaluateArgs& a, std::ostream& out) {
  const Corpus docs = read_tokenized(a.corpus, true);
  const auto gold = labels_of(docs);
  const auto pred = read_predictions(a.predictions, docs.size());
  std::vector<std::string> universe;
  if (!a.model.empty()) {
    const LinearModel model = load_model(fs::path(a.model));
    universe.assign(model.labels().begin(), model.labels().end());
  } else {
    std::vector<LabelSet> both = gold;
    both.insert(both.end(), pred.begin(), pred.end());
    universe = universe_of(both);
  }
  const EvalReport report = evaluate(gold, pred, document_lengths(docs), universe);
  const std::string config = "evaluate corpus=" + fs::path(a.corpus).filename().string() +
                             " predictions=" + fs::path(a.predictions).filename().string();
  write_text(a.out, report_to_json(report, config));
  if (!a.buckets_csv.empty()) write_text(a.buckets_csv, "# " + config + "\n" + buckets_to_csv(report));
  out << std::setprecision(6) << "micro_f1=" << report.micro_f1 << " macro_f1=" << report.macro_f1
      << " tp=" << report.totals.tp << " fp=" << report.totals.fp << " fn=" << report.totals.fn
      << '\n';
  if (report.unknown_gold_labels > 0) {
    out << report.unknown_gold_labels << " gold label occurrence(s) unknown to the model, counted as fn\n";
  }
  return 0;
}

struct CurveArgs {
  std::string train, test, out;
  std::vector<std::string> representations;
  std::vector<std::size_t> sizes;
  FeatureArgs features;
  TrainArgs train_args;
  std::uint64_t seed = 0;
};

// Sizes proportional to 1, 50, 100, 150 and 200 thousand out of 200 thousand.
std::vector<std::size_t> default_sizes(std::size_t n) {
  std::vector<std::size_t> out;
  for (double f : {1.0 / 200.0, 0.25, 0.5, 0.75, 1.0}) {
    const auto s = std::max<std::size_t>(1, static_cast<std::size_t>(std::llround(f * static_cast<double>(n))));
    if (out.empty() || out.back() != s) out.push_back(s);
  }
  return out;
}

int cmd_learning_curve(const CurveArgs& a, std::ostream& out, std::ostream& err) {
  const Corpus train = read_tokenized(a.train, true);
  const Corpus test = read_tokenized(a.test, true);
  const auto table = load_embeddings(a.features.embeddings, err);
  std::vector<Representation> reps;
  for (const auto& name : a.representations) {
    const FeatureConfig fc = a.features.config(name);
    table_for(fc, table);
    reps.push_back(fc.representation);
  }
  const auto sizes = a.sizes.empty() ? default_sizes(train.size()) : a.sizes;
  const auto cfg = a.train_args.experiment(a.features.config(a.representations.front()), a.seed);
  const auto points = learning_curve(train, test, cfg, reps, sizes, a.seed, table ? &*table : nullptr);

  std::string config = "learning-curve " + a.train_args.describe(a.seed);
  config += " hash_dim=" + std::to_string(a.features.hash_dim);
  config += std::string(" normalize_tfidf=") + (a.features.normalize_tfidf ? "1" : "0");
  config += std::string(" normalize_hash=") + (a.features.normalize_hash ? "1" : "0");
  config += std::string(" scale_blocks=") + (a.features.scale_blocks ? "1" : "0");
  const std::string csv = curve_to_csv(points, config);
  if (a.out.empty()) out << csv;
  else write_text(a.out, csv);
  return 0;
}

struct SweepArgs {
  std::string train, test, out;
  std::vector<std::uint32_t> dims = {100, 1000, 10000, 70000};
  FeatureArgs features;
  TrainArgs train_args;
  std::uint64_t seed = 0;
};

int cmd_hash_sweep(const SweepArgs& a, std::ostream& out) {
  const Corpus train = read_tokenized(a.train, true);
  const Corpus test = read_tokenized(a.test, true);
  const auto cfg = a.train_args.experiment(a.features.config("hash"), a.seed);
  const auto points = hash_sweep(train, test, cfg, a.dims);
  const std::string config = "hash-sweep " + a.train_args.describe(a.seed) +
                             " normalize_hash=" + (a.features.normalize_hash ? "1" : "0");
  const std::string csv = sweep_to_csv(points, config);
  if (a.out.empty()) out << csv;
  else write_text(a.out, csv);
  return 0;
}

struct SignificanceArgs {
  std::string corpus, out;
  std::vector<std::string> representations;
  double train_fraction = 8.0 / 9.0;
  std::uint32_t repeats = 5;
  FeatureArgs features;
  TrainArgs train_args;
  std::uint64_t seed = 0;
};

int cmd_significance(const SignificanceArgs& a, std::ostream& out, std::ostream& err) {
  if (a.representations.size() != 2) {
    throw ValidationError("significance compares exactly two representations");
  }
  const Corpus corpus = read_tokenized(a.corpus, true);
  const auto table = load_embeddings(a.features.embeddings, err);
  const FeatureConfig fa = a.features.config(a.representations[0]);
  const FeatureConfig fb = a.features.config(a.representations[1]);
  table_for(fa, table);
  table_for(fb, table);
  const SplitSpec spec{a.train_fraction, a.seed};
  spec.validate();
  const auto cfg = a.train_args.experiment(fa, a.seed);
  const auto s = compare_representations(corpus, spec, a.repeats, cfg, fa.representation,
                                         fb.representation, table ? &*table : nullptr);
  json j;
  j["config"] = "significance " + a.train_args.describe(a.seed) + " repeats=" +
                std::to_string(a.repeats);
  j["a"] = {{"representation", a.representations[0]}, {"micro_f1", s.scores_a}};
  j["b"] = {{"representation", a.representations[1]}, {"micro_f1", s.scores_b}};
  j["t"] = s.test.t;
  j["p"] = s.test.p;
  const std::string text = j.dump(2) + "\n";
  if (a.out.empty()) out << text;
  else write_text(a.out, text);
  return 0;
}

struct MergeArgs {
  std::vector<std::string> inputs;
  std::string out;
};

int cmd_merge(const MergeArgs& a, std::ostream& out) {
  std::vector<LinearModel> shards;
  for (const auto& path : a.inputs) shards.push_back(load_model(fs::path(path)));
  const LinearModel merged = merge_models(shards);
  save_model(fs::path(a.out), merged);
  out << "merged " << shards.size() << " shard(s) into " << merged.n_labels() << " labels\n";
  return 0;
}

struct SynthArgs {
  std::string corpus, embeddings;
  SyntheticConfig cfg;
};

int cmd_synth(const SynthArgs& a, std::ostream& out) {
  const SyntheticData data = make_synthetic(a.cfg);
  write_corpus(fs::path(a.corpus), data.docs);
  write_word2vec_text(fs::path(a.embeddings), data.table);
  out << "wrote " << data.docs.size() << " documents and " << data.table.size()
      << " embeddings of dim " << data.table.dim() << '\n';
  return 0;
}

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Multi-label text classification with word-embedding compositions, "
               "one-hot features and one-vs-rest linear SVMs"};
  app.name("embsvm");
  app.require_subcommand(1);

  SplitArgs split;
  auto* c_split = app.add_subcommand("split", "stratified train/test split of a JSONL corpus");
  c_split->add_option("--corpus", split.corpus, "input corpus")->required();
  c_split->add_option("--train", split.train, "output training corpus")->required();
  c_split->add_option("--test", split.test, "output test corpus")->required();
  c_split->add_option("--train-fraction", split.train_fraction, "share of documents for training")
      ->capture_default_str();
  c_split->add_option("--seed", split.seed, "random seed")->capture_default_str();

  VectorizeArgs vec;
  std::uint32_t dim_check = 0;
  auto* c_vec = app.add_subcommand("vectorize", "write a sparse vector file for a corpus");
  c_vec->add_option("--corpus", vec.corpus, "input corpus")->required();
  c_vec->add_option("--representation", vec.features.representation,
                    "tfidf, hash, avg, min, max, conc, tfidf+conc or hash+conc")
      ->capture_default_str();
  add_feature_options(c_vec, vec.features);
  c_vec->add_option("--tfidf-model", vec.tfidf_model, "tf-idf model file (read, or written with --fit-tfidf)");
  c_vec->add_flag("--fit-tfidf", vec.fit_tfidf, "fit the tf-idf model on this corpus");
  auto* o_dim = c_vec->add_option("--dim-check", dim_check, "fail unless the output has this dimension");
  c_vec->add_option("--min-count", vec.min_count, "drop tokens rarer than this in the corpus")
      ->capture_default_str();
  c_vec->add_option("--out", vec.out, "output vector file")->required();

  TrainCmdArgs tr;
  auto* c_train = app.add_subcommand("train", "train a one-vs-rest model on a vector file");
  c_train->add_option("--train", tr.train, "training vector file")->required();
  c_train->add_option("--model", tr.model, "output model file")->required();
  add_train_options(c_train, tr.train_args);
  c_train->add_option("--seed", tr.seed, "random seed")->capture_default_str();
  c_train->add_option("--label-shard", tr.label_shard, "train only shard i of k of the labels (i/k)");

  PredictArgs pr;
  auto* c_pred = app.add_subcommand("predict", "predict label sets for a vector file");
  c_pred->add_option("--test", pr.test, "vector file")->required();
  c_pred->add_option("--model", pr.model, "model file")->required();
  c_pred->add_option("--out", pr.out, "output predictions (JSONL)")->required();

  EvaluateArgs ev;
  auto* c_eval = app.add_subcommand("evaluate", "score predictions against a labeled corpus");
  c_eval->add_option("--corpus,--test", ev.corpus, "gold corpus (JSONL)")->required();
  c_eval->add_option("--predictions", ev.predictions, "predictions (JSONL)")->required();
  c_eval->add_option("--model", ev.model, "model whose labels define the evaluated universe");
  c_eval->add_option("--out", ev.out, "report JSON")->required();
  c_eval->add_option("--buckets-csv", ev.buckets_csv, "per-length-bucket CSV");

  CurveArgs cu;
  cu.representations = {"tfidf"};
  auto* c_curve = app.add_subcommand("learning-curve", "micro-F1 against training set size");
  c_curve->add_option("--train", cu.train, "training corpus")->required();
  c_curve->add_option("--test", cu.test, "test corpus")->required();
  c_curve->add_option("--representation", cu.representations, "comma-separated representations")
      ->delimiter(',')
      ->capture_default_str();
  c_curve->add_option("--sizes", cu.sizes, "comma-separated training sizes")->delimiter(',');
  add_feature_options(c_curve, cu.features);
  add_train_options(c_curve, cu.train_args);
  c_curve->add_option("--seed", cu.seed, "random seed")->capture_default_str();
  c_curve->add_option("--out", cu.out, "output CSV (default stdout)");

  SweepArgs sw;
  auto* c_sweep = app.add_subcommand("hash-sweep", "micro-F1 and training time against hash dimension");
  c_sweep->add_option("--train", sw.train, "training corpus")->required();
  c_sweep->add_option("--test", sw.test, "test corpus")->required();
  c_sweep->add_option("--dims", sw.dims, "comma-separated hash dimensions")
      ->delimiter(',')
      ->capture_default_str();
  c_sweep->add_option("--normalize-hash", sw.features.normalize_hash,
                      "L2-normalize hashed rows (true/false)")
      ->capture_default_str();
  add_train_options(c_sweep, sw.train_args);
  c_sweep->add_option("--seed", sw.seed, "random seed")->capture_default_str();
  c_sweep->add_option("--out", sw.out, "output CSV (default stdout)");

  SignificanceArgs sg;
  auto* c_sig = app.add_subcommand("significance",
                                   "two-sided t-test of two representations over repeated splits");
  c_sig->add_option("--corpus", sg.corpus, "labeled corpus")->required();
  c_sig->add_option("--representation", sg.representations, "two comma-separated representations")
      ->delimiter(',')
      ->required();
  c_sig->add_option("--repeats", sg.repeats, "number of seeded splits")->capture_default_str();
  c_sig->add_option("--train-fraction", sg.train_fraction, "share of documents for training")
      ->capture_default_str();
  add_feature_options(c_sig, sg.features);
  add_train_options(c_sig, sg.train_args);
  c_sig->add_option("--seed", sg.seed, "first split seed")->capture_default_str();
  c_sig->add_option("--out", sg.out, "output JSON (default stdout)");

  MergeArgs mg;
  auto* c_merge = app.add_subcommand("merge", "merge models trained on label shards");
  c_merge->add_option("inputs", mg.inputs, "shard model files")->required();
  c_merge->add_option("--out", mg.out, "merged model file")->required();

  SynthArgs sy;
  auto* c_synth = app.add_subcommand("synth", "generate the seeded synthetic corpus and embeddings");
  c_synth->add_option("--corpus", sy.corpus, "output corpus (JSONL)")->required();
  c_synth->add_option("--embeddings", sy.embeddings, "output embeddings (word2vec text)")->required();
  c_synth->add_option("--docs", sy.cfg.n_docs, "number of documents")->capture_default_str();
  c_synth->add_option("--classes", sy.cfg.n_classes, "number of classes")->capture_default_str();
  c_synth->add_option("--dim", sy.cfg.dim, "embedding dimension")->capture_default_str();
  c_synth->add_option("--seed", sy.cfg.seed, "random seed")->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return 0;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return 0;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << '\n';
    return 1;
  }
  if (o_dim->count() > 0) vec.dim_check = dim_check;

  try {
    if (c_split->parsed()) return cmd_split(split, out);
    if (c_vec->parsed()) return cmd_vectorize(vec, out, err);
    if (c_train->parsed()) return cmd_train(tr, out);
    if (c_pred->parsed()) return cmd_predict(pr, out);
    if (c_eval->parsed()) return cmd_evaluate(ev, out);
    if (c_curve->parsed()) return cmd_learning_curve(cu, out, err);
    if (c_sweep->parsed()) return cmd_hash_sweep(sw, out);
    if (c_sig->parsed()) return cmd_significance(sg, out, err);
    if (c_merge->parsed()) return cmd_merge(mg, out);
    if (c_synth->parsed()) return cmd_synth(sy, out);
  } catch (const ValidationError& e) {
    err << "error: " << e.what() << '\n';
    return 1;
  } catch (const IoError& e) {
    err << "error: " << e.what() << '\n';
    return 2;
  } catch (const fs::filesystem_error& e) {
    err << "error: " << e.what() << '\n';
    return 2;
  }
  return 1;
}

}  // namespace embsvm::cli
