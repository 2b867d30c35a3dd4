#include <gtest/gtest.h>

#include "embsvm/error.hpp"
#include "embsvm/pipeline.hpp"
#include "embsvm/synthetic.hpp"

namespace embsvm {
namespace {

struct Small {
  SyntheticData data;
  Corpus train, test;
};

const Small& small() {
  static const Small s = [] {
    SyntheticConfig cfg;
    cfg.n_docs = 300;
    cfg.n_classes = 5;
    cfg.dim = 8;
    cfg.background_words = 400;
    cfg.max_length = 120;
    Small out{make_synthetic(cfg), {}, {}};
    auto [train, test] = stratified_split(tokenize(out.data.docs), SplitSpec{0.8, 1});
    out.train = std::move(train);
    out.test = std::move(test);
    return out;
  }();
  return s;
}

TEST(Representation, NamesRoundTrip) {
  for (auto rep : {Representation::Tfidf, Representation::Hash, Representation::Avg,
                   Representation::Min, Representation::Max, Representation::Conc,
                   Representation::TfidfConc, Representation::HashConc}) {
    EXPECT_EQ(parse_representation(to_string(rep)), rep);
  }
  EXPECT_EQ(to_string(Representation::TfidfConc), "tfidf+conc");
  EXPECT_FALSE(parse_representation("bow"));
  EXPECT_TRUE(needs_embeddings(Representation::HashConc));
  EXPECT_FALSE(needs_embeddings(Representation::Tfidf));
  EXPECT_TRUE(needs_tfidf(Representation::TfidfConc));
  EXPECT_FALSE(needs_tfidf(Representation::Conc));
}

TEST(Featurizer, Dimensions) {
  const auto& s = small();
  FeatureConfig cfg;
  cfg.representation = Representation::Conc;
  EXPECT_EQ(Featurizer::fit(cfg, s.train, &s.data.table).dim(), 24u);
  cfg.representation = Representation::Hash;
  EXPECT_EQ(Featurizer::fit(cfg, s.train, nullptr).dim(), 70000u);
  cfg.representation = Representation::TfidfConc;
  const auto f = Featurizer::fit(cfg, s.train, &s.data.table);
  const auto vocab = TfidfModel::fit(s.train).dim();
  EXPECT_EQ(f.dim(), vocab + 24);
  EXPECT_EQ(f.boundary(), vocab);
  const auto x = f.transform(s.test);
  EXPECT_EQ(x.rows.size(), s.test.size());
  EXPECT_EQ(x.dim, f.dim());
  for (const auto& r : x.rows) EXPECT_EQ(r.dim(), f.dim());
}

TEST(Featurizer, RequiresInputs) {
  const auto& s = small();
  FeatureConfig cfg;
  cfg.representation = Representation::Avg;
  EXPECT_THROW(Featurizer::fit(cfg, s.train, nullptr), ValidationError);
  cfg.representation = Representation::Tfidf;
  EXPECT_THROW(Featurizer(cfg, nullptr, std::nullopt), ValidationError);
  cfg.representation = Representation::Hash;
  cfg.hash_dim = 0;
  EXPECT_THROW(Featurizer::fit(cfg, s.train, nullptr), ValidationError);
}

TEST(Featurizer, DescribeNamesSettings) {
  FeatureConfig cfg;
  cfg.representation = Representation::HashConc;
  cfg.hash_dim = 123;
  EXPECT_EQ(cfg.describe(), "representation=hash+conc hash_dim=123 normalize_hash=0 scale_blocks=1");
}

TEST(Experiment, LearningCurveAtFullSizeEqualsDirectRun) {
  const auto& s = small();
  ExperimentConfig cfg;
  cfg.train.lambda = 1e-3;
  cfg.features.representation = Representation::Avg;
  const auto direct = run_experiment(s.train, s.test, cfg, &s.data.table);
  const auto pts = learning_curve(s.train, s.test, cfg, {Representation::Avg}, {s.train.size()}, 3,
                                  &s.data.table);
  ASSERT_EQ(pts.size(), 1u);
  EXPECT_EQ(pts[0].micro_f1, direct.report.micro_f1);
}

TEST(Experiment, LearningCurveRowsAndDeterminism) {
  const auto& s = small();
  ExperimentConfig cfg;
  cfg.train.lambda = 1e-3;
  const std::vector<Representation> reps = {Representation::Tfidf, Representation::Max};
  const auto a = learning_curve(s.train, s.test, cfg, reps, {50, 120}, 9, &s.data.table);
  const auto b = learning_curve(s.train, s.test, cfg, reps, {50, 120}, 9, &s.data.table);
  ASSERT_EQ(a.size(), 4u);
  EXPECT_EQ(a[0].representation, Representation::Tfidf);
  EXPECT_EQ(a[3].representation, Representation::Max);
  for (std::size_t i = 0; i < a.size(); ++i) EXPECT_EQ(a[i].micro_f1, b[i].micro_f1);
  EXPECT_THROW(learning_curve(s.train, s.test, cfg, reps, {s.train.size() + 1}, 9, &s.data.table),
               ValidationError);
  const std::string csv = curve_to_csv(a, "cfg");
  EXPECT_EQ(csv.substr(0, csv.find('\n', 6) + 1), "# cfg\nrepresentation,size,micro_f1,train_seconds\n");
}

TEST(Experiment, HashSweepRows) {
  const auto& s = small();
  ExperimentConfig cfg;
  cfg.train.lambda = 1e-3;
  const auto one = hash_sweep(s.train, s.test, cfg, {70000});
  ASSERT_EQ(one.size(), 1u);
  EXPECT_EQ(one[0].dim, 70000u);
  const auto again = hash_sweep(s.train, s.test, cfg, {70000});
  EXPECT_EQ(again[0].micro_f1, one[0].micro_f1);
  EXPECT_THROW(hash_sweep(s.train, s.test, cfg, {0}), ValidationError);
  const std::string csv = sweep_to_csv(one);
  EXPECT_EQ(csv.substr(0, csv.find('\n')), "dim,micro_f1,train_seconds");
}

TEST(Experiment, CrossValidatedRunUsesGrid) {
  const auto& s = small();
  ExperimentConfig cfg;
  cfg.features.representation = Representation::Tfidf;
  cfg.cv_grid = {1e6, 1e-3};
  cfg.cv_folds = 3;
  const auto r = run_experiment(s.train, s.test, cfg, nullptr);
  EXPECT_EQ(r.lambda, 1e-3);
  EXPECT_EQ(r.model.lambda(), 1e-3);
}

TEST(Experiment, SignificanceProducesOneScorePerRepeat) {
  const auto& s = small();
  Corpus all = s.train;
  all.insert(all.end(), s.test.begin(), s.test.end());
  ExperimentConfig cfg;
  cfg.train.lambda = 1e-3;
  const auto sig = compare_representations(all, SplitSpec{0.8, 5}, 3, cfg, Representation::Tfidf,
                                           Representation::Avg, &s.data.table);
  EXPECT_EQ(sig.scores_a.size(), 3u);
  EXPECT_EQ(sig.scores_b.size(), 3u);
  EXPECT_GE(sig.test.p, 0.0);
  EXPECT_LE(sig.test.p, 1.0);
  EXPECT_THROW(compare_representations(all, SplitSpec{0.8, 5}, 1, cfg, Representation::Tfidf,
                                       Representation::Avg, &s.data.table),
               ValidationError);
}

TEST(Synthetic, DeterministicAndShaped) {
  SyntheticConfig cfg;
  cfg.n_docs = 200;
  const auto a = make_synthetic(cfg);
  const auto b = make_synthetic(cfg);
  EXPECT_EQ(a.docs, b.docs);
  EXPECT_EQ(a.docs.size(), 200u);
  EXPECT_EQ(a.table.dim(), cfg.dim);
  for (const auto& d : a.docs) {
    EXPECT_FALSE(d.labels.empty());
    EXPECT_TRUE(std::is_sorted(d.labels.begin(), d.labels.end()));
  }
}

}  // namespace
}  // namespace embsvm
