#include <gtest/gtest.h>

#include <cmath>
#include <json.hpp>

#include "embsvm/error.hpp"
#include "embsvm/metrics.hpp"
#include "embsvm/rng.hpp"
#include "oracles.hpp"

namespace embsvm {
namespace {

using Sets = std::vector<LabelSet>;

TEST(MicroF1, HandCountedCases) {
  EXPECT_EQ(micro_f1(Sets{{"a", "b"}, {"c"}}, Sets{{"a", "b"}, {"c"}}), 1.0);
  const Sets gold = {{"a", "b"}}, pred = {{"a", "c"}};
  EXPECT_EQ(pooled_counts(gold, pred), (Counts{1, 1, 1}));
  EXPECT_EQ(micro_f1(gold, pred), 0.5);
  EXPECT_EQ(micro_f1(Sets{{"a"}, {"b"}}, Sets{{"b"}, {"a"}}), 0.0);
  EXPECT_EQ(micro_f1(Sets{{}}, Sets{{}}), 0.0);
  EXPECT_THROW(micro_f1(Sets{{"a"}}, Sets{}), ValidationError);
}

TEST(MacroF1, Cases) {
  const std::vector<std::string> one = {"a"};
  EXPECT_EQ(macro_f1(Sets{{"a"}}, Sets{{"a"}}, one), 1.0);
  const std::vector<std::string> two = {"a", "b"};
  EXPECT_EQ(macro_f1(Sets{{"a"}, {"b"}}, Sets{{"a"}, {}}, two), 0.5);
  const std::vector<std::string> three = {"a", "b", "never"};
  EXPECT_DOUBLE_EQ(macro_f1(Sets{{"a"}, {"b"}}, Sets{{"a"}, {"b"}}, three), 2.0 / 3.0);
  EXPECT_THROW(macro_f1(Sets{{"a"}}, Sets{{"a"}}, {}), ValidationError);
}

Sets random_sets(Rng& rng, std::size_t n) {
  Sets out;
  for (std::size_t i = 0; i < n; ++i) {
    LabelSet s;
    for (const char* l : {"a", "b", "c", "d"}) {
      if (rng.uniform() < 0.4) s.push_back(l);
    }
    out.push_back(s);
  }
  return out;
}

TEST(MicroF1, SymmetricAndPooled) {
  Rng rng(13);
  for (int round = 0; round < 100; ++round) {
    const std::size_t n = 2 + rng.below(30);
    const Sets gold = random_sets(rng, n), pred = random_sets(rng, n);
    EXPECT_EQ(micro_f1(gold, pred), micro_f1(pred, gold));
    const std::size_t cut = rng.below(n + 1);
    const std::span<const LabelSet> g(gold), p(pred);
    Counts sum = pooled_counts(g.first(cut), p.first(cut));
    sum += pooled_counts(g.subspan(cut), p.subspan(cut));
    EXPECT_EQ(sum, pooled_counts(gold, pred));
    EXPECT_EQ(sum.f1(), micro_f1(gold, pred));
    const double m = macro_f1(gold, pred, std::vector<std::string>{"a", "b", "c", "d"});
    EXPECT_GE(m, 0.0);
    EXPECT_LE(m, 1.0);
  }
}

TEST(BucketedF1, LeftClosedBuckets) {
  EXPECT_EQ(length_bucket(0), 0u);
  EXPECT_EQ(length_bucket(99), 0u);
  EXPECT_EQ(length_bucket(100), 1u);
  EXPECT_EQ(length_bucket(200), 2u);
  EXPECT_EQ(length_bucket(399), 3u);
  EXPECT_EQ(length_bucket(400), 4u);
  EXPECT_EQ(length_bucket(100000), 4u);

  const std::vector<std::size_t> fifty = {50, 50};
  const auto only = bucketed_f1(Sets{{"a"}, {"b"}}, Sets{{"a"}, {"b"}}, fifty);
  EXPECT_EQ(only[0], 1.0);
  for (std::size_t b = 1; b < kLengthBuckets; ++b) EXPECT_FALSE(only[b]);

  const std::vector<std::size_t> lens = {150, 450};
  const auto two = bucketed_f1(Sets{{"a", "b"}, {"a", "b"}}, Sets{{"a", "c"}, {"a", "c"}}, lens);
  EXPECT_EQ(two[1], 0.5);
  EXPECT_EQ(two[4], 0.5);
  EXPECT_FALSE(two[0]);
}

TEST(TTest, IdenticalSamples) {
  const std::vector<double> a = {1.0, 2.0, 4.0};
  const auto r = two_sided_t_test(a, a);
  EXPECT_EQ(r.t, 0.0);
  EXPECT_EQ(r.p, 1.0);
}

TEST(TTest, DegenerateInputs) {
  const std::vector<double> zeros = {0, 0, 0, 0}, ones = {1, 1, 1, 1}, one = {1};
  EXPECT_THROW(two_sided_t_test(zeros, ones), ValidationError);
  EXPECT_THROW(two_sided_t_test(one, ones), ValidationError);
}

TEST(TTest, MatchesQuadratureOracle) {
  const std::vector<double> a = {1.1, 0.9, 1.0, 1.2, 0.8};
  const std::vector<double> b = {2.1, 1.9, 2.0, 2.2, 1.8};
  const auto r = two_sided_t_test(a, b);
  EXPECT_NEAR(r.t, -10.0, 1e-9);
  EXPECT_NEAR(r.p, oracle::t_two_sided_p(r.t, 8.0), 1e-6);
  // 40-digit reference for t = -10 with 8 degrees of freedom.
  EXPECT_NEAR(r.p, 8.488181527628492e-06, 1e-10);
}

TEST(TTest, OracleAgreementAcrossShapes) {
  Rng rng(21);
  for (int round = 0; round < 20; ++round) {
    std::vector<double> a(2 + rng.below(8)), b(2 + rng.below(8));
    for (auto& x : a) x = rng.normal();
    for (auto& x : b) x = rng.normal() + 0.5;
    const auto r = two_sided_t_test(a, b);
    const double dof = static_cast<double>(a.size() + b.size() - 2);
    EXPECT_NEAR(r.p, oracle::t_two_sided_p(r.t, dof), 1e-6);
  }
}

TEST(TTest, ScaleInvariant) {
  Rng rng(22);
  for (int round = 0; round < 50; ++round) {
    std::vector<double> a(3 + rng.below(6)), b(3 + rng.below(6));
    for (auto& x : a) x = rng.normal();
    for (auto& x : b) x = rng.normal() + 1.0;
    const auto r = two_sided_t_test(a, b);
    for (double k : {0.001, 3.0, 1e4}) {
      std::vector<double> ka = a, kb = b;
      for (auto& x : ka) x *= k;
      for (auto& x : kb) x *= k;
      const auto s = two_sided_t_test(ka, kb);
      EXPECT_NEAR(s.t, r.t, 1e-12 * std::max(1.0, std::abs(r.t)));
      EXPECT_NEAR(s.p, r.p, 1e-12);
    }
  }
}

TEST(Evaluate, ReportAndSerialization) {
  const Sets gold = {{"a"}, {"b", "zz"}, {"a", "b"}};
  const Sets pred = {{"a"}, {"b"}, {"a"}};
  const std::vector<std::size_t> lens = {10, 250, 500};
  const std::vector<std::string> universe = {"a", "b"};
  const auto r = evaluate(gold, pred, lens, universe);
  EXPECT_EQ(r.totals, (Counts{3, 0, 2}));
  EXPECT_EQ(r.unknown_gold_labels, 1u);
  EXPECT_DOUBLE_EQ(r.micro_f1, 6.0 / 8.0);
  ASSERT_EQ(r.per_label.size(), 2u);
  EXPECT_EQ(r.per_label[1].counts, (Counts{1, 0, 1}));
  EXPECT_EQ(r.buckets[0].n_docs, 1u);
  EXPECT_EQ(r.buckets[2].n_docs, 1u);
  EXPECT_EQ(r.buckets[4].n_docs, 1u);
  EXPECT_FALSE(r.buckets[1].micro_f1);

  const auto j = nlohmann::ordered_json::parse(report_to_json(r, "cfg"));
  std::vector<std::string> keys;
  for (const auto& item : j.items()) keys.push_back(item.key());
  EXPECT_EQ(keys.front(), "config");
  EXPECT_EQ(j["micro_f1"].get<double>(), r.micro_f1);
  EXPECT_EQ(j["tp"].get<int>(), 3);
  EXPECT_EQ(report_to_json(r, "cfg"), report_to_json(r, "cfg"));

  const std::string csv = buckets_to_csv(r);
  EXPECT_EQ(csv.substr(0, csv.find('\n')), "bucket,n_docs,micro_f1");
  EXPECT_NE(csv.find("100-200,0,\n"), std::string::npos);
}

TEST(Evaluate, LengthMismatch) {
  const std::vector<std::size_t> lens = {1};
  EXPECT_THROW(evaluate(Sets{{"a"}, {"a"}}, Sets{{"a"}, {"a"}}, lens, std::vector<std::string>{"a"}),
               ValidationError);
}

}  // namespace
}  // namespace embsvm
