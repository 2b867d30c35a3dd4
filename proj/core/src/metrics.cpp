#include "embsvm/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <unordered_map>

#include <boost/math/distributions/students_t.hpp>
#include <json.hpp>

#include "embsvm/error.hpp"
#include "text_format.hpp"

namespace embsvm {

double Counts::f1() const noexcept {
  const std::uint64_t denom = 2 * tp + fp + fn;
  if (denom == 0) return 0.0;
  return static_cast<double>(2 * tp) / static_cast<double>(denom);
}

namespace {

const LabelSet& sorted_view(const LabelSet& labels, LabelSet& scratch) {
  if (std::is_sorted(labels.begin(), labels.end())) return labels;
  scratch = labels;
  std::sort(scratch.begin(), scratch.end());
  return scratch;
}

Counts doc_counts(const LabelSet& gold_in, const LabelSet& pred_in) {
  LabelSet gs, ps;
  const LabelSet& gold = sorted_view(gold_in, gs);
  const LabelSet& pred = sorted_view(pred_in, ps);
  Counts c;
  std::size_t a = 0, b = 0;
  while (a < gold.size() && b < pred.size()) {
    if (gold[a] < pred[b]) {
      ++c.fn;
      ++a;
    } else if (pred[b] < gold[a]) {
      ++c.fp;
      ++b;
    } else {
      ++c.tp;
      ++a;
      ++b;
    }
  }
  c.fn += gold.size() - a;
  c.fp += pred.size() - b;
  return c;
}

void check_lengths(std::size_t gold, std::size_t pred) {
  if (gold != pred) {
    throw ValidationError("gold and predicted sets differ in length (" + std::to_string(gold) +
                          " vs " + std::to_string(pred) + ")");
  }
}

std::vector<Counts> label_counts(std::span<const LabelSet> gold, std::span<const LabelSet> pred,
                                 std::span<const std::string> universe) {
  std::unordered_map<std::string_view, std::size_t> index;
  for (std::size_t c = 0; c < universe.size(); ++c) index.emplace(universe[c], c);
  std::vector<Counts> counts(universe.size());
  for (std::size_t i = 0; i < gold.size(); ++i) {
    for (const auto& l : gold[i]) {
      auto it = index.find(l);
      if (it == index.end()) continue;
      if (std::find(pred[i].begin(), pred[i].end(), l) != pred[i].end()) {
        ++counts[it->second].tp;
      } else {
        ++counts[it->second].fn;
      }
    }
    for (const auto& l : pred[i]) {
      auto it = index.find(l);
      if (it == index.end()) continue;
      if (std::find(gold[i].begin(), gold[i].end(), l) == gold[i].end()) ++counts[it->second].fp;
    }
  }
  return counts;
}

}  // namespace

Counts pooled_counts(std::span<const LabelSet> gold, std::span<const LabelSet> pred) {
  check_lengths(gold.size(), pred.size());
  Counts total;
  for (std::size_t i = 0; i < gold.size(); ++i) total += doc_counts(gold[i], pred[i]);
  return total;
}

double micro_f1(std::span<const LabelSet> gold, std::span<const LabelSet> pred) {
  return pooled_counts(gold, pred).f1();
}

double macro_f1(std::span<const LabelSet> gold, std::span<const LabelSet> pred,
                std::span<const std::string> universe) {
  check_lengths(gold.size(), pred.size());
  if (universe.empty()) throw ValidationError("macro-F1 needs a nonempty label universe");
  double sum = 0.0;
  for (const auto& c : label_counts(gold, pred, universe)) sum += c.f1();
  return sum / static_cast<double>(universe.size());
}

std::size_t length_bucket(std::size_t n_tokens) noexcept {
  return std::min<std::size_t>(n_tokens / 100, kLengthBuckets - 1);
}

std::array<std::optional<double>, kLengthBuckets> bucketed_f1(
    std::span<const LabelSet> gold, std::span<const LabelSet> pred,
    std::span<const std::size_t> doc_lengths) {
  check_lengths(gold.size(), pred.size());
  check_lengths(gold.size(), doc_lengths.size());
  std::array<Counts, kLengthBuckets> counts{};
  std::array<std::size_t, kLengthBuckets> docs{};
  for (std::size_t i = 0; i < gold.size(); ++i) {
    const std::size_t b = length_bucket(doc_lengths[i]);
    counts[b] += doc_counts(gold[i], pred[i]);
    ++docs[b];
  }
  std::array<std::optional<double>, kLengthBuckets> out{};
  for (std::size_t b = 0; b < kLengthBuckets; ++b) {
    if (docs[b] > 0) out[b] = counts[b].f1();
  }
  return out;
}

TTest two_sided_t_test(std::span<const double> a, std::span<const double> b) {
  if (a.size() < 2 || b.size() < 2) throw ValidationError("t-test needs at least 2 values per sample");
  // Sorted summation makes the statistic independent of sample order.
  auto moments = [](std::span<const double> s) {
    std::vector<double> v(s.begin(), s.end());
    std::sort(v.begin(), v.end());
    double mean = 0.0;
    for (double x : v) mean += x;
    mean /= static_cast<double>(v.size());
    double ss = 0.0;
    for (double x : v) ss += (x - mean) * (x - mean);
    return std::pair{mean, ss};
  };
  const auto [mean_a, ss_a] = moments(a);
  const auto [mean_b, ss_b] = moments(b);
  const double na = static_cast<double>(a.size());
  const double nb = static_cast<double>(b.size());
  const double df = na + nb - 2.0;
  const double pooled = (ss_a + ss_b) / df;
  if (!(pooled > 0.0)) throw ValidationError("t-test: pooled variance is zero");
  TTest r;
  r.t = (mean_a - mean_b) / std::sqrt(pooled * (1.0 / na + 1.0 / nb));
  const boost::math::students_t dist(df);
  r.p = std::min(1.0, 2.0 * boost::math::cdf(boost::math::complement(dist, std::abs(r.t))));
  return r;
}

EvalReport evaluate(std::span<const LabelSet> gold, std::span<const LabelSet> pred,
                    std::span<const std::size_t> doc_lengths,
                    std::span<const std::string> universe) {
  check_lengths(gold.size(), pred.size());
  check_lengths(gold.size(), doc_lengths.size());
  EvalReport r;
  r.n_docs = gold.size();
  r.totals = pooled_counts(gold, pred);
  r.micro_f1 = r.totals.f1();
  r.macro_f1 = universe.empty() ? 0.0 : macro_f1(gold, pred, universe);

  std::vector<std::string> known(universe.begin(), universe.end());
  std::sort(known.begin(), known.end());
  for (const auto& labels : gold) {
    for (const auto& l : labels) {
      if (!std::binary_search(known.begin(), known.end(), l)) ++r.unknown_gold_labels;
    }
  }

  const auto per_label = label_counts(gold, pred, universe);
  for (std::size_t c = 0; c < universe.size(); ++c) r.per_label.push_back({universe[c], per_label[c]});

  const auto f1s = bucketed_f1(gold, pred, doc_lengths);
  for (std::size_t b = 0; b < kLengthBuckets; ++b) {
    r.buckets[b].name = kBucketNames[b];
    r.buckets[b].micro_f1 = f1s[b];
  }
  for (std::size_t len : doc_lengths) ++r.buckets[length_bucket(len)].n_docs;
  return r;
}

std::string report_to_json(const EvalReport& report, std::string_view config) {
  nlohmann::ordered_json j;
  if (!config.empty()) j["config"] = std::string(config);
  j["n_docs"] = report.n_docs;
  j["micro_f1"] = report.micro_f1;
  j["macro_f1"] = report.macro_f1;
  j["tp"] = report.totals.tp;
  j["fp"] = report.totals.fp;
  j["fn"] = report.totals.fn;
  j["unknown_gold_labels"] = report.unknown_gold_labels;
  auto& buckets = j["buckets"] = nlohmann::ordered_json::array();
  for (const auto& b : report.buckets) {
    nlohmann::ordered_json e;
    e["bucket"] = std::string(b.name);
    e["n_docs"] = b.n_docs;
    e["micro_f1"] = b.micro_f1 ? nlohmann::ordered_json(*b.micro_f1) : nlohmann::ordered_json();
    buckets.push_back(std::move(e));
  }
  auto& labels = j["per_label"] = nlohmann::ordered_json::array();
  for (const auto& l : report.per_label) {
    nlohmann::ordered_json e;
    e["label"] = l.label;
    e["tp"] = l.counts.tp;
    e["fp"] = l.counts.fp;
    e["fn"] = l.counts.fn;
    e["f1"] = l.counts.f1();
    labels.push_back(std::move(e));
  }
  return j.dump(2) + "\n";
}

std::string buckets_to_csv(const EvalReport& report) {
  std::string out = "bucket,n_docs,micro_f1\n";
  for (const auto& b : report.buckets) {
    out += b.name;
    out += ',';
    out += std::to_string(b.n_docs);
    out += ',';
    if (b.micro_f1) detail::append_shortest(out, *b.micro_f1);
    out += '\n';
  }
  return out;
}

}  // namespace embsvm
