#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "embsvm/corpus.hpp"

namespace embsvm {

struct Counts {
  std::uint64_t tp = 0;
  std::uint64_t fp = 0;
  std::uint64_t fn = 0;

  /// 2tp / (2tp + fp + fn); 0 when all counts are 0.
  double f1() const noexcept;

  Counts& operator+=(const Counts& o) noexcept {
    tp += o.tp;
    fp += o.fp;
    fn += o.fn;
    return *this;
  }
  friend bool operator==(const Counts&, const Counts&) = default;
};

/// Pooled (document, label) contingency counts. Throws ValidationError on a
/// length mismatch.
Counts pooled_counts(std::span<const LabelSet> gold, std::span<const LabelSet> pred);

double micro_f1(std::span<const LabelSet> gold, std::span<const LabelSet> pred);

/// Unweighted mean of per-label F1 over the universe; labels never seen in
/// gold or pred score 0.
double macro_f1(std::span<const LabelSet> gold, std::span<const LabelSet> pred,
                std::span<const std::string> universe);

/// Document length buckets, left-closed: [0,100) [100,200) [200,300) [300,400) [400,inf).
inline constexpr std::size_t kLengthBuckets = 5;
inline constexpr std::array<std::string_view, kLengthBuckets> kBucketNames = {
    "<100", "100-200", "200-300", "300-400", ">400"};

std::size_t length_bucket(std::size_t n_tokens) noexcept;

/// Micro-F1 per bucket; buckets without documents are empty optionals.
std::array<std::optional<double>, kLengthBuckets> bucketed_f1(
    std::span<const LabelSet> gold, std::span<const LabelSet> pred,
    std::span<const std::size_t> doc_lengths);

struct TTest {
  double t = 0.0;
  double p = 1.0;
};

/// Two-sample Student t-test with pooled variance, two-sided p-value.
TTest two_sided_t_test(std::span<const double> a, std::span<const double> b);

struct LabelCounts {
  std::string label;
  Counts counts;
};

struct BucketResult {
  std::string_view name;
  std::size_t n_docs = 0;
  std::optional<double> micro_f1;
};

struct EvalReport {
  double micro_f1 = 0.0;
  double macro_f1 = 0.0;
  Counts totals;
  std::size_t n_docs = 0;
  std::size_t unknown_gold_labels = 0;  // gold labels outside the model's label list
  std::vector<LabelCounts> per_label;
  std::array<BucketResult, kLengthBuckets> buckets;
};

/// Full report. universe is the model's label list; gold labels outside it
/// are counted as false negatives and tallied in unknown_gold_labels.
EvalReport evaluate(std::span<const LabelSet> gold, std::span<const LabelSet> pred,
                    std::span<const std::size_t> doc_lengths,
                    std::span<const std::string> universe);

/// JSON object with a stable key order. config is embedded under "config" when nonempty.
std::string report_to_json(const EvalReport& report, std::string_view config = {});

/// "bucket,n_docs,micro_f1" CSV; empty buckets have an empty micro_f1 cell.
std::string buckets_to_csv(const EvalReport& report);

}  // namespace embsvm
