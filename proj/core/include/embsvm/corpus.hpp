#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace embsvm {

/// Sorted, duplicate-free set of label names.
using LabelSet = std::vector<std::string>;

struct RawDocument {
  std::string id;
  LabelSet labels;  // empty only for prediction-mode corpora
  std::string text;

  friend bool operator==(const RawDocument&, const RawDocument&) = default;
};

struct TokenizedDocument {
  std::string id;
  LabelSet labels;
  std::vector<std::string> tokens;

  friend bool operator==(const TokenizedDocument&, const TokenizedDocument&) = default;
};

using Corpus = std::vector<TokenizedDocument>;

struct SplitSpec {
  double train_fraction = 8.0 / 9.0;
  std::uint64_t seed = 0;

  void validate() const;
};

/// Lowercases, isolates every Unicode punctuation character (general category
/// P*) as its own token and splits on white space.
std::vector<std::string> tokenize(std::string_view text);

TokenizedDocument tokenize(const RawDocument& doc);
Corpus tokenize(std::span<const RawDocument> docs);

/// Drops tokens whose corpus-wide frequency is below min_count. Documents that
/// end up empty are kept.
Corpus filter_min_count(const Corpus& corpus, std::size_t min_count);

struct SplitIndices {
  std::vector<std::size_t> train;  // ascending
  std::vector<std::size_t> test;   // ascending
};

/// Greedy iterative multi-label stratification over per-document label sets.
///
/// The train side receives exactly round(train_fraction * n) documents. Labels
/// are processed rarest first; each document carrying the current label goes to
/// the side with the larger remaining demand for that label, then the larger
/// remaining overall demand, then a seeded coin.
SplitIndices stratified_split_indices(std::span<const LabelSet> labels, const SplitSpec& spec);

template <class Doc>
std::pair<std::vector<Doc>, std::vector<Doc>> stratified_split(std::span<const Doc> docs,
                                                               const SplitSpec& spec) {
  std::vector<LabelSet> labels;
  labels.reserve(docs.size());
  for (const auto& d : docs) labels.push_back(d.labels);
  const SplitIndices idx = stratified_split_indices(labels, spec);
  std::pair<std::vector<Doc>, std::vector<Doc>> out;
  out.first.reserve(idx.train.size());
  out.second.reserve(idx.test.size());
  for (std::size_t i : idx.train) out.first.push_back(docs[i]);
  for (std::size_t i : idx.test) out.second.push_back(docs[i]);
  return out;
}

inline std::pair<Corpus, Corpus> stratified_split(const Corpus& corpus, const SplitSpec& spec) {
  return stratified_split<TokenizedDocument>(std::span<const TokenizedDocument>(corpus), spec);
}

/// n ascending indices drawn uniformly without replacement from [0, size).
std::vector<std::size_t> subsample_indices(std::size_t size, std::size_t n, std::uint64_t seed);

/// Uniform sample of n documents, original relative order preserved.
Corpus subsample(const Corpus& corpus, std::size_t n, std::uint64_t seed);

/// Sorted union of all document labels.
std::vector<std::string> label_universe(const Corpus& corpus);

/// Reads a JSON Lines corpus ({"id", "labels", "text"} per line).
/// With require_labels, a missing "labels" field is a ParseError.
std::vector<RawDocument> read_corpus(std::istream& in, std::string_view source,
                                     bool require_labels = true);
std::vector<RawDocument> read_corpus(const std::filesystem::path& path,
                                     bool require_labels = true);

void write_corpus(std::ostream& out, std::span<const RawDocument> docs);
void write_corpus(const std::filesystem::path& path, std::span<const RawDocument> docs);

}  // namespace embsvm
