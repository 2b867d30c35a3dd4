#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "embsvm/corpus.hpp"
#include "embsvm/sparse.hpp"

namespace embsvm {

/// Vocabulary and document frequencies for sublinear, smoothed tf-idf:
///
///   value(w) = (1 + ln tf_w) * (ln((1 + n_docs) / (1 + df_w)) + 1)
///
/// Vocabulary indices follow lexicographic (byte) token order.
class TfidfModel {
 public:
  /// Throws ValidationError on an empty corpus.
  static TfidfModel fit(const Corpus& corpus, bool normalize = true);

  SparseVector transform(std::span<const std::string> tokens) const;
  SparseVector transform(const TokenizedDocument& doc) const { return transform(doc.tokens); }

  std::uint32_t dim() const noexcept { return static_cast<std::uint32_t>(vocab_.size()); }
  std::uint64_t n_docs() const noexcept { return n_docs_; }
  bool normalize() const noexcept { return normalize_; }
  std::span<const std::string> vocabulary() const noexcept { return vocab_; }
  std::optional<std::uint32_t> index_of(const std::string& token) const;
  std::uint32_t df(std::uint32_t index) const { return df_.at(index); }
  double idf(std::uint32_t index) const;

  /// Text format: "#tfidf n_docs=<N> normalize=<0|1>" then "<token>\t<df>" per index.
  void save(std::ostream& out) const;
  static TfidfModel load(std::istream& in, std::string_view source);

  friend bool operator==(const TfidfModel& a, const TfidfModel& b) {
    return a.n_docs_ == b.n_docs_ && a.normalize_ == b.normalize_ && a.vocab_ == b.vocab_ &&
           a.df_ == b.df_;
  }

 private:
  void build_index();

  std::vector<std::string> vocab_;
  std::vector<std::uint32_t> df_;
  std::unordered_map<std::string, std::uint32_t> index_;
  std::uint64_t n_docs_ = 0;
  bool normalize_ = true;
};

inline constexpr std::uint64_t kFnvOffsetBasis = 0xcbf29ce484222325ULL;
inline constexpr std::uint64_t kFnvPrime = 0x100000001b3ULL;

constexpr std::uint64_t fnv1a64(std::string_view bytes) noexcept {
  std::uint64_t h = kFnvOffsetBasis;
  for (char c : bytes) {
    h ^= static_cast<std::uint8_t>(c);
    h *= kFnvPrime;
  }
  return h;
}

inline constexpr std::uint32_t kDefaultHashDim = 70000;

/// Hashing trick: each token adds 1 at fnv1a64(token) mod dim. Colliding tokens
/// accumulate. No sign hashing.
SparseVector hash_transform(std::span<const std::string> tokens, std::uint32_t dim,
                            bool normalize = false);

}  // namespace embsvm
