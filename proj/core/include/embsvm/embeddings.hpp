#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace embsvm {

/// Immutable word -> vector dictionary of fixed dimension.
///
/// Components are stored as float. Entries keep the order in which tokens were
/// first seen so that writing a loaded table reproduces the input order.
class EmbeddingTable {
 public:
  struct Entry {
    std::string token;
    std::vector<float> vector;
  };

  /// Builds a table from entries; a repeated token overwrites the earlier
  /// vector in place. `duplicates`, when given, receives the number of
  /// overwritten entries.
  static EmbeddingTable from_entries(std::uint32_t dim, std::vector<Entry> entries,
                                     std::size_t* duplicates = nullptr);

  std::uint32_t dim() const noexcept { return dim_; }
  std::size_t size() const noexcept { return tokens_.size(); }

  std::optional<std::span<const float>> lookup(const std::string& token) const;

  /// Fraction of tokens present in the table; 1 for an empty sequence.
  double coverage(std::span<const std::string> tokens) const;

  std::span<const std::string> tokens() const noexcept { return tokens_; }
  std::span<const float> vector_at(std::size_t row) const noexcept {
    return {data_.data() + row * dim_, dim_};
  }

 private:
  std::uint32_t dim_ = 0;
  std::vector<std::string> tokens_;
  std::vector<float> data_;  // row-major, size() * dim_
  std::unordered_map<std::string, std::uint32_t> index_;
};

struct EmbeddingLoad {
  EmbeddingTable table;
  std::size_t duplicates = 0;
};

/// Parses the word2vec text format: a "<count> <dim>" header followed by
/// exactly count lines of "<token> <v1> ... <vdim>".
EmbeddingLoad read_word2vec_text(std::istream& in, std::string_view source);
EmbeddingLoad load_word2vec_text(const std::filesystem::path& path);

void write_word2vec_text(std::ostream& out, const EmbeddingTable& table);
void write_word2vec_text(const std::filesystem::path& path, const EmbeddingTable& table);

}  // namespace embsvm
