#include "embsvm/embeddings.hpp"

#include <cmath>
#include <fstream>
#include <limits>

#include "embsvm/error.hpp"
#include "text_format.hpp"

namespace embsvm {

EmbeddingTable EmbeddingTable::from_entries(std::uint32_t dim, std::vector<Entry> entries,
                                            std::size_t* duplicates) {
  if (dim == 0) throw ValidationError("embedding dimension must be positive");
  EmbeddingTable t;
  t.dim_ = dim;
  t.tokens_.reserve(entries.size());
  t.data_.reserve(entries.size() * dim);
  std::size_t dups = 0;
  for (auto& e : entries) {
    if (e.vector.size() != dim) {
      throw ValidationError("embedding for \"" + e.token + "\" has " +
                            std::to_string(e.vector.size()) + " components, expected " +
                            std::to_string(dim));
    }
    for (float v : e.vector) {
      if (!std::isfinite(v)) {
        throw ValidationError("embedding for \"" + e.token + "\" has a non-finite component");
      }
    }
    const auto [it, inserted] =
        t.index_.emplace(e.token, static_cast<std::uint32_t>(t.tokens_.size()));
    if (inserted) {
      t.tokens_.push_back(std::move(e.token));
      t.data_.insert(t.data_.end(), e.vector.begin(), e.vector.end());
    } else {
      ++dups;
      std::copy(e.vector.begin(), e.vector.end(),
                t.data_.begin() + static_cast<std::ptrdiff_t>(it->second) * dim);
    }
  }
  if (duplicates != nullptr) *duplicates = dups;
  return t;
}

std::optional<std::span<const float>> EmbeddingTable::lookup(const std::string& token) const {
  const auto it = index_.find(token);
  if (it == index_.end()) return std::nullopt;
  return vector_at(it->second);
}

double EmbeddingTable::coverage(std::span<const std::string> tokens) const {
  if (tokens.empty()) return 1.0;
  std::size_t hits = 0;
  for (const auto& t : tokens) hits += index_.contains(t) ? 1 : 0;
  return static_cast<double>(hits) / static_cast<double>(tokens.size());
}

EmbeddingLoad read_word2vec_text(std::istream& in, std::string_view source) {
  const std::string src(source);
  std::string line;
  if (!std::getline(in, line)) throw ParseError(src, 1, "missing \"<count> <dim>\" header");
  const auto header = detail::split_ws(detail::strip_cr(line));
  if (header.size() != 2) throw ParseError(src, 1, "header must be \"<count> <dim>\"");
  const auto count = detail::parse_number<std::uint64_t>(header[0]);
  const auto dim = detail::parse_number<std::uint32_t>(header[1]);
  if (!count || !dim || *dim == 0) throw ParseError(src, 1, "malformed header \"" + line + "\"");

  std::vector<EmbeddingTable::Entry> entries;
  entries.reserve(static_cast<std::size_t>(std::min<std::uint64_t>(*count, 1u << 20)));
  std::size_t lineno = 1;
  while (std::getline(in, line)) {
    ++lineno;
    const auto fields = detail::split_ws(detail::strip_cr(line));
    if (fields.empty()) {
      throw ParseError(src, lineno, "empty line");
    }
    if (entries.size() == *count) {
      throw ParseError(src, lineno, "more entries than the header count " + std::to_string(*count));
    }
    if (fields.size() != *dim + 1) {
      throw ParseError(src, lineno,
                       "expected " + std::to_string(*dim) + " values, found " +
                           std::to_string(fields.size() - 1));
    }
    EmbeddingTable::Entry e{std::string(fields[0]), {}};
    e.vector.reserve(*dim);
    for (std::size_t k = 1; k < fields.size(); ++k) {
      const auto v = detail::parse_number<double>(fields[k]);
      if (!v) throw ParseError(src, lineno, "malformed value \"" + std::string(fields[k]) + "\"");
      const auto f = static_cast<float>(*v);
      if (!std::isfinite(*v) || !std::isfinite(f)) {
        throw ParseError(src, lineno, "non-finite value \"" + std::string(fields[k]) + "\"");
      }
      e.vector.push_back(f);
    }
    entries.push_back(std::move(e));
  }
  if (in.bad()) throw IoError("read failed: " + src);
  if (entries.size() != *count) {
    throw ParseError(src, lineno + 1,
                     "header announces " + std::to_string(*count) + " entries, found " +
                         std::to_string(entries.size()));
  }
  EmbeddingLoad out;
  out.table = EmbeddingTable::from_entries(*dim, std::move(entries), &out.duplicates);
  return out;
}

EmbeddingLoad load_word2vec_text(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open embedding file: " + path.string());
  return read_word2vec_text(in, path.string());
}

void write_word2vec_text(std::ostream& out, const EmbeddingTable& table) {
  std::string buf = std::to_string(table.size()) + " " + std::to_string(table.dim()) + "\n";
  out << buf;
  for (std::size_t row = 0; row < table.size(); ++row) {
    buf.clear();
    buf += table.tokens()[row];
    for (float v : table.vector_at(row)) {
      buf += ' ';
      detail::append_shortest(buf, v);
    }
    buf += '\n';
    out << buf;
  }
}

void write_word2vec_text(const std::filesystem::path& path, const EmbeddingTable& table) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot write embedding file: " + path.string());
  write_word2vec_text(out, table);
  if (!out) throw IoError("write failed: " + path.string());
}

}  // namespace embsvm
