#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "embsvm/corpus.hpp"
#include "embsvm/sparse.hpp"

namespace embsvm {

/// In-memory form of a sparse-vector file:
///
///   #dim=<dim>[ #boundary=<b>]
///   #<comment>            (any number, e.g. the producing configuration)
///   label1,label2<TAB>idx:val idx:val ...
///
/// Indices are 0-based and ascending; values use the shortest decimal that
/// round-trips the stored double.
struct VectorFile {
  std::uint32_t dim = 0;
  std::optional<std::uint32_t> boundary;
  std::vector<std::string> comments;  // without the leading '#'
  std::vector<LabelSet> labels;
  std::vector<SparseVector> rows;
};

void write_vector_file(std::ostream& out, const VectorFile& file);
void write_vector_file(const std::filesystem::path& path, const VectorFile& file);
VectorFile read_vector_file(std::istream& in, std::string_view source);
VectorFile read_vector_file(const std::filesystem::path& path);

}  // namespace embsvm
