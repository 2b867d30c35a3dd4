#include "embsvm/vector_io.hpp"

#include <algorithm>
#include <fstream>
#include <istream>
#include <ostream>

#include "embsvm/error.hpp"
#include "text_format.hpp"

namespace embsvm {

namespace {

void check_label(const std::string& label) {
  if (label.empty() || label.front() == '#' ||
      label.find_first_of(", \t\r\n") != std::string::npos) {
    throw ValidationError("label \"" + label +
                          "\" cannot be stored in a vector file (empty, leading '#', comma or "
                          "white space)");
  }
}

}  // namespace

void write_vector_file(std::ostream& out, const VectorFile& file) {
  if (file.labels.size() != file.rows.size()) {
    throw ValidationError("vector file: label and row counts differ");
  }
  std::string buf = "#dim=" + std::to_string(file.dim);
  if (file.boundary) buf += " #boundary=" + std::to_string(*file.boundary);
  buf += '\n';
  for (const auto& c : file.comments) {
    if (c.find_first_of("\r\n") != std::string::npos) {
      throw ValidationError("vector file comment contains a line break");
    }
    buf += '#';
    buf += c;
    buf += '\n';
  }
  out << buf;
  for (std::size_t r = 0; r < file.rows.size(); ++r) {
    const auto& row = file.rows[r];
    if (row.dim() != file.dim) {
      throw ValidationError("vector file: row " + std::to_string(r) + " has dim " +
                            std::to_string(row.dim()) + ", header says " +
                            std::to_string(file.dim));
    }
    buf.clear();
    for (std::size_t k = 0; k < file.labels[r].size(); ++k) {
      check_label(file.labels[r][k]);
      if (k > 0) buf += ',';
      buf += file.labels[r][k];
    }
    buf += '\t';
    for (std::size_t k = 0; k < row.nnz(); ++k) {
      if (k > 0) buf += ' ';
      buf += std::to_string(row.indices()[k]);
      buf += ':';
      detail::append_shortest(buf, row.values()[k]);
    }
    buf += '\n';
    out << buf;
  }
}

void write_vector_file(const std::filesystem::path& path, const VectorFile& file) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot write vector file: " + path.string());
  write_vector_file(out, file);
  if (!out) throw IoError("write failed: " + path.string());
}

VectorFile read_vector_file(std::istream& in, std::string_view source) {
  const std::string src(source);
  VectorFile file;
  std::string line;
  if (!std::getline(in, line)) throw ParseError(src, 1, "missing #dim header");
  const auto head = detail::split_ws(detail::strip_cr(line));
  if (head.empty() || head.size() > 2 || !head[0].starts_with("#dim=")) {
    throw ParseError(src, 1, "expected \"#dim=<dim>\" header");
  }
  const auto dim = detail::parse_number<std::uint32_t>(head[0].substr(5));
  if (!dim) throw ParseError(src, 1, "malformed dimension");
  file.dim = *dim;
  if (head.size() == 2) {
    if (!head[1].starts_with("#boundary=")) throw ParseError(src, 1, "expected #boundary=<b>");
    const auto b = detail::parse_number<std::uint32_t>(head[1].substr(10));
    if (!b || *b > file.dim) throw ParseError(src, 1, "malformed boundary");
    file.boundary = *b;
  }

  std::size_t lineno = 1;
  while (std::getline(in, line)) {
    ++lineno;
    const std::string_view body = detail::strip_cr(line);
    if (!body.empty() && body.front() == '#') {
      if (!file.rows.empty()) throw ParseError(src, lineno, "comment after data rows");
      file.comments.emplace_back(body.substr(1));
      continue;
    }
    const auto tab = body.find('\t');
    if (tab == std::string_view::npos) throw ParseError(src, lineno, "missing TAB after labels");

    LabelSet labels;
    std::string_view label_part = body.substr(0, tab);
    while (!label_part.empty()) {
      const auto comma = label_part.find(',');
      const auto label = label_part.substr(0, comma);
      if (label.empty()) throw ParseError(src, lineno, "empty label");
      labels.emplace_back(label);
      if (comma == std::string_view::npos) break;
      label_part.remove_prefix(comma + 1);
      if (label_part.empty()) throw ParseError(src, lineno, "trailing comma in labels");
    }
    std::sort(labels.begin(), labels.end());
    if (std::adjacent_find(labels.begin(), labels.end()) != labels.end()) {
      throw ParseError(src, lineno, "duplicate label");
    }

    std::vector<std::uint32_t> indices;
    std::vector<double> values;
    for (const auto field : detail::split_ws(body.substr(tab + 1))) {
      const auto colon = field.find(':');
      if (colon == std::string_view::npos) throw ParseError(src, lineno, "expected idx:val");
      const auto idx = detail::parse_number<std::uint32_t>(field.substr(0, colon));
      const auto val = detail::parse_number<double>(field.substr(colon + 1));
      if (!idx || !val) throw ParseError(src, lineno, "malformed entry \"" + std::string(field) + "\"");
      indices.push_back(*idx);
      values.push_back(*val);
    }
    try {
      file.rows.push_back(SparseVector::from_sorted(file.dim, std::move(indices), std::move(values)));
    } catch (const ValidationError& e) {
      throw ParseError(src, lineno, e.what());
    }
    file.labels.push_back(std::move(labels));
  }
  if (in.bad()) throw IoError("read failed: " + src);
  return file;
}

VectorFile read_vector_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open vector file: " + path.string());
  return read_vector_file(in, path.string());
}

}  // namespace embsvm
