#include "embsvm/compose.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <vector>

namespace embsvm {

std::string_view to_string(Composition mode) {
  switch (mode) {
    case Composition::Avg: return "avg";
    case Composition::Min: return "min";
    case Composition::Max: return "max";
    case Composition::Conc: return "conc";
  }
  return "?";
}

std::optional<Composition> parse_composition(std::string_view name) {
  if (name == "avg") return Composition::Avg;
  if (name == "min") return Composition::Min;
  if (name == "max") return Composition::Max;
  if (name == "conc") return Composition::Conc;
  return std::nullopt;
}

namespace {

std::vector<std::span<const float>> in_vocab_vectors(const TokenizedDocument& doc,
                                                     const EmbeddingTable& table) {
  std::vector<std::span<const float>> rows;
  rows.reserve(doc.tokens.size());
  for (const auto& t : doc.tokens) {
    if (auto v = table.lookup(t)) rows.push_back(*v);
  }
  return rows;
}

// Neumaier-compensated mean; the result is insensitive to summation order
// far below 1e-12 for realistic document lengths.
void mean_into(std::span<const std::span<const float>> rows, std::span<double> out) {
  const std::size_t dim = out.size();
  std::vector<double> sum(dim, 0.0), comp(dim, 0.0);
  for (const auto& row : rows) {
    for (std::size_t j = 0; j < dim; ++j) {
      const double x = row[j];
      const double t = sum[j] + x;
      if (std::abs(sum[j]) >= std::abs(x)) {
        comp[j] += (sum[j] - t) + x;
      } else {
        comp[j] += (x - t) + sum[j];
      }
      sum[j] = t;
    }
  }
  const auto k = static_cast<double>(rows.size());
  for (std::size_t j = 0; j < dim; ++j) out[j] = (sum[j] + comp[j]) / k;
}

void extreme_into(std::span<const std::span<const float>> rows, std::span<double> out,
                  bool take_max) {
  const std::size_t dim = out.size();
  for (std::size_t j = 0; j < dim; ++j) out[j] = rows.front()[j];
  for (const auto& row : rows.subspan(1)) {
    for (std::size_t j = 0; j < dim; ++j) {
      const double x = row[j];
      out[j] = take_max ? std::max(out[j], x) : std::min(out[j], x);
    }
  }
}

void compose_into(std::span<const std::span<const float>> rows, Composition mode,
                  std::span<double> out) {
  if (rows.empty()) return;  // stays zero
  switch (mode) {
    case Composition::Avg: mean_into(rows, out); break;
    case Composition::Min: extreme_into(rows, out, false); break;
    case Composition::Max: extreme_into(rows, out, true); break;
    case Composition::Conc: {
      const std::size_t d = out.size() / 3;
      mean_into(rows, out.subspan(0, d));
      extreme_into(rows, out.subspan(d, d), false);
      extreme_into(rows, out.subspan(2 * d, d), true);
      break;
    }
  }
}

}  // namespace

ComposedDocument compose(const TokenizedDocument& doc, const EmbeddingTable& table,
                         Composition mode) {
  const auto rows = in_vocab_vectors(doc, table);
  const std::size_t dim = table.dim() * (mode == Composition::Conc ? 3u : 1u);
  ComposedDocument out{doc.id, DenseVector(dim), mode, rows.size()};
  compose_into(rows, mode, out.vector.components);
  return out;
}

ComposedDocument compose_conc(const TokenizedDocument& doc, const EmbeddingTable& table) {
  return compose(doc, table, Composition::Conc);
}

}  // namespace embsvm
