#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <string_view>

#include "embsvm/corpus.hpp"
#include "embsvm/embeddings.hpp"
#include "embsvm/sparse.hpp"

namespace embsvm {

enum class Composition { Avg, Min, Max, Conc };

std::string_view to_string(Composition mode);
std::optional<Composition> parse_composition(std::string_view name);

struct ComposedDocument {
  std::string id;
  DenseVector vector;
  Composition mode = Composition::Avg;
  std::size_t n_in_vocab = 0;  // token occurrences found in the table
};

/// Element-wise mean, minimum or maximum over the vectors of the in-vocabulary
/// token occurrences. Documents without any in-vocabulary token map to the
/// zero vector. Conc yields [avg, min, max] of dimension 3 * dim.
ComposedDocument compose(const TokenizedDocument& doc, const EmbeddingTable& table,
                         Composition mode);

ComposedDocument compose_conc(const TokenizedDocument& doc, const EmbeddingTable& table);

}  // namespace embsvm
