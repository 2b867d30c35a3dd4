#include "embsvm/onehot.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <ostream>
#include <istream>
#include <unordered_set>

#include "embsvm/error.hpp"
#include "text_format.hpp"

namespace embsvm {

TfidfModel TfidfModel::fit(const Corpus& corpus, bool normalize) {
  if (corpus.empty()) throw ValidationError("cannot fit tf-idf on an empty corpus");
  std::map<std::string, std::uint32_t> df;
  std::unordered_set<std::string_view> seen;
  for (const auto& doc : corpus) {
    seen.clear();
    for (const auto& t : doc.tokens) {
      if (seen.insert(t).second) ++df[t];
    }
  }
  TfidfModel m;
  m.n_docs_ = corpus.size();
  m.normalize_ = normalize;
  m.vocab_.reserve(df.size());
  m.df_.reserve(df.size());
  for (auto& [token, count] : df) {
    m.vocab_.push_back(token);
    m.df_.push_back(count);
  }
  m.build_index();
  return m;
}

void TfidfModel::build_index() {
  index_.clear();
  index_.reserve(vocab_.size());
  for (std::size_t i = 0; i < vocab_.size(); ++i) {
    index_.emplace(vocab_[i], static_cast<std::uint32_t>(i));
  }
}

std::optional<std::uint32_t> TfidfModel::index_of(const std::string& token) const {
  const auto it = index_.find(token);
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

double TfidfModel::idf(std::uint32_t index) const {
  return std::log((1.0 + static_cast<double>(n_docs_)) /
                  (1.0 + static_cast<double>(df_.at(index))));
}

SparseVector TfidfModel::transform(std::span<const std::string> tokens) const {
  std::map<std::uint32_t, std::uint32_t> tf;
  for (const auto& t : tokens) {
    if (auto idx = index_of(t)) ++tf[*idx];
  }
  std::vector<std::uint32_t> indices;
  std::vector<double> values;
  indices.reserve(tf.size());
  values.reserve(tf.size());
  for (const auto& [idx, count] : tf) {
    indices.push_back(idx);
    values.push_back((1.0 + std::log(static_cast<double>(count))) * (idf(idx) + 1.0));
  }
  auto v = SparseVector::from_sorted(dim(), std::move(indices), std::move(values));
  return normalize_ ? v.normalized() : v;
}

void TfidfModel::save(std::ostream& out) const {
  out << "#tfidf n_docs=" << n_docs_ << " normalize=" << (normalize_ ? 1 : 0) << '\n';
  for (std::size_t i = 0; i < vocab_.size(); ++i) {
    if (vocab_[i].find_first_of("\t\n\r") != std::string::npos) {
      throw ValidationError("tf-idf token contains a tab or line break");
    }
    out << vocab_[i] << '\t' << df_[i] << '\n';
  }
}

TfidfModel TfidfModel::load(std::istream& in, std::string_view source) {
  const std::string src(source);
  std::string line;
  if (!std::getline(in, line)) throw ParseError(src, 1, "missing #tfidf header");
  const auto head = detail::split_ws(detail::strip_cr(line));
  TfidfModel m;
  if (head.size() != 3 || head[0] != "#tfidf" || !head[1].starts_with("n_docs=") ||
      !head[2].starts_with("normalize=")) {
    throw ParseError(src, 1, "expected \"#tfidf n_docs=<N> normalize=<0|1>\"");
  }
  const auto n = detail::parse_number<std::uint64_t>(head[1].substr(7));
  const auto norm = head[2].substr(10);
  if (!n || *n == 0 || (norm != "0" && norm != "1")) throw ParseError(src, 1, "malformed header");
  m.n_docs_ = *n;
  m.normalize_ = norm == "1";

  std::size_t lineno = 1;
  while (std::getline(in, line)) {
    ++lineno;
    const std::string_view body = detail::strip_cr(line);
    const auto tab = body.rfind('\t');
    if (tab == std::string_view::npos || tab == 0) throw ParseError(src, lineno, "expected <token>\\t<df>");
    const auto df = detail::parse_number<std::uint32_t>(body.substr(tab + 1));
    if (!df || *df == 0 || *df > m.n_docs_) throw ParseError(src, lineno, "df outside [1, n_docs]");
    std::string token(body.substr(0, tab));
    if (!m.vocab_.empty() && !(m.vocab_.back() < token)) {
      throw ParseError(src, lineno, "vocabulary not in strictly increasing order");
    }
    m.vocab_.push_back(std::move(token));
    m.df_.push_back(*df);
  }
  if (in.bad()) throw IoError("read failed: " + src);
  m.build_index();
  return m;
}

SparseVector hash_transform(std::span<const std::string> tokens, std::uint32_t dim,
                            bool normalize) {
  if (dim == 0) throw ValidationError("hash dimension must be at least 1");
  std::vector<std::pair<std::uint32_t, double>> entries;
  entries.reserve(tokens.size());
  for (const auto& t : tokens) {
    entries.emplace_back(static_cast<std::uint32_t>(fnv1a64(t) % dim), 1.0);
  }
  auto v = SparseVector::from_unsorted(dim, std::move(entries));
  return normalize ? v.normalized() : v;
}

}  // namespace embsvm
