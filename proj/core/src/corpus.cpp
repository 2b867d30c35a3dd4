#include "embsvm/corpus.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <fstream>
#include <map>
#include <numeric>
#include <set>
#include <unordered_map>
#include <unordered_set>

#include <unicode/locid.h>
#include <unicode/uchar.h>
#include <unicode/unistr.h>

#include <json.hpp>

#include "embsvm/error.hpp"
#include "embsvm/rng.hpp"
#include "text_format.hpp"

namespace embsvm {

void SplitSpec::validate() const {
  if (!(train_fraction > 0.0 && train_fraction < 1.0)) {
    throw ValidationError("train_fraction must lie strictly between 0 and 1");
  }
}

std::vector<std::string> tokenize(std::string_view text) {
  std::vector<std::string> tokens;
  if (text.empty()) return tokens;

  icu::UnicodeString lowered =
      icu::UnicodeString::fromUTF8(icu::StringPiece(text.data(), static_cast<int32_t>(text.size())));
  lowered.toLower(icu::Locale::getRoot());

  icu::UnicodeString current;
  auto flush = [&] {
    if (current.isEmpty()) return;
    std::string utf8;
    current.toUTF8String(utf8);
    tokens.push_back(std::move(utf8));
    current.remove();
  };

  for (int32_t i = 0; i < lowered.length();) {
    const UChar32 c = lowered.char32At(i);
    i = lowered.moveIndex32(i, 1);
    if (u_ispunct(c)) {
      flush();
      current.append(c);
      flush();
    } else if (u_isUWhiteSpace(c)) {
      flush();
    } else {
      current.append(c);
    }
  }
  flush();
  return tokens;
}

TokenizedDocument tokenize(const RawDocument& doc) {
  return TokenizedDocument{doc.id, doc.labels, tokenize(doc.text)};
}

Corpus tokenize(std::span<const RawDocument> docs) {
  Corpus out;
  out.reserve(docs.size());
  for (const auto& d : docs) out.push_back(tokenize(d));
  return out;
}

Corpus filter_min_count(const Corpus& corpus, std::size_t min_count) {
  if (min_count < 1) throw ValidationError("min_count must be at least 1");
  if (min_count == 1) return corpus;
  std::unordered_map<std::string, std::size_t> freq;
  for (const auto& d : corpus) {
    for (const auto& t : d.tokens) ++freq[t];
  }
  Corpus out;
  out.reserve(corpus.size());
  for (const auto& d : corpus) {
    TokenizedDocument kept{d.id, d.labels, {}};
    for (const auto& t : d.tokens) {
      if (freq[t] >= min_count) kept.tokens.push_back(t);
    }
    out.push_back(std::move(kept));
  }
  return out;
}

namespace {

// Swaps train/test documents while that lowers the summed squared deviation of
// per-label train counts from f * count. Documents with the same label set are
// interchangeable, so candidates are enumerated per distinct label set.
void refine_by_swaps(const std::vector<std::vector<std::size_t>>& doc_labels,
                     const std::vector<std::size_t>& label_count, double f,
                     std::vector<int>& side_of) {
  std::map<std::vector<std::size_t>, std::size_t> sig_ids;
  std::vector<std::size_t> sig_of(doc_labels.size());
  for (std::size_t i = 0; i < doc_labels.size(); ++i) {
    sig_of[i] = sig_ids.emplace(doc_labels[i], sig_ids.size()).first->second;
  }
  std::vector<const std::vector<std::size_t>*> sig_labels(sig_ids.size());
  for (const auto& [labels, id] : sig_ids) sig_labels[id] = &labels;
  std::array<std::vector<std::vector<std::size_t>>, 2> members;
  members[0].resize(sig_ids.size());
  members[1].resize(sig_ids.size());
  for (std::size_t i = 0; i < doc_labels.size(); ++i) members[side_of[i]][sig_of[i]].push_back(i);

  std::vector<double> dev(label_count.size());
  for (std::size_t l = 0; l < dev.size(); ++l) dev[l] = -f * static_cast<double>(label_count[l]);
  for (std::size_t i = 0; i < doc_labels.size(); ++i) {
    if (side_of[i] == 0) {
      for (std::size_t l : doc_labels[i]) dev[l] += 1.0;
    }
  }

  // Change of the objective when a document with labels `out` leaves train and
  // one with labels `in` enters.
  auto delta = [&](const std::vector<std::size_t>& out, const std::vector<std::size_t>& in) {
    double d = 0.0;
    auto a = out.begin(), b = in.begin();
    while (a != out.end() || b != in.end()) {
      if (b == in.end() || (a != out.end() && *a < *b)) {
        d += 1.0 - 2.0 * dev[*a++];
      } else if (a == out.end() || *b < *a) {
        d += 1.0 + 2.0 * dev[*b++];
      } else {
        ++a;
        ++b;
      }
    }
    return d;
  };

  constexpr std::size_t kMaxPasses = 100;
  for (std::size_t pass = 0; pass < kMaxPasses; ++pass) {
    bool improved = false;
    for (std::size_t s = 0; s < sig_labels.size(); ++s) {
      while (!members[0][s].empty()) {
        std::size_t best = sig_labels.size();
        double best_delta = -1e-9;
        for (std::size_t t = 0; t < sig_labels.size(); ++t) {
          if (t == s || members[1][t].empty()) continue;
          const double d = delta(*sig_labels[s], *sig_labels[t]);
          if (d < best_delta) {
            best_delta = d;
            best = t;
          }
        }
        if (best == sig_labels.size()) break;
        const std::size_t a = members[0][s].back(), b = members[1][best].back();
        members[0][s].pop_back();
        members[1][best].pop_back();
        members[1][s].push_back(a);
        members[0][best].push_back(b);
        side_of[a] = 1;
        side_of[b] = 0;
        for (std::size_t l : doc_labels[a]) dev[l] -= 1.0;
        for (std::size_t l : doc_labels[b]) dev[l] += 1.0;
        improved = true;
      }
    }
    if (!improved) break;
  }
}

}  // namespace

SplitIndices stratified_split_indices(std::span<const LabelSet> labels, const SplitSpec& spec) {
  spec.validate();
  const std::size_t n = labels.size();
  if (n == 0) throw ValidationError("cannot split an empty corpus");

  std::map<std::string, std::size_t> label_ids;
  for (std::size_t i = 0; i < n; ++i) {
    if (labels[i].empty()) {
      throw ValidationError("stratified split requires every document to carry a label");
    }
    for (const auto& l : labels[i]) label_ids.emplace(l, 0);
  }
  std::size_t next_id = 0;
  for (auto& [name, id] : label_ids) id = next_id++;
  const std::size_t n_labels = label_ids.size();

  std::vector<std::vector<std::size_t>> doc_labels(n);
  std::vector<std::size_t> label_count(n_labels, 0);
  for (std::size_t i = 0; i < n; ++i) {
    for (const auto& l : labels[i]) {
      const std::size_t id = label_ids.at(l);
      doc_labels[i].push_back(id);
      ++label_count[id];
    }
  }

  const double f = spec.train_fraction;
  const auto n_train = static_cast<std::size_t>(std::llround(f * static_cast<double>(n)));
  std::array<std::size_t, 2> capacity = {n_train, n - n_train};
  std::array<std::vector<double>, 2> demand;
  demand[0].resize(n_labels);
  demand[1].resize(n_labels);
  for (std::size_t l = 0; l < n_labels; ++l) {
    demand[0][l] = f * static_cast<double>(label_count[l]);
    demand[1][l] = (1.0 - f) * static_cast<double>(label_count[l]);
  }

  // Seed-keyed visiting order of documents.
  Rng rng(spec.seed);
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});
  rng.shuffle(std::span<std::size_t>(order));

  std::vector<std::vector<std::size_t>> docs_by_label(n_labels);
  for (std::size_t doc : order) {
    for (std::size_t l : doc_labels[doc]) docs_by_label[l].push_back(doc);
  }

  std::vector<std::size_t> unassigned_with(label_count);
  std::vector<int> side_of(n, -1);
  std::size_t remaining = n;

  while (remaining > 0) {
    std::size_t rarest = n_labels;
    for (std::size_t l = 0; l < n_labels; ++l) {
      if (unassigned_with[l] == 0) continue;
      if (rarest == n_labels || unassigned_with[l] < unassigned_with[rarest]) rarest = l;
    }
    for (std::size_t doc : docs_by_label[rarest]) {
      if (side_of[doc] >= 0) continue;
      int side;
      if (capacity[0] == 0) {
        side = 1;
      } else if (capacity[1] == 0) {
        side = 0;
      } else if (demand[0][rarest] != demand[1][rarest]) {
        side = demand[0][rarest] > demand[1][rarest] ? 0 : 1;
      } else if (capacity[0] != capacity[1]) {
        side = capacity[0] > capacity[1] ? 0 : 1;
      } else {
        side = static_cast<int>(rng.below(2));
      }
      side_of[doc] = side;
      --capacity[side];
      --remaining;
      for (std::size_t l : doc_labels[doc]) {
        demand[side][l] -= 1.0;
        --unassigned_with[l];
      }
    }
  }

  refine_by_swaps(doc_labels, label_count, f, side_of);

  SplitIndices out;
  out.train.reserve(n_train);
  out.test.reserve(n - n_train);
  for (std::size_t i = 0; i < n; ++i) (side_of[i] == 0 ? out.train : out.test).push_back(i);
  return out;
}

std::vector<std::size_t> subsample_indices(std::size_t size, std::size_t n, std::uint64_t seed) {
  if (n < 1 || n > size) {
    throw ValidationError("subsample size " + std::to_string(n) + " outside [1, " +
                          std::to_string(size) + "]");
  }
  std::vector<std::size_t> idx(size);
  std::iota(idx.begin(), idx.end(), std::size_t{0});
  Rng rng(seed);
  for (std::size_t i = 0; i < n; ++i) {
    const std::size_t j = i + rng.below(size - i);
    std::swap(idx[i], idx[j]);
  }
  idx.resize(n);
  std::sort(idx.begin(), idx.end());
  return idx;
}

Corpus subsample(const Corpus& corpus, std::size_t n, std::uint64_t seed) {
  Corpus out;
  out.reserve(n);
  for (std::size_t i : subsample_indices(corpus.size(), n, seed)) out.push_back(corpus[i]);
  return out;
}

std::vector<std::string> label_universe(const Corpus& corpus) {
  std::set<std::string> all;
  for (const auto& d : corpus) all.insert(d.labels.begin(), d.labels.end());
  return {all.begin(), all.end()};
}

std::vector<RawDocument> read_corpus(std::istream& in, std::string_view source,
                                     bool require_labels) {
  const std::string src(source);
  std::vector<RawDocument> docs;
  std::unordered_set<std::string> ids;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const std::string_view body = detail::strip_cr(line);
    if (body.find_first_not_of(" \t") == std::string_view::npos) continue;

    nlohmann::json obj;
    try {
      obj = nlohmann::json::parse(body);
    } catch (const nlohmann::json::parse_error& e) {
      throw ParseError(src, lineno, std::string("invalid JSON: ") + e.what());
    }
    if (!obj.is_object()) throw ParseError(src, lineno, "expected a JSON object");

    RawDocument doc;
    const auto id = obj.find("id");
    if (id == obj.end() || !id->is_string()) {
      throw ParseError(src, lineno, "missing string field \"id\"");
    }
    doc.id = id->get<std::string>();
    const auto text = obj.find("text");
    if (text == obj.end() || !text->is_string()) {
      throw ParseError(src, lineno, "missing string field \"text\"");
    }
    doc.text = text->get<std::string>();
    const auto labels = obj.find("labels");
    if (labels == obj.end()) {
      if (require_labels) throw ParseError(src, lineno, "missing field \"labels\"");
    } else {
      if (!labels->is_array()) throw ParseError(src, lineno, "\"labels\" must be an array");
      for (const auto& l : *labels) {
        if (!l.is_string()) throw ParseError(src, lineno, "labels must be strings");
        doc.labels.push_back(l.get<std::string>());
      }
      std::sort(doc.labels.begin(), doc.labels.end());
      if (std::adjacent_find(doc.labels.begin(), doc.labels.end()) != doc.labels.end()) {
        throw ParseError(src, lineno, "duplicate label in document \"" + doc.id + "\"");
      }
    }
    if (!ids.insert(doc.id).second) {
      throw ParseError(src, lineno, "duplicate document id \"" + doc.id + "\"");
    }
    docs.push_back(std::move(doc));
  }
  if (in.bad()) throw IoError("read failed: " + src);
  return docs;
}

std::vector<RawDocument> read_corpus(const std::filesystem::path& path, bool require_labels) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open corpus file: " + path.string());
  return read_corpus(in, path.string(), require_labels);
}

void write_corpus(std::ostream& out, std::span<const RawDocument> docs) {
  for (const auto& d : docs) {
    nlohmann::ordered_json obj;
    obj["id"] = d.id;
    obj["labels"] = d.labels;
    obj["text"] = d.text;
    try {
      out << obj.dump() << '\n';
    } catch (const nlohmann::json::type_error& e) {
      throw ValidationError("document \"" + d.id + "\" is not valid UTF-8");
    }
  }
}

void write_corpus(const std::filesystem::path& path, std::span<const RawDocument> docs) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot write corpus file: " + path.string());
  write_corpus(out, docs);
  if (!out) throw IoError("write failed: " + path.string());
}

}  // namespace embsvm
