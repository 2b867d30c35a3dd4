#include "embsvm/synthetic.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <string>

#include "embsvm/error.hpp"
#include "embsvm/rng.hpp"

namespace embsvm {

namespace {

// Inverse-CDF sampler over a fixed discrete distribution.
class Discrete {
 public:
  explicit Discrete(std::vector<double> weights) : cdf_(std::move(weights)) {
    double acc = 0.0;
    for (auto& w : cdf_) w = (acc += w);
    for (auto& w : cdf_) w /= acc;
  }
  std::size_t draw(Rng& rng) const {
    const double u = rng.uniform();
    const auto it = std::upper_bound(cdf_.begin(), cdf_.end(), u);
    return std::min<std::size_t>(static_cast<std::size_t>(it - cdf_.begin()), cdf_.size() - 1);
  }

 private:
  std::vector<double> cdf_;
};

Discrete zipf(std::size_t n, double exponent) {
  std::vector<double> w(n);
  for (std::size_t k = 0; k < n; ++k) w[k] = 1.0 / std::pow(static_cast<double>(k + 1), exponent);
  return Discrete(std::move(w));
}

std::string numbered(const char* prefix, std::size_t k) {
  return prefix + std::to_string(k);
}

std::string class_label(std::size_t c) {
  char buf[16];
  std::snprintf(buf, sizeof(buf), "c%02zu", c);
  return buf;
}

}  // namespace

SyntheticData make_synthetic(const SyntheticConfig& cfg) {
  if (cfg.n_classes == 0 || cfg.n_docs == 0 || cfg.dim == 0 || cfg.topic_words_per_class == 0 ||
      cfg.background_words == 0 || cfg.min_length == 0 || cfg.max_length < cfg.min_length) {
    throw ValidationError("invalid synthetic corpus configuration");
  }
  Rng rng(cfg.seed);

  // Vocabulary and embeddings.
  std::vector<std::vector<double>> centroids(cfg.n_classes, std::vector<double>(cfg.dim));
  for (auto& c : centroids) {
    for (auto& v : c) v = cfg.centroid_scale * rng.normal();
  }
  std::vector<std::vector<std::string>> topic_words(cfg.n_classes);
  std::vector<EmbeddingTable::Entry> entries;
  auto add_word = [&](const std::string& word, const std::vector<double>* centroid) {
    std::vector<float> vec(cfg.dim);
    for (std::uint32_t j = 0; j < cfg.dim; ++j) {
      const double base = centroid != nullptr ? (*centroid)[j] : 0.0;
      vec[j] = static_cast<float>(base + cfg.word_noise * rng.normal());
    }
    if (rng.uniform() >= cfg.oov_rate) entries.push_back({word, std::move(vec)});
  };
  for (std::size_t c = 0; c < cfg.n_classes; ++c) {
    for (std::size_t k = 0; k < cfg.topic_words_per_class; ++k) {
      topic_words[c].push_back("t" + std::to_string(c) + "w" + std::to_string(k));
      add_word(topic_words[c].back(), &centroids[c]);
    }
  }
  std::vector<std::string> background;
  for (std::size_t k = 0; k < cfg.background_words; ++k) {
    background.push_back(numbered("bg", k));
    add_word(background.back(), nullptr);
  }

  const Discrete class_prior = zipf(cfg.n_classes, 0.5);
  const Discrete topic_dist = zipf(cfg.topic_words_per_class, 0.8);
  const Discrete background_dist = zipf(cfg.background_words, 1.0);

  SyntheticData out;
  out.docs.reserve(cfg.n_docs);
  for (std::size_t i = 0; i < cfg.n_docs; ++i) {
    std::vector<std::size_t> classes = {class_prior.draw(rng)};
    for (int extra = 0; extra < 2; ++extra) {
      if (rng.uniform() >= cfg.extra_label_rate) break;
      const std::size_t c = class_prior.draw(rng);
      if (std::find(classes.begin(), classes.end(), c) == classes.end()) classes.push_back(c);
    }
    const std::size_t length =
        cfg.min_length + static_cast<std::size_t>(rng.below(cfg.max_length - cfg.min_length + 1));
    std::string text;
    for (std::size_t t = 0; t < length; ++t) {
      if (t > 0) text += ' ';
      if (rng.uniform() < cfg.topic_rate) {
        const std::size_t c = classes[rng.below(classes.size())];
        text += topic_words[c][topic_dist.draw(rng)];
      } else {
        text += background[background_dist.draw(rng)];
      }
    }
    RawDocument doc;
    char id[16];
    std::snprintf(id, sizeof(id), "d%05zu", i);
    doc.id = id;
    for (std::size_t c : classes) doc.labels.push_back(class_label(c));
    std::sort(doc.labels.begin(), doc.labels.end());
    doc.text = std::move(text);
    out.docs.push_back(std::move(doc));
  }
  out.table = EmbeddingTable::from_entries(cfg.dim, std::move(entries));
  return out;
}

}  // namespace embsvm
