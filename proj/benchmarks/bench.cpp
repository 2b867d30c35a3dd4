#include <benchmark/benchmark.h>

#include <algorithm>

#include "embsvm/compose.hpp"
#include "embsvm/onehot.hpp"
#include "embsvm/rng.hpp"
#include "embsvm/svm.hpp"
#include "embsvm/synthetic.hpp"

namespace {

using namespace embsvm;

struct Data {
  SyntheticData synth;
  Corpus docs;
};

const Data& data() {
  static const Data d = [] {
    SyntheticConfig cfg;
    cfg.n_docs = 1000;
    Data out{make_synthetic(cfg), {}};
    out.docs = tokenize(out.synth.docs);
    return out;
  }();
  return d;
}

void BM_ComposeConc(benchmark::State& state) {
  const auto& d = data();
  std::size_t i = 0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(compose_conc(d.docs[i++ % d.docs.size()], d.synth.table));
  }
}
BENCHMARK(BM_ComposeConc);

void BM_HashTransform(benchmark::State& state) {
  const auto& d = data();
  const auto dim = static_cast<std::uint32_t>(state.range(0));
  std::size_t i = 0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(hash_transform(d.docs[i++ % d.docs.size()].tokens, dim));
  }
}
BENCHMARK(BM_HashTransform)->Arg(1000)->Arg(70000);

void BM_TfidfTransform(benchmark::State& state) {
  const auto& d = data();
  const auto model = TfidfModel::fit(d.docs);
  std::size_t i = 0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(model.transform(d.docs[i++ % d.docs.size()]));
  }
}
BENCHMARK(BM_TfidfTransform);

void BM_TrainBinary(benchmark::State& state) {
  const auto& d = data();
  const auto model = TfidfModel::fit(d.docs);
  std::vector<SparseVector> x;
  std::vector<std::int8_t> y;
  const std::string& label = d.docs.front().labels.front();
  for (const auto& doc : d.docs) {
    x.push_back(model.transform(doc));
    y.push_back(std::binary_search(doc.labels.begin(), doc.labels.end(), label) ? 1 : -1);
  }
  TrainConfig cfg;
  cfg.lambda = 1e-3;
  cfg.fit_bias = state.range(0) != 0;
  for (auto _ : state) benchmark::DoNotOptimize(train_binary(x, y, cfg));
}
BENCHMARK(BM_TrainBinary)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
