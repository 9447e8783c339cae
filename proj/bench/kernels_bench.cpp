// Serial reference vs OpenMP kernels on a synthetic corpus.

#include <benchmark/benchmark.h>

#include "mgtd/eval.hpp"
#include "mgtd/lexfeatures.hpp"
#include "mgtd/models.hpp"
#include "mgtd/style.hpp"
#include "mgtd/tfidf.hpp"
#include "../tests/support/synthetic.hpp"

using namespace mgtd;

namespace {

const std::vector<Document>& raw_docs() {
  static const auto docs = testing::desk_scale_documents(2000, 1);
  return docs;
}

const Corpus& corpus() {
  static const auto c = build_corpus(raw_docs());
  return c;
}

Execution mode(const benchmark::State& state) { return state.range(0) ? Execution::Parallel : Execution::Serial; }

void label(benchmark::State& state) { state.SetLabel(state.range(0) ? "parallel" : "serial"); }

void BM_Clean(benchmark::State& state) {
  for (auto _ : state) {
    if (state.range(0)) {
      benchmark::DoNotOptimize(build_corpus(raw_docs()));
    } else {
      std::vector<CleanDocument> out;
      out.reserve(raw_docs().size());
      for (const auto& d : raw_docs()) out.push_back(clean_document(d));
      benchmark::DoNotOptimize(out);
    }
  }
  label(state);
}

void BM_Characterize(benchmark::State& state) {
  const auto& c = corpus();
  for (auto _ : state) {
    benchmark::DoNotOptimize(characterize(c, LexiconSet::defaults(), {}, TextResources::defaults(), mode(state)));
  }
  label(state);
}

void BM_TfidfTransform(benchmark::State& state) {
  const auto& c = corpus();
  static const auto model = TfidfModel::fit(c.documents, TfidfConfig{});
  for (auto _ : state) benchmark::DoNotOptimize(model.transform_all(c.documents, mode(state)));
  label(state);
}

void BM_StyleRows(benchmark::State& state) {
  const auto& c = corpus();
  for (auto _ : state) benchmark::DoNotOptimize(style_rows(c.documents, mode(state)));
  label(state);
}

void BM_Forest(benchmark::State& state) {
  const auto& c = corpus();
  static const auto x = TfidfModel::fit(c.documents, TfidfConfig{}).transform_all(c.documents);
  ModelConfig cfg;
  cfg.forest_trees = 20;
  cfg.execution = mode(state);
  for (auto _ : state) benchmark::DoNotOptimize(train(ModelKind::Forest, x, cfg));
  label(state);
}

}  // namespace

BENCHMARK(BM_Clean)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_Characterize)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_TfidfTransform)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_StyleRows)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_Forest)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
