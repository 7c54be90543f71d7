#include <benchmark/benchmark.h>

#include "support/synthetic.hpp"
#include "talkmine/topics.hpp"

namespace {

using talkmine::testing::make_disjoint_lda;

void BM_GibbsSweep(benchmark::State& state) {
  const auto docs = static_cast<std::size_t>(state.range(0));
  const auto s = make_disjoint_lda(docs, 200, 5, 0.1, 80, 120, 7);
  talkmine::LdaConfig cfg;
  cfg.seed = 1;
  talkmine::GibbsSampler sampler(s.dtm, cfg);
  std::size_t tokens = 0;
  for (const auto& w : sampler.tokens()) tokens += w.size();
  for (auto _ : state) sampler.sweep();
  state.SetItemsProcessed(static_cast<std::int64_t>(state.iterations() * tokens));
}
BENCHMARK(BM_GibbsSweep)->Arg(100)->Arg(500)->Unit(benchmark::kMillisecond);

void BM_FitLda(benchmark::State& state) {
  const auto s = make_disjoint_lda(100, 100, 5, 0.1, 50, 80, 3);
  talkmine::LdaConfig cfg;
  cfg.iterations = 200;
  cfg.burn_in = 50;
  for (auto _ : state) benchmark::DoNotOptimize(talkmine::fit_lda(s.dtm, s.terms, cfg));
}
BENCHMARK(BM_FitLda)->Unit(benchmark::kMillisecond);

}  // namespace
