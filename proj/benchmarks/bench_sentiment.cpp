#include <benchmark/benchmark.h>

#include "support/synthetic.hpp"
#include "talkmine/elastic_net.hpp"
#include "talkmine/preprocess.hpp"

namespace {

void BM_Tfidf(benchmark::State& state) {
  talkmine::Rng rng(5);
  const auto dtm = talkmine::testing::random_counts(rng, static_cast<std::size_t>(state.range(0)), 2000, 0.01);
  for (auto _ : state) benchmark::DoNotOptimize(talkmine::tfidf(dtm));
}
BENCHMARK(BM_Tfidf)->Arg(1000)->Arg(10000);

struct Problem {
  talkmine::DesignMatrix x;
  std::vector<double> y;
};

Problem logistic_problem(std::size_t n, std::size_t p) {
  talkmine::Rng rng(9);
  std::vector<std::vector<double>> rows(n, std::vector<double>(p, 0.0));
  std::vector<double> y(n);
  for (std::size_t i = 0; i < n; ++i) {
    double eta = 0.0;
    for (std::size_t j = 0; j < p; ++j) {
      if (rng.uniform01() < 0.05) rows[i][j] = rng.uniform01();
      eta += (j % 3 == 0 ? 2.0 : -1.0) * rows[i][j];
    }
    y[i] = rng.uniform01() < talkmine::logistic(eta) ? 1.0 : 0.0;
  }
  return {talkmine::DesignMatrix::from_dense(rows), y};
}

void BM_ElasticNetPath(benchmark::State& state) {
  const auto prob = logistic_problem(static_cast<std::size_t>(state.range(0)), 300);
  const talkmine::LogisticElasticNet net(prob.x, prob.y);
  const auto grid = talkmine::log_spaced_grid(net.lambda_max(0.5), 50, 1e-4);
  for (auto _ : state) {
    talkmine::Coefficients c;
    for (double lambda : grid) c = net.fit(lambda, 0.5, c).coef;
    benchmark::DoNotOptimize(c);
  }
}
BENCHMARK(BM_ElasticNetPath)->Arg(500)->Arg(2000)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
