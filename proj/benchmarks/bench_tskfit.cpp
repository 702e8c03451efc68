#include <random>

#include <benchmark/benchmark.h>

#include "tskfit/fixture.hpp"
#include "tskfit/identify.hpp"
#include "tskfit/regress.hpp"

using namespace tskfit;

namespace {

Eigen::MatrixXd uniform(Eigen::Index rows, Eigen::Index cols, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  Eigen::MatrixXd x(rows, cols);
  for (Eigen::Index i = 0; i < rows; ++i) {
    for (Eigen::Index j = 0; j < cols; ++j) x(i, j) = u(rng);
  }
  return x;
}

void BM_FixtureInference(benchmark::State& state) {
  const auto doc = furnace_rule_base();
  Eigen::MatrixXd x = uniform(state.range(0), 9, 1);
  x.col(8) *= 3.0;
  for (auto _ : state) benchmark::DoNotOptimize(doc.model.infer_batch(x));
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_FixtureInference)->Arg(1000)->Arg(100000);

void BM_OlsFit(benchmark::State& state) {
  const Eigen::MatrixXd x = uniform(state.range(0), state.range(1), 2);
  const Eigen::VectorXd y = x.rowwise().sum() + Eigen::VectorXd::Constant(x.rows(), 1.0);
  for (auto _ : state) benchmark::DoNotOptimize(ols_fit(x, y));
}
BENCHMARK(BM_OlsFit)->Args({200, 10})->Args({10000, 10});

void BM_BackwardElimination(benchmark::State& state) {
  const Eigen::MatrixXd x = uniform(500, state.range(0), 3);
  const Eigen::VectorXd y = x.col(0) * 2.0 - x.col(1);
  for (auto _ : state) benchmark::DoNotOptimize(backward_eliminate(x, y, kDefaultEliminationThreshold));
}
BENCHMARK(BM_BackwardElimination)->Arg(5)->Arg(10);

void BM_Search(benchmark::State& state) {
  const Eigen::MatrixXd x = uniform(state.range(0), 3, 4);
  Eigen::VectorXd y(x.rows());
  for (Eigen::Index i = 0; i < x.rows(); ++i) y(i) = x(i, 0) < 0.5 ? x(i, 1) : 10.0 * x(i, 0) - x(i, 2);
  const Dataset ds({"x1", "x2", "x3"}, "y", x, y);
  SearchConfig config;
  config.premise_seed = state.range(1) ? SeedMode::Correlation : SeedMode::Exhaustive;
  for (auto _ : state) benchmark::DoNotOptimize(identify(ds, config));
}
BENCHMARK(BM_Search)->Args({200, 0})->Args({200, 1})->Unit(benchmark::kMillisecond);

}  // namespace
BENCHMARK_MAIN();
