// Serial vs OpenMP kernels on synthetic inputs.

#include <benchmark/benchmark.h>

#include <vector>

#include "evifuse/kernels.hpp"
#include "evifuse/random.hpp"

namespace {

using namespace evifuse;

struct FusionInputs {
  std::size_t samples;
  std::size_t classes = 2;
  std::vector<std::vector<double>> weighted;
  std::vector<std::vector<double>> references;
  std::vector<kernels::MemberView> views;
  std::vector<double> masses;
  std::vector<double> ignorance;

  FusionInputs(std::size_t n, std::size_t members) : samples(n), masses(n * 2), ignorance(n) {
    Rng rng(7);
    for (std::size_t m = 0; m < members; ++m) {
      std::vector<double> w(n * classes);
      for (std::size_t s = 0; s < n; ++s) {
        const double p = rng.uniform();
        w[2 * s] = p;
        w[2 * s + 1] = 1.0 - p;
      }
      weighted.push_back(std::move(w));
      references.push_back({rng.uniform(), rng.uniform()});
    }
    for (std::size_t m = 0; m < members; ++m) views.push_back({weighted[m], references[m], 0.1});
  }
};

void BM_FuseSerial(benchmark::State& state) {
  FusionInputs in(static_cast<std::size_t>(state.range(0)), static_cast<std::size_t>(state.range(1)));
  for (auto _ : state) {
    benchmark::DoNotOptimize(kernels::fuse_serial(in.views, in.samples, in.classes,
                                                  kernels::ProximityMode::Elementwise, in.masses,
                                                  in.ignorance));
  }
  state.SetItemsProcessed(state.iterations() * state.range(0));
}

void BM_FuseParallel(benchmark::State& state) {
  FusionInputs in(static_cast<std::size_t>(state.range(0)), static_cast<std::size_t>(state.range(1)));
  for (auto _ : state) {
    benchmark::DoNotOptimize(kernels::fuse_parallel(in.views, in.samples, in.classes,
                                                    kernels::ProximityMode::Elementwise, in.masses,
                                                    in.ignorance));
  }
  state.SetItemsProcessed(state.iterations() * state.range(0));
}

Matrix random_matrix(std::size_t rows, std::size_t cols, std::uint64_t seed) {
  Rng rng(seed);
  Matrix m(rows, cols);
  for (double& v : m.data()) v = rng.normal();
  return m;
}

void BM_KnnSerial(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  const Matrix train = random_matrix(n, 8, 1);
  const Matrix queries = random_matrix(n / 2, 8, 2);
  LabelVector labels(n);
  for (std::size_t i = 0; i < n; ++i) labels[i] = static_cast<Label>(i % 2);
  for (auto _ : state) {
    benchmark::DoNotOptimize(kernels::knn_scores_serial(train, labels, 2, queries, 10));
  }
}

void BM_KnnParallel(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  const Matrix train = random_matrix(n, 8, 1);
  const Matrix queries = random_matrix(n / 2, 8, 2);
  LabelVector labels(n);
  for (std::size_t i = 0; i < n; ++i) labels[i] = static_cast<Label>(i % 2);
  for (auto _ : state) {
    benchmark::DoNotOptimize(kernels::knn_scores_parallel(train, labels, 2, queries, 10));
  }
}

}  // namespace

BENCHMARK(BM_FuseSerial)->Args({200, 4})->Args({2000, 6})->Args({20000, 11});
BENCHMARK(BM_FuseParallel)->Args({200, 4})->Args({2000, 6})->Args({20000, 11});
BENCHMARK(BM_KnnSerial)->Arg(400)->Arg(2000);
BENCHMARK(BM_KnnParallel)->Arg(400)->Arg(2000);

BENCHMARK_MAIN();
