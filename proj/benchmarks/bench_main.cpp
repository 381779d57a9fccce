#include <benchmark/benchmark.h>

#include <cmath>

#include "ctree/estimators.hpp"
#include "ctree/geometry.hpp"
#include "ctree/pruning.hpp"
#include "ctree/synthetic.hpp"

using namespace ctree;

namespace {

PointSet line_sample(std::size_t n) { return sample(two_bump(1.0, 4.0), n, 42); }

PointSet plane_sample(std::size_t n) {
  SeparatedBlobs b;
  b.blobs = {{{0.0, 0.0}, 1.0, 0.5 / M_PI}, {{3.0, 0.0}, 1.0, 0.5 / M_PI}};
  return sample(Density{b}, n, 42);
}

std::size_t k_for(std::size_t n) { return static_cast<std::size_t>(std::ceil(2.0 * std::log(n))); }

void BM_KnnRadii2D(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  const PointSet ps = plane_sample(n);
  for (auto _ : state) benchmark::DoNotOptimize(knn_radii(ps, k_for(n)));
  state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_KnnRadii2D)->RangeMultiplier(4)->Range(256, 4096)->Complexity();

void BM_BuildTree1D(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  const auto v = static_cast<Variant>(state.range(1));
  const PointSet ps = line_sample(n);
  for (auto _ : state) benchmark::DoNotOptimize(build_tree(ps, k_for(n), {v, std::sqrt(2.0)}));
  state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_BuildTree1D)
    ->ArgsProduct({{1024, 4096, 16384},
                   {static_cast<int>(Variant::RobustSingleLinkage), static_cast<int>(Variant::Knn),
                    static_cast<int>(Variant::MutualKnn)}});

void BM_BuildTree2D(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  const PointSet ps = plane_sample(n);
  for (auto _ : state)
    benchmark::DoNotOptimize(build_tree(ps, k_for(n), {Variant::RobustSingleLinkage, std::sqrt(2.0)}));
  state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_BuildTree2D)->RangeMultiplier(4)->Range(256, 4096)->Complexity();

void BM_Prune(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  const std::size_t k = k_for(n);
  const ClusterTree t = build_tree(line_sample(n), k, {Variant::RobustSingleLinkage, std::sqrt(2.0)});
  ScaleParams p;
  p.n = n;
  p.k = k;
  p.d = 1;
  p.alpha = std::sqrt(2.0);
  p.c_delta = 1.0;
  p.eps_tilde = 0.5;
  for (auto _ : state) benchmark::DoNotOptimize(prune(t, p));
  state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_Prune)->RangeMultiplier(4)->Range(1024, 16384)->Complexity();

}  // namespace

BENCHMARK_MAIN();
