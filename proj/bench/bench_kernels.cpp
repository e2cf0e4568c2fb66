#include <benchmark/benchmark.h>

#include <random>
#include <vector>

#include "beamblow/kernels.hpp"
#include "beamblow/mesh.hpp"

using namespace beamblow;

namespace {

struct Data {
  kernels::Shape shape;
  std::vector<double> u;
  std::vector<double> out;

  explicit Data(int n) {
    const Grid g = make_grid(2, 1.0, n);
    shape = g.shape();
    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> unit(-1.0, 1.0);
    u.resize(shape.size());
    for (double& x : u) x = unit(rng);
    out.resize(shape.size());
  }
};

template <void (*Apply)(const kernels::Shape&, std::span<const double>, std::span<double>)>
void stencil(benchmark::State& state) {
  Data d(static_cast<int>(state.range(0)));
  for (auto _ : state) {
    Apply(d.shape, d.u, d.out);
    benchmark::DoNotOptimize(d.out.data());
  }
  state.SetItemsProcessed(state.iterations() * static_cast<long>(d.u.size()));
}

template <double (*Reduce)(std::span<const double>, double)>
void power_sum(benchmark::State& state) {
  Data d(static_cast<int>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(Reduce(d.u, 4.0));
  state.SetItemsProcessed(state.iterations() * static_cast<long>(d.u.size()));
}

template <double (*Dot)(std::span<const double>, std::span<const double>)>
void dot(benchmark::State& state) {
  Data d(static_cast<int>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(Dot(d.u, d.u));
  state.SetItemsProcessed(state.iterations() * static_cast<long>(d.u.size()));
}

}  // namespace

BENCHMARK(stencil<kernels::serial::biharmonic>)->Name("biharmonic/serial")->Arg(64)->Arg(256)->Arg(1024);
BENCHMARK(stencil<kernels::parallel::biharmonic>)->Name("biharmonic/parallel")->Arg(64)->Arg(256)->Arg(1024);
BENCHMARK(stencil<kernels::serial::laplacian>)->Name("laplacian/serial")->Arg(64)->Arg(256)->Arg(1024);
BENCHMARK(stencil<kernels::parallel::laplacian>)->Name("laplacian/parallel")->Arg(64)->Arg(256)->Arg(1024);
BENCHMARK(power_sum<kernels::serial::sum_abs_pow>)->Name("sum_abs_pow/serial")->Arg(256)->Arg(1024);
BENCHMARK(power_sum<kernels::parallel::sum_abs_pow>)->Name("sum_abs_pow/parallel")->Arg(256)->Arg(1024);
BENCHMARK(dot<kernels::serial::dot>)->Name("dot/serial")->Arg(256)->Arg(1024);
BENCHMARK(dot<kernels::parallel::dot>)->Name("dot/parallel")->Arg(256)->Arg(1024);

BENCHMARK_MAIN();
