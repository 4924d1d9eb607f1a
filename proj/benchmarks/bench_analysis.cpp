// SPDX-License-Identifier: Apache-2.0

#include <benchmark/benchmark.h>

#include "chanforecast/analysis.hpp"
#include "chanforecast/numerics.hpp"
#include "chanforecast/rng.hpp"

using namespace chanforecast;

namespace {

void bm_adf_test(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  Rng rng(2);
  std::vector<double> y(static_cast<std::size_t>(n));
  double acc = 0.0;
  for (auto& v : y) {
    acc += rng.normal();
    v = acc;
  }
  for (auto _ : state) {
    const auto r = analysis::adf_test(y, 1);
    benchmark::DoNotOptimize(r.p_value);
  }
  state.SetItemsProcessed(state.iterations() * n);
}

void bm_min_norm_lstsq(benchmark::State& state) {
  Rng rng(3);
  CMat a(10, 5);
  CVec y(10);
  for (int r = 0; r < 10; ++r) {
    y(r) = cxd(rng.normal(), rng.normal());
    for (int c = 0; c < 5; ++c) a(r, c) = cxd(rng.normal(), rng.normal());
  }
  for (auto _ : state) {
    const CVec x = min_norm_lstsq(a, y);
    benchmark::DoNotOptimize(x.sum());
  }
}

}  // namespace

BENCHMARK(bm_adf_test)->Arg(128)->Arg(1000);
BENCHMARK(bm_min_norm_lstsq);
