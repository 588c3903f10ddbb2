// Copyright 2026 The xbar Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <benchmark/benchmark.h>

#include <random>

#include "xbar/correction.hpp"
#include "xbar/crossbar.hpp"
#include "xbar/device.hpp"
#include "xbar/io/config.hpp"
#include "xbar/tiling.hpp"

namespace {

const xbar::DeviceProfile& taox() { return xbar::io::builtin_profiles().at("TaOx-HfOx"); }

xbar::DenseMatrix random_matrix(std::size_t m, std::size_t n, xbar::Rng& rng) {
  std::normal_distribution<double> dist;
  xbar::DenseMatrix a(m, n);
  for (double& v : a.data()) v = dist(rng);
  return a;
}

xbar::Vector random_vector(std::size_t n, xbar::Rng& rng) {
  std::normal_distribution<double> dist;
  xbar::Vector x(n);
  for (double& v : x) v = dist(rng);
  return x;
}

void program_cell(benchmark::State& state) {
  const xbar::DeviceProfile& p = taox();
  xbar::Rng rng(1);
  std::uniform_real_distribution<double> target(p.g_min, p.g_max);
  for (auto _ : state) benchmark::DoNotOptimize(xbar::program_cell(p.g_min, target(rng), p, rng));
}
BENCHMARK(program_cell);

void crossbar_write(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  xbar::Rng rng(2);
  const xbar::DenseMatrix a = random_matrix(n, n, rng);
  for (auto _ : state) {
    xbar::Crossbar xb(n, n, taox());
    benchmark::DoNotOptimize(xbar::mca_set_weights(xb, a, rng));
  }
  state.SetItemsProcessed(state.iterations() * static_cast<int64_t>(n * n));
}
BENCHMARK(crossbar_write)->Arg(66)->Arg(256);

void denoise(benchmark::State& state) {
  const auto m = static_cast<std::size_t>(state.range(0));
  xbar::Rng rng(3);
  const xbar::Vector p = random_vector(m, rng);
  for (auto _ : state) benchmark::DoNotOptimize(xbar::denoise_least_square(p, {1e-12, -1}));
  state.SetItemsProcessed(state.iterations() * static_cast<int64_t>(m));
}
BENCHMARK(denoise)->Arg(66)->Arg(4960)->Arg(1 << 16);

void distributed_mvm(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  xbar::Rng rng(4);
  const xbar::CsrMatrix a = xbar::CsrMatrix::from_dense(random_matrix(n, n, rng));
  const xbar::Vector x = random_vector(n, rng);
  xbar::EcConfig ec;
  ec.verify.max_iterations = 5;
  for (auto _ : state) {
    xbar::TileGrid grid({2, 2, 64, 64}, taox());
    benchmark::DoNotOptimize(xbar::distributed_mat_vec_mul(a, x, grid, ec, 7, {1, 1}));
  }
}
BENCHMARK(distributed_mvm)->Arg(128)->Arg(300)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
