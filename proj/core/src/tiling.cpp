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

#include "xbar/tiling.hpp"

#include <algorithm>
#include <stdexcept>
#include <string>
#include <tuple>

#include "xbar/parallel.hpp"
#include "xbar/rng.hpp"

namespace xbar {
namespace {

std::size_t ceil_div(std::size_t a, std::size_t b) { return (a + b - 1) / b; }

void require_dims(std::size_t m, std::size_t n) {
  if (m == 0 || n == 0) throw std::invalid_argument("matrix dimensions must be positive");
}

}  // namespace

void GridShape::validate() const {
  if (tile_rows == 0 || tile_cols == 0 || cell_rows == 0 || cell_cols == 0)
    throw std::invalid_argument("grid sizes must be positive");
  if (tile_rows < tile_cols)
    throw std::invalid_argument("grid needs R >= C, got R=" + std::to_string(tile_rows) +
                                " C=" + std::to_string(tile_cols));
  if (cell_rows < cell_cols)
    throw std::invalid_argument("crossbar needs r >= c, got r=" + std::to_string(cell_rows) +
                                " c=" + std::to_string(cell_cols));
}

TileGrid::TileGrid(GridShape shape, DeviceProfile profile)
    : shape_(shape), profile_(std::move(profile)) {
  shape_.validate();
  profile_.validate();
  mcas_.resize(shape_.mca_count());
  reassign_.assign(shape_.mca_count(), 0);
}

std::size_t TileGrid::index(std::size_t p, std::size_t q) const {
  if (p >= shape_.tile_rows || q >= shape_.tile_cols)
    throw std::out_of_range("tile (" + std::to_string(p) + ", " + std::to_string(q) +
                            ") outside grid");
  return p * shape_.tile_cols + q;
}

Crossbar& TileGrid::mca(std::size_t p, std::size_t q) {
  auto& slot = mcas_[index(p, q)];
  if (!slot) slot = std::make_unique<Crossbar>(shape_.cell_rows, shape_.cell_cols, profile_);
  return *slot;
}

const Crossbar* TileGrid::find_mca(std::size_t p, std::size_t q) const {
  return mcas_[index(p, q)].get();
}

std::uint64_t TileGrid::reassign_count(std::size_t p, std::size_t q) const {
  return reassign_[index(p, q)];
}

std::vector<TileCost> TileGrid::mca_costs() const {
  std::vector<TileCost> out(mcas_.size());
  for (std::size_t k = 0; k < mcas_.size(); ++k)
    if (mcas_[k]) out[k] = {mcas_[k]->energy(), mcas_[k]->latency()};
  return out;
}

std::pair<std::size_t, std::size_t> zero_padding(std::size_t m, std::size_t n,
                                                 const GridShape& shape) {
  require_dims(m, n);
  const std::size_t sr = shape.system_rows();
  const std::size_t sc = shape.system_cols();
  return {ceil_div(m, sr) * sr, ceil_div(n, sc) * sc};
}

BlockGrid block_partition(std::size_t m, std::size_t n, const GridShape& shape) {
  require_dims(m, n);
  BlockGrid g;
  g.block_rows = ceil_div(m, shape.system_rows());
  g.block_cols = ceil_div(n, shape.system_cols());
  for (std::size_t b = 0; b < g.block_rows; ++b)
    g.row_ranges.push_back({b * shape.system_rows(), (b + 1) * shape.system_rows()});
  for (std::size_t b = 0; b < g.block_cols; ++b)
    g.col_ranges.push_back({b * shape.system_cols(), (b + 1) * shape.system_cols()});
  return g;
}

IndexRange Chunk::live_rows(std::size_t m) const {
  return {std::min(rows.begin, m), std::min(rows.end, m)};
}

IndexRange Chunk::live_cols(std::size_t n) const {
  return {std::min(cols.begin, n), std::min(cols.end, n)};
}

std::size_t ChunkPlan::active_chunks() const {
  return static_cast<std::size_t>(
      std::count_if(chunks.begin(), chunks.end(), [](const Chunk& c) { return c.active; }));
}

std::uint64_t ChunkPlan::assignments(std::size_t p, std::size_t q) const {
  return static_cast<std::uint64_t>(std::count_if(chunks.begin(), chunks.end(), [&](const Chunk& c) {
    return c.active && c.p == p && c.q == q;
  }));
}

ChunkPlan generate_mat_chunks_set(std::size_t m, std::size_t n, const GridShape& shape) {
  shape.validate();
  ChunkPlan plan;
  plan.shape = shape;
  plan.m = m;
  plan.n = n;
  std::tie(plan.m_pad, plan.n_pad) = zero_padding(m, n, shape);
  plan.blocks = block_partition(m, n, shape);
  plan.chunks.reserve(plan.blocks.block_rows * plan.blocks.block_cols * shape.mca_count());
  for (std::size_t bi = 0; bi < plan.blocks.block_rows; ++bi) {
    for (std::size_t bj = 0; bj < plan.blocks.block_cols; ++bj) {
      for (std::size_t p = 0; p < shape.tile_rows; ++p) {
        for (std::size_t q = 0; q < shape.tile_cols; ++q) {
          Chunk ch;
          ch.block_row = bi;
          ch.block_col = bj;
          ch.p = p;
          ch.q = q;
          const std::size_t r0 = plan.blocks.row_ranges[bi].begin + p * shape.cell_rows;
          const std::size_t c0 = plan.blocks.col_ranges[bj].begin + q * shape.cell_cols;
          ch.rows = {r0, r0 + shape.cell_rows};
          ch.cols = {c0, c0 + shape.cell_cols};
          ch.active = r0 < m && c0 < n;
          plan.chunks.push_back(ch);
        }
      }
    }
  }
  return plan;
}

std::vector<Vector> generate_vec_chunks_set(std::span<const double> x, const ChunkPlan& plan) {
  if (x.size() != plan.n) {
    throw std::invalid_argument("vector length " + std::to_string(x.size()) +
                                " does not match plan width " + std::to_string(plan.n));
  }
  const std::size_t c = plan.shape.cell_cols;
  std::vector<Vector> out(plan.n_pad / c, Vector(c, 0.0));
  for (std::size_t j = 0; j < x.size(); ++j) out[j / c][j % c] = x[j];
  return out;
}

std::uint64_t reassignment_factor(std::size_t m, std::size_t n, const GridShape& shape) {
  require_dims(m, n);
  return std::max(ceil_div(m, shape.system_rows()), ceil_div(n, shape.system_cols()));
}

DistributedResult distributed_mat_vec_mul(const CsrMatrix& a, std::span<const double> x,
                                          TileGrid& grid, const EcConfig& ec,
                                          std::uint64_t master_seed,
                                          const DistributedOptions& opts) {
  if (opts.normalization == 0) throw std::invalid_argument("normalization must be >= 1");
  const GridShape& shape = grid.shape();
  DistributedResult out;
  out.plan = generate_mat_chunks_set(a.rows(), a.cols(), shape);
  const ChunkPlan& plan = out.plan;
  const std::vector<Vector> x_chunks = generate_vec_chunks_set(x, plan);

  // One task per MCA; each walks its own chunks in block order so a tile's
  // state is only ever touched by one thread.
  std::vector<std::vector<std::size_t>> owned(shape.mca_count());
  for (std::size_t k = 0; k < plan.chunks.size(); ++k) {
    const Chunk& ch = plan.chunks[k];
    if (ch.active) owned[ch.p * shape.tile_cols + ch.q].push_back(k);
  }
  std::vector<std::size_t> tasks;
  for (std::size_t t = 0; t < owned.size(); ++t)
    if (!owned[t].empty()) tasks.push_back(t);

  const std::vector<TileCost> before = grid.mca_costs();
  std::vector<Vector> partial(plan.chunks.size());
  parallel_for(tasks.size(), resolve_workers(opts.workers), [&](std::size_t i) {
    const std::size_t tile = tasks[i];
    const std::size_t p = tile / shape.tile_cols;
    const std::size_t q = tile % shape.tile_cols;
    Crossbar& xbar = grid.mca(p, q);
    for (std::size_t k : owned[tile]) {
      const Chunk& ch = plan.chunks[k];
      const IndexRange rows = ch.live_rows(plan.m);
      const IndexRange cols = ch.live_cols(plan.n);
      const DenseMatrix block = a.dense_block(rows.begin, cols.begin, rows.size(), cols.size());
      const Vector& xc = x_chunks[ch.block_col * shape.tile_cols + q];
      Rng rng = make_rng(derive_seed(master_seed, plan.block_index(ch), p, q));
      partial[k] = corrected_mat_vec_mul(block, std::span(xc).first(cols.size()), ec, xbar, rng).b_hat;
      grid.add_reassignment(p, q);
    }
  });

  out.b_hat.assign(plan.m, 0.0);
  for (std::size_t k = 0; k < plan.chunks.size(); ++k) {
    const Chunk& ch = plan.chunks[k];
    if (!ch.active) continue;
    const std::size_t r0 = ch.rows.begin;
    for (std::size_t i = 0; i < partial[k].size(); ++i) out.b_hat[r0 + i] += partial[k][i];
  }

  std::vector<TileCost> spent = grid.mca_costs();
  for (std::size_t t = 0; t < spent.size(); ++t) {
    spent[t].e_w -= before[t].e_w;
    spent[t].l_w -= before[t].l_w;
  }
  out.raw = aggregate_tile_metrics(spent, 1);
  const TileCost norm_cost = aggregate_tile_metrics(spent, opts.normalization);
  fill_errors(out.metrics, out.b_hat, a.multiply(x));
  out.metrics.e_w = norm_cost.e_w;
  out.metrics.l_w = norm_cost.l_w;
  out.metrics.normalization = opts.normalization;
  return out;
}

}  // namespace xbar
