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

#pragma once

#include <cstddef>
#include <cstdint>
#include <memory>
#include <optional>
#include <span>
#include <utility>
#include <vector>

#include "xbar/correction.hpp"
#include "xbar/crossbar.hpp"
#include "xbar/device.hpp"
#include "xbar/metrics.hpp"
#include "xbar/types.hpp"

namespace xbar {

/// R x C tiles of r x c crossbars.
struct GridShape {
  std::size_t tile_rows = 1;  ///< R
  std::size_t tile_cols = 1;  ///< C
  std::size_t cell_rows = 1;  ///< r
  std::size_t cell_cols = 1;  ///< c

  /// Throws std::invalid_argument unless all sizes are positive, R >= C and r >= c.
  void validate() const;

  std::size_t system_rows() const { return tile_rows * cell_rows; }
  std::size_t system_cols() const { return tile_cols * cell_cols; }
  std::size_t mca_count() const { return tile_rows * tile_cols; }

  bool operator==(const GridShape&) const = default;
};

/// The physical array of MCAs plus per-MCA reuse counters. Crossbars are
/// created on first use.
class TileGrid {
 public:
  TileGrid(GridShape shape, DeviceProfile profile);

  const GridShape& shape() const { return shape_; }
  const DeviceProfile& profile() const { return profile_; }

  /// Crossbar at tile (p, q), created on first access. Distinct tiles may be
  /// accessed from distinct threads.
  Crossbar& mca(std::size_t p, std::size_t q);
  /// Null if the tile has never been used.
  const Crossbar* find_mca(std::size_t p, std::size_t q) const;

  std::uint64_t reassign_count(std::size_t p, std::size_t q) const;
  void add_reassignment(std::size_t p, std::size_t q) { ++reassign_[index(p, q)]; }

  /// Energy and latency accumulated by each MCA, row-major; unused tiles are 0.
  std::vector<TileCost> mca_costs() const;

 private:
  std::size_t index(std::size_t p, std::size_t q) const;

  GridShape shape_;
  DeviceProfile profile_;
  std::vector<std::unique_ptr<Crossbar>> mcas_;
  std::vector<std::uint64_t> reassign_;
};

struct IndexRange {
  std::size_t begin = 0;
  std::size_t end = 0;

  std::size_t size() const { return end - begin; }
  bool operator==(const IndexRange&) const = default;
};

/// (m_pad, n_pad): m and n rounded up to whole multiples of the system size.
std::pair<std::size_t, std::size_t> zero_padding(std::size_t m, std::size_t n,
                                                 const GridShape& shape);

struct BlockGrid {
  std::size_t block_rows = 0;  ///< m_hat
  std::size_t block_cols = 0;  ///< n_hat
  std::vector<IndexRange> row_ranges;  ///< padded ranges, one per block row
  std::vector<IndexRange> col_ranges;
};

/// m_hat = ceil(m / (R r)), n_hat = ceil(n / (C c)) with the padded index
/// range of every block.
BlockGrid block_partition(std::size_t m, std::size_t n, const GridShape& shape);

struct Chunk {
  std::size_t block_row = 0;
  std::size_t block_col = 0;
  std::size_t p = 0;  ///< tile row, also chunk row inside the block
  std::size_t q = 0;  ///< tile column
  IndexRange rows;    ///< padded index range
  IndexRange cols;
  /// False when the chunk lies entirely in padding; such chunks are never
  /// scheduled.
  bool active = false;

  /// The part of the chunk inside the original m x n matrix.
  IndexRange live_rows(std::size_t m) const;
  IndexRange live_cols(std::size_t n) const;
};

struct ChunkPlan {
  GridShape shape;
  std::size_t m = 0;
  std::size_t n = 0;
  std::size_t m_pad = 0;
  std::size_t n_pad = 0;
  BlockGrid blocks;
  /// Ordered by (block_row, block_col, p, q).
  std::vector<Chunk> chunks;

  std::size_t block_index(const Chunk& ch) const { return ch.block_row * blocks.block_cols + ch.block_col; }
  std::size_t active_chunks() const;
  /// Number of active chunks mapped to tile (p, q).
  std::uint64_t assignments(std::size_t p, std::size_t q) const;
};

/// Splits an m x n problem into blocks and R x C chunks per block. Chunk
/// (p, q) of every block is owned by MCA (p, q).
ChunkPlan generate_mat_chunks_set(std::size_t m, std::size_t n, const GridShape& shape);

/// Pads x to n_pad and splits it into C * n_hat chunks of length c; chunk
/// (block_col, q) is element block_col * C + q. Throws std::invalid_argument if
/// x.size() != plan.n.
std::vector<Vector> generate_vec_chunks_set(std::span<const double> x, const ChunkPlan& plan);

/// Per-MCA reuse multiplier ceil(max(m / (R r), n / (C c))).
std::uint64_t reassignment_factor(std::size_t m, std::size_t n, const GridShape& shape);

struct DistributedOptions {
  std::size_t workers = 0;          ///< 0 resolves via resolve_workers()
  std::uint64_t normalization = 1;  ///< divisor applied to E_w and L_w
};

struct DistributedResult {
  Vector b_hat;
  RunMetrics metrics;  ///< normalized E_w / L_w
  TileCost raw;        ///< E_w / L_w before normalization
  ChunkPlan plan;
};

/// Tiled, optionally corrected, b = A x on `grid`. Every active chunk runs
/// corrected_mat_vec_mul on its MCA with a stream seeded from
/// (master_seed, block index, p, q); partial outputs are summed across chunk
/// columns and block columns and concatenated across block rows.
DistributedResult distributed_mat_vec_mul(const CsrMatrix& a, std::span<const double> x,
                                          TileGrid& grid, const EcConfig& ec,
                                          std::uint64_t master_seed,
                                          const DistributedOptions& opts = {});

}  // namespace xbar
