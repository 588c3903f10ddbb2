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
#include <string>
#include <vector>

#include "xbar/io/config.hpp"
#include "xbar/io/matrix_market.hpp"
#include "xbar/io/results.hpp"
#include "xbar/types.hpp"

namespace xbar::cli {

/// Stream tags mixed into seeds so that different consumers of one master
/// seed never share a random stream.
inline constexpr std::uint64_t kVectorStream = 0x78;
inline constexpr std::uint64_t kMatrixStream = 0x41;

struct LoadedMatrix {
  io::MatrixRecord record;
  CsrMatrix csr;
  std::string label;  ///< value of the CSV matrix column
};

/// Resolves `name` as "iperturb", a registry name, or a Matrix Market path.
/// Registry files come from cfg.data_dir; surrogates only if cfg.synthetic.
LoadedMatrix load_matrix(const io::ExperimentConfig& cfg, const std::string& name);

/// Devices to run: cfg.devices, or every shipped noisy profile if empty.
std::vector<std::string> selected_devices(const io::ExperimentConfig& cfg);

/// Whether error correction is run for `device` when cfg.ec is set.
bool ec_allowed(const io::ExperimentConfig& cfg, const std::string& device);

/// Replicate seed schedule: replicate i runs with derive_seed(master, i).
std::uint64_t replicate_seed(std::uint64_t master, std::size_t replicate);

/// Input vector for one replicate.
Vector replicate_input(const io::ExperimentConfig& cfg, std::size_t n, std::size_t replicate);

struct RunOutput {
  Vector b_hat;
  io::ResultRow row;
};

/// One distributed multiply with cfg.devices.front() (or "TaOx-HfOx").
RunOutput run_mvm(const io::ExperimentConfig& cfg, const LoadedMatrix& matrix);

struct SweepOutput {
  std::vector<io::ResultRow> runs;     ///< one row per replicate
  std::vector<io::ResultRow> summary;  ///< means, one row per configuration
};

/// Write-and-verify sweep k = 0..k_max for every device, with and without
/// error correction, cfg.reps replicates each.
SweepOutput bench_ec_sweep(const io::ExperimentConfig& cfg, const LoadedMatrix& matrix);

/// One configuration per square cell size on the cfg.grid tile layout.
SweepOutput bench_weak_scaling(const io::ExperimentConfig& cfg, const LoadedMatrix& matrix,
                               const std::vector<std::size_t>& cell_sizes);

/// One configuration per matrix on cfg.grid; E_w and L_w are normalized by the
/// reassignment factor unless cfg.normalization overrides it.
SweepOutput bench_strong_scaling(const io::ExperimentConfig& cfg,
                                 const std::vector<LoadedMatrix>& matrices);

}  // namespace xbar::cli
