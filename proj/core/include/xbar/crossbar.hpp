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
#include <span>
#include <vector>

#include "xbar/device.hpp"
#include "xbar/rng.hpp"
#include "xbar/types.hpp"

namespace xbar {

/// Maps stored conductances back to values: v = sign * g / scale.
struct EncodingMap {
  double scale = 1.0;
  std::size_t rows = 0;
  std::size_t cols = 0;
  std::vector<std::int8_t> signs;  ///< row-major, rows x cols

  std::int8_t sign(std::size_t i, std::size_t j) const { return signs[i * cols + j]; }
};

/// One memory crossbar array. Cells hold either a conductance in
/// [g_min, g_max] or the off-state, represented as exactly 0.
class Crossbar {
 public:
  Crossbar(std::size_t rows, std::size_t cols, DeviceProfile profile);

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  const DeviceProfile& profile() const { return profile_; }

  double conductance(std::size_t i, std::size_t j) const { return cells_[i * cols_ + j]; }
  const EncodingMap& encoding() const { return encoding_; }

  double energy() const { return energy_; }    ///< J, cumulative
  double latency() const { return latency_; }  ///< s, cumulative
  std::uint64_t pulses() const { return pulses_; }
  std::uint64_t writes() const { return writes_; }

  /// Value stored at (i, j) under the current encoding.
  double decoded(std::size_t i, std::size_t j) const;
  /// Decoded window covering the most recent write.
  DenseMatrix decoded_matrix() const;
  Vector decoded_vector() const;

  /// Programs `values` into the top-left corner. Cells outside the window are
  /// switched off. Throws std::length_error if the window does not fit.
  const EncodingMap& program(const DenseMatrix& values, Rng& rng);

 private:
  std::size_t rows_;
  std::size_t cols_;
  DeviceProfile profile_;
  std::vector<double> cells_;
  EncodingMap encoding_;
  double energy_ = 0.0;
  double latency_ = 0.0;
  std::uint64_t pulses_ = 0;
  std::uint64_t writes_ = 0;
};

/// Encodes a matrix chunk onto the crossbar (magnitudes scaled so the largest
/// maps to g_max, signs kept exactly) and accumulates write energy/latency.
EncodingMap mca_set_weights(Crossbar& xbar, const DenseMatrix& values, Rng& rng);
/// Vector variant; the vector occupies row 0.
EncodingMap mca_set_weights(Crossbar& xbar, std::span<const double> values, Rng& rng);

struct VerifyConfig {
  double eps = 1e-6;
  std::size_t max_iterations = 0;  ///< N; 0 is a single unverified write
  Norm norm = Norm::L2;
};

struct MatWriteResult {
  DenseMatrix realized;
  std::size_t iterations = 0;
  double delta = 0.0;
};

struct VecWriteResult {
  Vector realized;
  std::size_t iterations = 0;
  double delta = 0.0;
};

/// Write, then re-write from the current cell state while the entrywise
/// residual exceeds eps and fewer than N re-writes have been spent.
MatWriteResult adjustable_mat_write_and_verify(const DenseMatrix& a, const VerifyConfig& cfg,
                                               Crossbar& xbar, Rng& rng);
VecWriteResult adjustable_vec_write_and_verify(std::span<const double> x, const VerifyConfig& cfg,
                                               Crossbar& xbar, Rng& rng);

/// Ideal readout of the stored matrix times `input`.
/// Throws std::invalid_argument when input length differs from the stored width.
Vector analog_mvm(const Crossbar& xbar, std::span<const double> input);

}  // namespace xbar
