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

#include "xbar/crossbar.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace xbar {

Crossbar::Crossbar(std::size_t rows, std::size_t cols, DeviceProfile profile)
    : rows_(rows), cols_(cols), profile_(std::move(profile)), cells_(rows * cols, 0.0) {
  if (rows == 0 || cols == 0) throw std::invalid_argument("crossbar dimensions must be positive");
  profile_.validate();
}

double Crossbar::decoded(std::size_t i, std::size_t j) const {
  if (i >= encoding_.rows || j >= encoding_.cols) return 0.0;
  return encoding_.sign(i, j) * conductance(i, j) / encoding_.scale;
}

DenseMatrix Crossbar::decoded_matrix() const {
  DenseMatrix out(encoding_.rows, encoding_.cols);
  for (std::size_t i = 0; i < encoding_.rows; ++i)
    for (std::size_t j = 0; j < encoding_.cols; ++j) out(i, j) = decoded(i, j);
  return out;
}

Vector Crossbar::decoded_vector() const {
  Vector out(encoding_.cols);
  for (std::size_t j = 0; j < encoding_.cols; ++j) out[j] = decoded(0, j);
  return out;
}

const EncodingMap& Crossbar::program(const DenseMatrix& values, Rng& rng) {
  if (values.rows() > rows_ || values.cols() > cols_) {
    throw std::length_error("chunk " + std::to_string(values.rows()) + "x" +
                            std::to_string(values.cols()) + " does not fit crossbar " +
                            std::to_string(rows_) + "x" + std::to_string(cols_));
  }

  double peak = 0.0;
  for (double v : values.data()) {
    if (!std::isfinite(v)) throw std::invalid_argument("cannot encode a non-finite value");
    peak = std::max(peak, std::abs(v));
  }

  EncodingMap enc;
  enc.rows = values.rows();
  enc.cols = values.cols();
  enc.scale = peak > 0.0 ? profile_.g_max / peak : 1.0;
  enc.signs.assign(enc.rows * enc.cols, 0);

  std::uint64_t total = 0;
  double row_time = 0.0;
  for (std::size_t i = 0; i < rows_; ++i) {
    std::uint64_t row_max = 0;
    for (std::size_t j = 0; j < cols_; ++j) {
      double& g = cells_[i * cols_ + j];
      const bool inside = i < enc.rows && j < enc.cols;
      const double v = inside ? values(i, j) : 0.0;
      if (v == 0.0) {
        g = 0.0;
        continue;
      }
      enc.signs[i * enc.cols + j] = v > 0.0 ? 1 : -1;
      const double target = std::clamp(enc.scale * std::abs(v), profile_.g_min, profile_.g_max);
      // Switching an off cell on parks it at g_min before the pulse train.
      const double start = g == 0.0 ? profile_.g_min : g;
      const ProgramResult r = program_cell(start, target, profile_, rng);
      g = r.g_final;
      total += r.pulses;
      row_max = std::max(row_max, r.pulses);
    }
    row_time += static_cast<double>(row_max) * profile_.t_pulse;
  }

  encoding_ = std::move(enc);
  pulses_ += total;
  energy_ += static_cast<double>(total) * profile_.e_pulse;
  latency_ += row_time;
  ++writes_;
  return encoding_;
}

EncodingMap mca_set_weights(Crossbar& xbar, const DenseMatrix& values, Rng& rng) {
  return xbar.program(values, rng);
}

EncodingMap mca_set_weights(Crossbar& xbar, std::span<const double> values, Rng& rng) {
  DenseMatrix row(1, values.size());
  std::copy(values.begin(), values.end(), row.row(0).begin());
  return xbar.program(row, rng);
}

MatWriteResult adjustable_mat_write_and_verify(const DenseMatrix& a, const VerifyConfig& cfg,
                                               Crossbar& xbar, Rng& rng) {
  mca_set_weights(xbar, a, rng);
  MatWriteResult out;
  out.realized = xbar.decoded_matrix();
  out.delta = distance(out.realized.data(), a.data(), cfg.norm);
  while (out.iterations < cfg.max_iterations && out.delta > cfg.eps) {
    ++out.iterations;
    mca_set_weights(xbar, a, rng);
    out.realized = xbar.decoded_matrix();
    out.delta = distance(out.realized.data(), a.data(), cfg.norm);
  }
  return out;
}

VecWriteResult adjustable_vec_write_and_verify(std::span<const double> x, const VerifyConfig& cfg,
                                               Crossbar& xbar, Rng& rng) {
  mca_set_weights(xbar, x, rng);
  VecWriteResult out;
  out.realized = xbar.decoded_vector();
  out.delta = distance(out.realized, x, cfg.norm);
  while (out.iterations < cfg.max_iterations && out.delta > cfg.eps) {
    ++out.iterations;
    mca_set_weights(xbar, x, rng);
    out.realized = xbar.decoded_vector();
    out.delta = distance(out.realized, x, cfg.norm);
  }
  return out;
}

Vector analog_mvm(const Crossbar& xbar, std::span<const double> input) {
  const EncodingMap& enc = xbar.encoding();
  if (input.size() != enc.cols) {
    throw std::invalid_argument("analog_mvm: input length " + std::to_string(input.size()) +
                                " does not match stored width " + std::to_string(enc.cols));
  }
  Vector out(enc.rows, 0.0);
  for (std::size_t i = 0; i < enc.rows; ++i) {
    double acc = 0.0;
    for (std::size_t j = 0; j < enc.cols; ++j) acc += xbar.decoded(i, j) * input[j];
    out[i] = acc;
  }
  return out;
}

}  // namespace xbar
