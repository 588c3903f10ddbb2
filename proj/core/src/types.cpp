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

#include "xbar/types.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace xbar {

Norm parse_norm(std::string_view text) {
  if (text == "2" || text == "l2") return Norm::L2;
  if (text == "inf" || text == "linf") return Norm::Inf;
  throw std::invalid_argument("unknown norm '" + std::string(text) + "' (expected 2 or inf)");
}

std::string_view to_string(Norm p) { return p == Norm::L2 ? "2" : "inf"; }

double norm(std::span<const double> values, Norm p) {
  if (p == Norm::Inf) {
    double m = 0.0;
    for (double v : values) m = std::max(m, std::abs(v));
    return m;
  }
  // Scaled sum of squares so large stiffness-matrix entries cannot overflow.
  double scale = 0.0;
  double ssq = 1.0;
  for (double v : values) {
    if (v == 0.0) continue;
    double a = std::abs(v);
    if (scale < a) {
      ssq = 1.0 + ssq * (scale / a) * (scale / a);
      scale = a;
    } else {
      ssq += (a / scale) * (a / scale);
    }
  }
  return scale * std::sqrt(ssq);
}

double distance(std::span<const double> a, std::span<const double> b, Norm p) {
  if (a.size() != b.size()) throw std::invalid_argument("distance: length mismatch");
  Vector diff(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) diff[i] = a[i] - b[i];
  return norm(diff, p);
}

DenseMatrix::DenseMatrix(std::size_t rows, std::size_t cols, double fill)
    : rows_(rows), cols_(cols), data_(rows * cols, fill) {}

DenseMatrix DenseMatrix::identity(std::size_t n) {
  DenseMatrix out(n, n);
  for (std::size_t i = 0; i < n; ++i) out(i, i) = 1.0;
  return out;
}

Vector DenseMatrix::multiply(std::span<const double> x) const {
  if (x.size() != cols_) throw std::invalid_argument("DenseMatrix::multiply: length mismatch");
  Vector out(rows_, 0.0);
  for (std::size_t i = 0; i < rows_; ++i) {
    double acc = 0.0;
    const double* r = data_.data() + i * cols_;
    for (std::size_t j = 0; j < cols_; ++j) acc += r[j] * x[j];
    out[i] = acc;
  }
  return out;
}

DenseMatrix DenseMatrix::transpose() const {
  DenseMatrix out(cols_, rows_);
  for (std::size_t i = 0; i < rows_; ++i)
    for (std::size_t j = 0; j < cols_; ++j) out(j, i) = (*this)(i, j);
  return out;
}

CsrMatrix CsrMatrix::from_triplets(std::size_t rows, std::size_t cols,
                                   std::vector<Triplet> entries) {
  for (const auto& t : entries) {
    if (t.row >= rows || t.col >= cols)
      throw std::out_of_range("CsrMatrix: entry (" + std::to_string(t.row) + ", " +
                              std::to_string(t.col) + ") outside " + std::to_string(rows) + "x" +
                              std::to_string(cols));
  }
  std::sort(entries.begin(), entries.end(), [](const Triplet& a, const Triplet& b) {
    return a.row != b.row ? a.row < b.row : a.col < b.col;
  });

  CsrMatrix m;
  m.rows_ = rows;
  m.cols_ = cols;
  m.row_ptr_.assign(rows + 1, 0);
  for (std::size_t k = 0; k < entries.size(); ++k) {
    const auto& t = entries[k];
    if (!m.col_idx_.empty() && k > 0 && entries[k - 1].row == t.row &&
        entries[k - 1].col == t.col) {
      m.values_.back() += t.value;
      continue;
    }
    m.col_idx_.push_back(t.col);
    m.values_.push_back(t.value);
    ++m.row_ptr_[t.row + 1];
  }
  for (std::size_t i = 0; i < rows; ++i) m.row_ptr_[i + 1] += m.row_ptr_[i];
  return m;
}

CsrMatrix CsrMatrix::from_dense(const DenseMatrix& dense) {
  std::vector<Triplet> entries;
  for (std::size_t i = 0; i < dense.rows(); ++i)
    for (std::size_t j = 0; j < dense.cols(); ++j)
      if (dense(i, j) != 0.0) entries.push_back({i, j, dense(i, j)});
  return from_triplets(dense.rows(), dense.cols(), std::move(entries));
}

Vector CsrMatrix::multiply(std::span<const double> x) const {
  if (x.size() != cols_) throw std::invalid_argument("CsrMatrix::multiply: length mismatch");
  Vector out(rows_, 0.0);
  for (std::size_t i = 0; i < rows_; ++i) {
    double acc = 0.0;
    for (std::size_t k = row_ptr_[i]; k < row_ptr_[i + 1]; ++k) acc += values_[k] * x[col_idx_[k]];
    out[i] = acc;
  }
  return out;
}

DenseMatrix CsrMatrix::dense_block(std::size_t row0, std::size_t col0, std::size_t nrows,
                                   std::size_t ncols) const {
  DenseMatrix out(nrows, ncols);
  const std::size_t row_end = std::min(rows_, row0 + nrows);
  const std::size_t col_end = col0 + ncols;
  for (std::size_t i = row0; i < row_end; ++i) {
    auto first = col_idx_.begin() + static_cast<std::ptrdiff_t>(row_ptr_[i]);
    auto last = col_idx_.begin() + static_cast<std::ptrdiff_t>(row_ptr_[i + 1]);
    for (auto it = std::lower_bound(first, last, col0); it != last && *it < col_end; ++it) {
      auto k = static_cast<std::size_t>(it - col_idx_.begin());
      out(i - row0, *it - col0) = values_[k];
    }
  }
  return out;
}

DenseMatrix CsrMatrix::to_dense() const { return dense_block(0, 0, rows_, cols_); }

std::vector<Triplet> CsrMatrix::triplets() const {
  std::vector<Triplet> out;
  out.reserve(nnz());
  for (std::size_t i = 0; i < rows_; ++i)
    for (std::size_t k = row_ptr_[i]; k < row_ptr_[i + 1]; ++k)
      out.push_back({i, col_idx_[k], values_[k]});
  return out;
}

}  // namespace xbar
