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
#include <span>
#include <string_view>
#include <vector>

namespace xbar {

using Vector = std::vector<double>;

/// Norm selector used by write-and-verify residuals and the error metrics.
enum class Norm { L2, Inf };

/// Accepts "2", "l2", "inf", "linf" (case-sensitive).
Norm parse_norm(std::string_view text);
std::string_view to_string(Norm p);

/// Entrywise p-norm of a flat range.
double norm(std::span<const double> values, Norm p);

/// ||a - b||_p over two ranges of equal length.
double distance(std::span<const double> a, std::span<const double> b, Norm p);

/// Row-major dense matrix. Crossbar chunks are always materialized densely.
class DenseMatrix {
 public:
  DenseMatrix() = default;
  DenseMatrix(std::size_t rows, std::size_t cols, double fill = 0.0);

  static DenseMatrix identity(std::size_t n);

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  bool empty() const { return data_.empty(); }

  double& operator()(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }
  double operator()(std::size_t i, std::size_t j) const { return data_[i * cols_ + j]; }

  std::span<double> row(std::size_t i) { return {data_.data() + i * cols_, cols_}; }
  std::span<const double> row(std::size_t i) const { return {data_.data() + i * cols_, cols_}; }

  std::span<double> data() { return data_; }
  std::span<const double> data() const { return data_; }

  Vector multiply(std::span<const double> x) const;
  DenseMatrix transpose() const;

  bool operator==(const DenseMatrix&) const = default;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<double> data_;
};

struct Triplet {
  std::size_t row;
  std::size_t col;
  double value;

  bool operator==(const Triplet&) const = default;
};

/// Compressed sparse row storage. Large registry matrices stay in this form and
/// are only densified one crossbar chunk at a time.
class CsrMatrix {
 public:
  CsrMatrix() = default;

  /// Duplicate (row, col) entries are summed. Throws std::out_of_range for
  /// indices outside the declared shape.
  static CsrMatrix from_triplets(std::size_t rows, std::size_t cols, std::vector<Triplet> entries);
  static CsrMatrix from_dense(const DenseMatrix& dense);

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  std::size_t nnz() const { return values_.size(); }

  Vector multiply(std::span<const double> x) const;

  /// Dense copy of the window [row0, row0+nrows) x [col0, col0+ncols). Parts of
  /// the window outside the matrix read as zero, which is how zero padding is
  /// realized without ever storing the padded matrix.
  DenseMatrix dense_block(std::size_t row0, std::size_t col0, std::size_t nrows,
                          std::size_t ncols) const;

  DenseMatrix to_dense() const;
  std::vector<Triplet> triplets() const;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<std::size_t> row_ptr_{0};
  std::vector<std::size_t> col_idx_;
  std::vector<double> values_;
};

}  // namespace xbar
