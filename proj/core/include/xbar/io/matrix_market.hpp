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
#include <filesystem>
#include <iosfwd>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "xbar/types.hpp"

namespace xbar::io {

enum class Symmetry { General, Symmetric };

std::string_view to_string(Symmetry s);

/// A matrix in coordinate form. Symmetric inputs are stored expanded, so
/// `entries` always describes the full matrix.
struct MatrixRecord {
  std::string name;
  std::size_t rows = 0;
  std::size_t cols = 0;
  std::vector<Triplet> entries;
  Symmetry symmetry = Symmetry::General;
  std::string provenance;
  double kappa = 0.0;  ///< condition number when known, else 0

  CsrMatrix to_csr() const { return CsrMatrix::from_triplets(rows, cols, entries); }
  DenseMatrix to_dense() const { return to_csr().to_dense(); }
};

class MatrixMarketError : public std::runtime_error {
 public:
  enum class Kind {
    MalformedBanner,
    UnsupportedFormat,
    NonRealField,
    UnsupportedQualifier,
    MalformedSize,
    MalformedEntry,
    IndexOutOfRange,
    EntryCount,
  };

  MatrixMarketError(Kind kind, const std::string& what) : std::runtime_error(what), kind_(kind) {}
  Kind kind() const { return kind_; }

 private:
  Kind kind_;
};

/// Parses coordinate real/integer files with general or symmetric storage.
MatrixRecord parse_matrix_market(std::string_view text, std::string name = "");

/// Reads and parses a file; the record name defaults to the file stem.
MatrixRecord load_matrix_market(const std::filesystem::path& path);

/// Writes coordinate real form with round-trip precision. Symmetric records are
/// written as their lower triangle.
void write_matrix_market(const MatrixRecord& record, std::ostream& out);

}  // namespace xbar::io
