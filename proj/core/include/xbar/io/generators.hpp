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

#include "xbar/io/matrix_market.hpp"
#include "xbar/types.hpp"

namespace xbar::io {

/// 2-norm condition number via a full SVD. Infinite for singular input.
double condition_number(const DenseMatrix& a);

/// Largest singular value.
double spectral_norm(const DenseMatrix& a);

struct IperturbResult {
  MatrixRecord matrix;
  double sigma = 0.0;  ///< standard deviation of the perturbation entries
};

/// I_n + sigma E with E standard normal, sigma found by bisection so that the
/// 2-norm condition number lands within 10% of `target_kappa` (the record's
/// kappa holds the achieved value). target_kappa == 1 gives the identity.
/// Throws std::invalid_argument for n < 2 or target_kappa < 1, and
/// std::runtime_error if the bisection budget runs out.
IperturbResult generate_iperturb(std::size_t n, std::uint64_t seed, double target_kappa = 1.2342);

/// n i.i.d. standard normal entries.
Vector sample_input_vector(std::size_t n, std::uint64_t seed);

/// Dense symmetric positive definite Q diag(s) Q^T with spectral norm `norm2`
/// and condition number `kappa`; singular values are log-spaced.
MatrixRecord make_spd_surrogate(std::size_t n, double norm2, double kappa, std::uint64_t seed);

/// Sparse symmetric, diagonally dominant stand-in for a large registry matrix:
/// about `offdiag_per_row` off-diagonal entries per row, scaled so that the
/// largest absolute row sum equals `norm_bound` (an upper bound on the
/// spectral norm).
MatrixRecord make_sparse_surrogate(std::size_t n, double norm_bound, std::uint64_t seed,
                                   std::size_t offdiag_per_row = 4);

}  // namespace xbar::io
