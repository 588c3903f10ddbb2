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

#include "xbar/crossbar.hpp"
#include "xbar/metrics.hpp"
#include "xbar/rng.hpp"
#include "xbar/types.hpp"

namespace xbar {

/// The three products combined by first-order cancellation.
struct TriProduct {
  Vector u;  ///< A * x_tilde
  Vector v;  ///< A_tilde * x
  Vector y;  ///< A_tilde * x_tilde
};

struct DenoiseConfig {
  double lambda = 1e-12;
  int h = -1;
};

enum class DenoiseMode { Exact, Encoded };

struct EcConfig {
  bool enabled = true;
  VerifyConfig verify;
  DenoiseConfig denoise;
  DenoiseMode mode = DenoiseMode::Exact;
};

/// p = v - y + u. Throws std::invalid_argument on a length mismatch.
Vector first_order_combine(const TriProduct& t);

/// Upper bidiagonal L with ones on the diagonal and h on the superdiagonal.
DenseMatrix build_differential_matrix(std::size_t n, int h);

/// Solves (I + lambda L^T L) y = p with the tridiagonal system factored
/// directly. Throws std::invalid_argument on empty or non-finite p, or a
/// negative lambda.
Vector denoise_least_square(std::span<const double> p, const DenoiseConfig& cfg);

/// Encoded variant: the inverse of (I + lambda L^T L) is formed on the host,
/// written to `xbar` once without verification, and applied in-memory. When
/// the inverse is wider than the crossbar it is streamed through in column
/// slices of at most xbar.cols().
Vector denoise_least_square(std::span<const double> p, const DenoiseConfig& cfg, Crossbar& xbar,
                            Rng& rng);

/// Dense (I + lambda L^T L)^{-1}.
DenseMatrix denoise_inverse(std::size_t m, const DenoiseConfig& cfg);

struct CorrectedResult {
  Vector b_hat;
  RunMetrics metrics;  ///< errors against the exact product, raw cost of this call
  std::size_t mat_iterations = 0;
  std::size_t vec_iterations = 0;
  double mat_delta = 0.0;
  double vec_delta = 0.0;
};

/// Second half of the corrected multiply once the realized operands exist:
/// builds the three products, cancels first-order terms and denoises. With
/// correction disabled this is just A_tilde * x_tilde.
Vector correct_from_realized(const DenseMatrix& a, std::span<const double> x,
                             const DenseMatrix& a_tilde, std::span<const double> x_tilde,
                             const EcConfig& cfg);

/// Full corrected multiply on one crossbar: write-and-verify x, then A, form
/// the products and correct. Energy and latency are the crossbar counters'
/// increase during the call.
CorrectedResult corrected_mat_vec_mul(const DenseMatrix& a, std::span<const double> x,
                                      const EcConfig& cfg, Crossbar& xbar, Rng& rng);

}  // namespace xbar
