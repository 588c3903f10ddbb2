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

#include "xbar/correction.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace xbar {
namespace {

void check_denoise_input(std::span<const double> p, const DenoiseConfig& cfg) {
  if (p.empty()) throw std::invalid_argument("denoise: empty input");
  if (!(cfg.lambda >= 0.0) || !std::isfinite(cfg.lambda))
    throw std::invalid_argument("denoise: lambda must be finite and >= 0");
  for (double v : p)
    if (!std::isfinite(v)) throw std::invalid_argument("denoise: non-finite entry in input");
}

// Thomas algorithm on the symmetric tridiagonal I + lambda L^T L.
Vector solve_tridiagonal(std::span<const double> rhs, const DenoiseConfig& cfg) {
  const std::size_t m = rhs.size();
  const double h = static_cast<double>(cfg.h);
  const double off = cfg.lambda * h;
  auto diag = [&](std::size_t i) { return 1.0 + cfg.lambda * (i == 0 ? 1.0 : 1.0 + h * h); };

  Vector c_prime(m, 0.0);
  Vector y(rhs.begin(), rhs.end());
  double denom = diag(0);
  c_prime[0] = off / denom;
  y[0] /= denom;
  for (std::size_t i = 1; i < m; ++i) {
    denom = diag(i) - off * c_prime[i - 1];
    c_prime[i] = off / denom;
    y[i] = (y[i] - off * y[i - 1]) / denom;
  }
  for (std::size_t i = m - 1; i-- > 0;) y[i] -= c_prime[i] * y[i + 1];
  return y;
}

Vector combine_and_denoise(const TriProduct& t, const EcConfig& cfg, Crossbar* xbar, Rng* rng) {
  Vector p = first_order_combine(t);
  if (cfg.mode == DenoiseMode::Encoded && xbar != nullptr)
    return denoise_least_square(p, cfg.denoise, *xbar, *rng);
  return denoise_least_square(p, cfg.denoise);
}

}  // namespace

Vector first_order_combine(const TriProduct& t) {
  if (t.u.size() != t.v.size() || t.v.size() != t.y.size())
    throw std::invalid_argument("first_order_combine: product lengths differ");
  Vector p(t.u.size());
  for (std::size_t i = 0; i < p.size(); ++i) p[i] = t.v[i] - t.y[i] + t.u[i];
  return p;
}

DenseMatrix build_differential_matrix(std::size_t n, int h) {
  if (n == 0) throw std::invalid_argument("build_differential_matrix: n must be >= 1");
  DenseMatrix l = DenseMatrix::identity(n);
  for (std::size_t i = 0; i + 1 < n; ++i) l(i, i + 1) = static_cast<double>(h);
  return l;
}

Vector denoise_least_square(std::span<const double> p, const DenoiseConfig& cfg) {
  check_denoise_input(p, cfg);
  return solve_tridiagonal(p, cfg);
}

DenseMatrix denoise_inverse(std::size_t m, const DenoiseConfig& cfg) {
  if (m == 0) throw std::invalid_argument("denoise_inverse: size must be >= 1");
  DenseMatrix inv(m, m);
  Vector e(m, 0.0);
  for (std::size_t j = 0; j < m; ++j) {
    e[j] = 1.0;
    Vector col = solve_tridiagonal(e, cfg);
    for (std::size_t i = 0; i < m; ++i) inv(i, j) = col[i];
    e[j] = 0.0;
  }
  return inv;
}

Vector denoise_least_square(std::span<const double> p, const DenoiseConfig& cfg, Crossbar& xbar,
                            Rng& rng) {
  check_denoise_input(p, cfg);
  const std::size_t m = p.size();
  if (m > xbar.rows()) {
    throw std::length_error("denoise: inverse of size " + std::to_string(m) +
                            " exceeds crossbar rows " + std::to_string(xbar.rows()));
  }
  const DenseMatrix inv = denoise_inverse(m, cfg);
  Vector out(m, 0.0);
  for (std::size_t j0 = 0; j0 < m; j0 += xbar.cols()) {
    const std::size_t w = std::min(xbar.cols(), m - j0);
    DenseMatrix slice(m, w);
    for (std::size_t i = 0; i < m; ++i)
      for (std::size_t j = 0; j < w; ++j) slice(i, j) = inv(i, j0 + j);
    mca_set_weights(xbar, slice, rng);
    Vector part = analog_mvm(xbar, p.subspan(j0, w));
    for (std::size_t i = 0; i < m; ++i) out[i] += part[i];
  }
  return out;
}

Vector correct_from_realized(const DenseMatrix& a, std::span<const double> x,
                             const DenseMatrix& a_tilde, std::span<const double> x_tilde,
                             const EcConfig& cfg) {
  if (a.rows() != a_tilde.rows() || a.cols() != a_tilde.cols())
    throw std::invalid_argument("correct_from_realized: matrix shapes differ");
  if (x.size() != a.cols() || x_tilde.size() != a.cols())
    throw std::invalid_argument("correct_from_realized: vector length mismatch");
  Vector y = a_tilde.multiply(x_tilde);
  if (!cfg.enabled) return y;
  TriProduct t{a.multiply(x_tilde), a_tilde.multiply(x), std::move(y)};
  return combine_and_denoise(t, cfg, nullptr, nullptr);
}

CorrectedResult corrected_mat_vec_mul(const DenseMatrix& a, std::span<const double> x,
                                      const EcConfig& cfg, Crossbar& xbar, Rng& rng) {
  if (x.size() != a.cols()) {
    throw std::invalid_argument("corrected_mat_vec_mul: matrix has " + std::to_string(a.cols()) +
                                " columns but vector has length " + std::to_string(x.size()));
  }
  const double e0 = xbar.energy();
  const double l0 = xbar.latency();

  CorrectedResult out;
  VecWriteResult xw = adjustable_vec_write_and_verify(x, cfg.verify, xbar, rng);
  MatWriteResult aw = adjustable_mat_write_and_verify(a, cfg.verify, xbar, rng);
  out.vec_iterations = xw.iterations;
  out.vec_delta = xw.delta;
  out.mat_iterations = aw.iterations;
  out.mat_delta = aw.delta;

  Vector y = analog_mvm(xbar, xw.realized);
  if (cfg.enabled) {
    TriProduct t{a.multiply(xw.realized), analog_mvm(xbar, x), std::move(y)};
    out.b_hat = combine_and_denoise(t, cfg, &xbar, &rng);
  } else {
    out.b_hat = std::move(y);
  }

  fill_errors(out.metrics, out.b_hat, a.multiply(x));
  out.metrics.e_w = xbar.energy() - e0;
  out.metrics.l_w = xbar.latency() - l0;
  return out;
}

}  // namespace xbar
