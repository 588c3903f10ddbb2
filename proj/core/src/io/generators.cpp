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

#include "xbar/io/generators.hpp"

#include <Eigen/Dense>
#include <Eigen/SVD>

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <stdexcept>

#include "xbar/rng.hpp"

namespace xbar::io {
namespace {

Eigen::MatrixXd to_eigen(const DenseMatrix& a) {
  Eigen::MatrixXd m(a.rows(), a.cols());
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < a.cols(); ++j)
      m(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = a(i, j);
  return m;
}

Eigen::VectorXd singular_values(const Eigen::MatrixXd& m) {
  return Eigen::BDCSVD<Eigen::MatrixXd>(m).singularValues();
}

double kappa_of(const Eigen::MatrixXd& m) {
  const Eigen::VectorXd s = singular_values(m);
  const double lo = s.minCoeff();
  return lo > 0.0 ? s.maxCoeff() / lo : std::numeric_limits<double>::infinity();
}

MatrixRecord dense_record(const Eigen::MatrixXd& m, Symmetry sym) {
  MatrixRecord rec;
  rec.rows = static_cast<std::size_t>(m.rows());
  rec.cols = static_cast<std::size_t>(m.cols());
  rec.symmetry = sym;
  rec.entries.reserve(static_cast<std::size_t>(m.size()));
  for (Eigen::Index i = 0; i < m.rows(); ++i)
    for (Eigen::Index j = 0; j < m.cols(); ++j)
      if (m(i, j) != 0.0)
        rec.entries.push_back({static_cast<std::size_t>(i), static_cast<std::size_t>(j), m(i, j)});
  return rec;
}

}  // namespace

double condition_number(const DenseMatrix& a) { return kappa_of(to_eigen(a)); }

double spectral_norm(const DenseMatrix& a) { return singular_values(to_eigen(a)).maxCoeff(); }

IperturbResult generate_iperturb(std::size_t n, std::uint64_t seed, double target_kappa) {
  if (n < 2) throw std::invalid_argument("iperturb: n must be >= 2");
  if (!(target_kappa >= 1.0) || !std::isfinite(target_kappa))
    throw std::invalid_argument("iperturb: target kappa must be finite and >= 1");

  const auto dim = static_cast<Eigen::Index>(n);
  const Eigen::MatrixXd eye = Eigen::MatrixXd::Identity(dim, dim);
  IperturbResult out;
  if (target_kappa == 1.0) {
    out.matrix = dense_record(eye, Symmetry::General);
  } else {
    Rng rng = make_rng(seed);
    std::normal_distribution<double> normal;
    Eigen::MatrixXd e(dim, dim);
    for (Eigen::Index i = 0; i < dim; ++i)
      for (Eigen::Index j = 0; j < dim; ++j) e(i, j) = normal(rng);

    auto kappa_at = [&](double s) { return kappa_of(eye + s * e); };
    double lo = 0.0;
    double hi = 1.0 / static_cast<double>(n);
    for (int grow = 0; kappa_at(hi) < target_kappa; ++grow) {
      if (grow == 60) throw std::runtime_error("iperturb: cannot bracket target kappa");
      lo = hi;
      hi *= 2.0;
    }
    double sigma = hi;
    double kappa = kappa_at(hi);
    for (int it = 0; it < 200 && std::abs(kappa - target_kappa) > 1e-3 * target_kappa; ++it) {
      sigma = 0.5 * (lo + hi);
      kappa = kappa_at(sigma);
      (kappa < target_kappa ? lo : hi) = sigma;
    }
    if (std::abs(kappa - target_kappa) > 0.1 * target_kappa)
      throw std::runtime_error("iperturb: bisection did not reach the target kappa");
    out.matrix = dense_record(eye + sigma * e, Symmetry::General);
    out.sigma = sigma;
  }
  out.matrix.kappa = kappa_of(to_eigen(out.matrix.to_dense()));
  out.matrix.name = "iperturb";
  out.matrix.provenance = "generated:iperturb";
  return out;
}

Vector sample_input_vector(std::size_t n, std::uint64_t seed) {
  Rng rng = make_rng(seed);
  std::normal_distribution<double> normal;
  Vector x(n);
  for (double& v : x) v = normal(rng);
  return x;
}

MatrixRecord make_spd_surrogate(std::size_t n, double norm2, double kappa, std::uint64_t seed) {
  if (n == 0) throw std::invalid_argument("surrogate: n must be >= 1");
  if (!(norm2 > 0.0) || !(kappa >= 1.0))
    throw std::invalid_argument("surrogate: need norm2 > 0 and kappa >= 1");
  const auto dim = static_cast<Eigen::Index>(n);
  Rng rng = make_rng(seed);
  std::normal_distribution<double> normal;
  Eigen::MatrixXd g(dim, dim);
  for (Eigen::Index i = 0; i < dim; ++i)
    for (Eigen::Index j = 0; j < dim; ++j) g(i, j) = normal(rng);
  const Eigen::MatrixXd q = Eigen::HouseholderQR<Eigen::MatrixXd>(g).householderQ();

  Eigen::VectorXd s(dim);
  for (Eigen::Index k = 0; k < dim; ++k) {
    const double t = dim > 1 ? static_cast<double>(k) / static_cast<double>(dim - 1) : 0.0;
    s(k) = norm2 * std::pow(kappa, -t);
  }
  Eigen::MatrixXd a = q * s.asDiagonal() * q.transpose();
  for (Eigen::Index i = 0; i < dim; ++i)
    for (Eigen::Index j = 0; j < i; ++j) a(j, i) = a(i, j);

  MatrixRecord rec = dense_record(a, Symmetry::Symmetric);
  rec.kappa = kappa_of(a);
  rec.provenance = "surrogate:spd";
  return rec;
}

MatrixRecord make_sparse_surrogate(std::size_t n, double norm_bound, std::uint64_t seed,
                                   std::size_t offdiag_per_row) {
  if (n == 0) throw std::invalid_argument("surrogate: n must be >= 1");
  if (!(norm_bound > 0.0)) throw std::invalid_argument("surrogate: norm bound must be > 0");
  Rng rng = make_rng(seed);
  std::normal_distribution<double> normal;
  std::uniform_int_distribution<std::size_t> pick(0, n - 1);
  std::uniform_real_distribution<double> margin(0.1, 1.0);

  std::vector<Triplet> t;
  t.reserve(n * (offdiag_per_row + 1));
  if (n > 1) {
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t k = 0; k < offdiag_per_row / 2; ++k) {
        std::size_t j = pick(rng);
        if (j == i) continue;
        const double v = normal(rng);
        t.push_back({i, j, v});
        t.push_back({j, i, v});
      }
    }
  }
  const CsrMatrix off = CsrMatrix::from_triplets(n, n, t);
  std::vector<double> row_abs(n, 0.0);
  for (const auto& e : off.triplets()) row_abs[e.row] += std::abs(e.value);
  for (std::size_t i = 0; i < n; ++i) t.push_back({i, i, row_abs[i] + margin(rng)});

  const CsrMatrix a = CsrMatrix::from_triplets(n, n, std::move(t));
  double peak = 0.0;
  std::vector<double> sums(n, 0.0);
  MatrixRecord rec;
  rec.entries = a.triplets();
  for (const auto& e : rec.entries) sums[e.row] += std::abs(e.value);
  for (double s : sums) peak = std::max(peak, s);
  for (auto& e : rec.entries) e.value *= norm_bound / peak;
  rec.rows = rec.cols = n;
  rec.symmetry = Symmetry::Symmetric;
  rec.provenance = "surrogate:sparse";
  return rec;
}

}  // namespace xbar::io
