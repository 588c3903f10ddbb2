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

#include <cmath>
#include <stdexcept>

#include "gtest/gtest.h"

using namespace xbar;
using namespace xbar::io;

TEST(generators, iperturb_hits_target_condition) {
    const IperturbResult r = generate_iperturb(66, 7, 1.2342);
    EXPECT_EQ(r.matrix.rows, 66u);
    EXPECT_GE(r.matrix.kappa, 1.11);
    EXPECT_LE(r.matrix.kappa, 1.36);
    EXPECT_NEAR(condition_number(r.matrix.to_dense()), r.matrix.kappa, 1e-9);
    EXPECT_GT(r.sigma, 0.0);
}

TEST(generators, iperturb_perturbation_is_zero_mean) {
    for (std::uint64_t seed : {1u, 2u, 3u}) {
        const IperturbResult r = generate_iperturb(66, seed, 1.2342);
        const DenseMatrix a = r.matrix.to_dense();
        double sum = 0.0;
        for (std::size_t i = 0; i < 66; ++i)
            for (std::size_t j = 0; j < 66; ++j) sum += a(i, j) - (i == j ? 1.0 : 0.0);
        EXPECT_LT(std::abs(sum / (66.0 * 66.0)), 3.0 * r.sigma / 66.0);
    }
}

TEST(generators, iperturb_identity_limit_and_errors) {
    const IperturbResult r = generate_iperturb(10, 1, 1.0);
    EXPECT_EQ(r.matrix.to_dense(), DenseMatrix::identity(10));
    EXPECT_EQ(r.sigma, 0.0);
    EXPECT_THROW(generate_iperturb(1, 1), std::invalid_argument);
    EXPECT_THROW(generate_iperturb(10, 1, 0.5), std::invalid_argument);
    EXPECT_EQ(generate_iperturb(20, 5).matrix.to_dense(), generate_iperturb(20, 5).matrix.to_dense());
}

TEST(generators, condition_number_of_diagonal) {
    DenseMatrix d(3, 3);
    d(0, 0) = 4.0;
    d(1, 1) = -2.0;
    d(2, 2) = 0.5;
    EXPECT_NEAR(condition_number(d), 8.0, 1e-12);
    EXPECT_NEAR(spectral_norm(d), 4.0, 1e-12);
    EXPECT_TRUE(std::isinf(condition_number(DenseMatrix(2, 2))));
}

TEST(generators, sample_input_vector_statistics) {
    EXPECT_EQ(sample_input_vector(50, 3), sample_input_vector(50, 3));
    EXPECT_NE(sample_input_vector(50, 3), sample_input_vector(50, 4));
    const Vector x = sample_input_vector(100000, 11);
    double mean = 0.0;
    for (double v : x) mean += v;
    mean /= x.size();
    double var = 0.0;
    for (double v : x) var += (v - mean) * (v - mean);
    var /= x.size() - 1;
    EXPECT_LT(std::abs(mean), 0.02);
    EXPECT_LT(std::abs(var - 1.0), 0.02);
}

TEST(generators, spd_surrogate_properties) {
    const MatrixRecord r = make_spd_surrogate(40, 1.8e4, 4.3e3, 5);
    const DenseMatrix a = r.to_dense();
    EXPECT_EQ(a, a.transpose());
    EXPECT_NEAR(spectral_norm(a), 1.8e4, 1e-6 * 1.8e4);
    EXPECT_NEAR(condition_number(a), 4.3e3, 1e-4 * 4.3e3);
    EXPECT_EQ(r.symmetry, Symmetry::Symmetric);
}

TEST(generators, sparse_surrogate_properties) {
    const MatrixRecord r = make_sparse_surrogate(500, 4.0, 6);
    const CsrMatrix a = r.to_csr();
    EXPECT_LE(a.nnz(), 500u * 9u);
    const DenseMatrix d = a.to_dense();
    EXPECT_EQ(d, d.transpose());
    double max_row = 0.0;
    for (std::size_t i = 0; i < 500; ++i) {
        double off = 0.0, row = 0.0;
        for (std::size_t j = 0; j < 500; ++j) {
            row += std::abs(d(i, j));
            if (j != i) off += std::abs(d(i, j));
        }
        EXPECT_GT(std::abs(d(i, i)), off);
        max_row = std::max(max_row, row);
    }
    EXPECT_NEAR(max_row, 4.0, 1e-12);
    EXPECT_LE(spectral_norm(d), 4.0 + 1e-12);
}
