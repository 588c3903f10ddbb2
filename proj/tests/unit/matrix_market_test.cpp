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

#include "xbar/io/matrix_market.hpp"

#include <filesystem>
#include <fstream>
#include <sstream>

#include "gtest/gtest.h"
#include "test_support.hpp"
#include "xbar/io/generators.hpp"

using namespace xbar;
using namespace xbar::io;

namespace {

MatrixMarketError::Kind parse_error_kind(std::string_view text) {
    try {
        parse_matrix_market(text);
    } catch (const MatrixMarketError& e) {
        return e.kind();
    }
    ADD_FAILURE() << "no error for:\n" << text;
    return MatrixMarketError::Kind::MalformedBanner;
}

MatrixRecord roundtrip(const MatrixRecord& rec) {
    std::ostringstream out;
    write_matrix_market(rec, out);
    return parse_matrix_market(out.str(), rec.name);
}

}  // namespace

TEST(matrix_market, diagonal_general) {
    const MatrixRecord r = parse_matrix_market(
        "%%MatrixMarket matrix coordinate real general\n"
        "% a comment\n"
        "2 2 2\n"
        "1 1 5\n"
        "2 2 7\n",
        "diag");
    EXPECT_EQ(r.rows, 2u);
    EXPECT_EQ(r.symmetry, Symmetry::General);
    const DenseMatrix d = r.to_dense();
    EXPECT_EQ(d(0, 0), 5.0);
    EXPECT_EQ(d(1, 1), 7.0);
    EXPECT_EQ(d(0, 1), 0.0);
}

TEST(matrix_market, symmetric_expands) {
    const MatrixRecord r = parse_matrix_market(
        "%%MatrixMarket matrix coordinate integer symmetric\n"
        "3 3 4\n"
        "1 1 4\n"
        "2 1 -1\n"
        "3 2 2.5e0\n"
        "3 3 9\n");
    EXPECT_EQ(r.symmetry, Symmetry::Symmetric);
    EXPECT_EQ(r.entries.size(), 6u);
    const DenseMatrix d = r.to_dense();
    EXPECT_EQ(d, d.transpose());
    EXPECT_EQ(d(0, 1), -1.0);
    EXPECT_EQ(d(1, 2), 2.5);
}

TEST(matrix_market, distinct_errors) {
    using K = MatrixMarketError::Kind;
    EXPECT_EQ(parse_error_kind(""), K::MalformedBanner);
    EXPECT_EQ(parse_error_kind("%%MatrixMarket tensor coordinate real general\n1 1 0\n"), K::MalformedBanner);
    EXPECT_EQ(parse_error_kind("%%MatrixMarket matrix array real general\n1 1\n1\n"), K::UnsupportedFormat);
    EXPECT_EQ(parse_error_kind("%%MatrixMarket matrix coordinate complex general\n1 1 0\n"), K::NonRealField);
    EXPECT_EQ(parse_error_kind("%%MatrixMarket matrix coordinate pattern general\n1 1 0\n"), K::NonRealField);
    EXPECT_EQ(parse_error_kind("%%MatrixMarket matrix coordinate real hermitian\n1 1 0\n"), K::UnsupportedQualifier);
    EXPECT_EQ(parse_error_kind("%%MatrixMarket matrix coordinate real skew-symmetric\n1 1 0\n"), K::UnsupportedQualifier);
    EXPECT_EQ(parse_error_kind("%%MatrixMarket matrix coordinate real general\n2 2\n"), K::MalformedSize);
    EXPECT_EQ(parse_error_kind("%%MatrixMarket matrix coordinate real symmetric\n2 3 0\n"), K::MalformedSize);
    EXPECT_EQ(parse_error_kind("%%MatrixMarket matrix coordinate real general\n2 2 1\n1 x 3\n"), K::MalformedEntry);
    EXPECT_EQ(parse_error_kind("%%MatrixMarket matrix coordinate real general\n2 2 1\n3 1 1\n"), K::IndexOutOfRange);
    EXPECT_EQ(parse_error_kind("%%MatrixMarket matrix coordinate real general\n2 2 1\n0 1 1\n"), K::IndexOutOfRange);
    EXPECT_EQ(parse_error_kind("%%MatrixMarket matrix coordinate real symmetric\n2 2 1\n1 2 1\n"), K::IndexOutOfRange);
    EXPECT_EQ(parse_error_kind("%%MatrixMarket matrix coordinate real general\n2 2 2\n1 1 1\n"), K::EntryCount);
}

TEST(matrix_market, roundtrip_is_value_exact) {
    Rng rng(1);
    MatrixRecord general;
    general.name = "g";
    general.rows = 7;
    general.cols = 5;
    std::normal_distribution<double> normal;
    for (std::size_t i = 0; i < 7; ++i)
        for (std::size_t j = 0; j < 5; ++j)
            if ((i + j) % 2 == 0) general.entries.push_back({i, j, normal(rng) * 1e-7});
    const MatrixRecord g2 = roundtrip(general);
    EXPECT_EQ(g2.to_dense(), general.to_dense());

    const MatrixRecord spd = make_spd_surrogate(12, 3.0, 50.0, 9);
    const MatrixRecord s2 = roundtrip(spd);
    EXPECT_EQ(s2.symmetry, Symmetry::Symmetric);
    EXPECT_EQ(s2.to_dense(), spd.to_dense());
    EXPECT_EQ(roundtrip(s2).to_dense(), s2.to_dense());
}

TEST(matrix_market, load_from_file) {
    const auto dir = std::filesystem::temp_directory_path() / "xbar_mm_test";
    std::filesystem::create_directories(dir);
    const auto path = dir / "tiny.mtx";
    {
        std::ofstream out(path);
        out << "%%MatrixMarket matrix coordinate real general\n1 2 1\n1 2 -3.5\n";
    }
    const MatrixRecord r = load_matrix_market(path);
    EXPECT_EQ(r.name, "tiny");
    EXPECT_EQ(r.cols, 2u);
    EXPECT_EQ(r.provenance.rfind("file:", 0), 0u);
    EXPECT_THROW(load_matrix_market(dir / "missing.mtx"), std::runtime_error);
    std::filesystem::remove_all(dir);
}
