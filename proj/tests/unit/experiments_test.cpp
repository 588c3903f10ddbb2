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

#include "xbar/cli/experiments.hpp"

#include <filesystem>
#include <fstream>
#include <set>
#include <stdexcept>

#include "gtest/gtest.h"
#include "test_support.hpp"
#include "xbar/io/generators.hpp"
#include "xbar/tiling.hpp"

using namespace xbar;
using namespace xbar::cli;

namespace {

io::ExperimentConfig small_config() {
    io::ExperimentConfig cfg;
    cfg.data_dir = xbar::testing::data_dir();
    cfg.synthetic = true;
    cfg.reps = 2;
    cfg.k_max = 1;
    cfg.workers = 2;
    return cfg;
}

std::filesystem::path write_identity(std::size_t n) {
    const auto path = std::filesystem::temp_directory_path() / "xbar_identity66.mtx";
    std::ofstream out(path);
    out << "%%MatrixMarket matrix coordinate real general\n" << n << " " << n << " " << n << "\n";
    for (std::size_t i = 1; i <= n; ++i) out << i << " " << i << " 1\n";
    return path;
}

}  // namespace

TEST(experiments, load_matrix_sources) {
    io::ExperimentConfig cfg = small_config();
    const LoadedMatrix ip = load_matrix(cfg, "iperturb");
    EXPECT_EQ(ip.csr.rows(), 66u);
    EXPECT_EQ(ip.label, "iperturb");
    EXPECT_EQ(ip.record.provenance, "generated:iperturb");

    const LoadedMatrix bc = load_matrix(cfg, "bcsstk02");
    EXPECT_EQ(bc.csr.rows(), 66u);
    if (bc.record.provenance.starts_with("surrogate"))
        EXPECT_EQ(bc.label, "bcsstk02~surrogate");
    else
        EXPECT_EQ(bc.label, "bcsstk02");

    const LoadedMatrix file = load_matrix(cfg, write_identity(5).string());
    EXPECT_EQ(file.csr.nnz(), 5u);
    EXPECT_THROW(load_matrix(cfg, "not-a-matrix"), std::invalid_argument);
    cfg.synthetic = false;
    cfg.data_dir = "/nonexistent";
    EXPECT_THROW(load_matrix(cfg, "bcsstk02"), std::runtime_error);
}

TEST(experiments, device_selection_and_ec_policy) {
    io::ExperimentConfig cfg = small_config();
    EXPECT_EQ(selected_devices(cfg).size(), 4u);
    EXPECT_FALSE(ec_allowed(cfg, "EpiRAM"));
    EXPECT_TRUE(ec_allowed(cfg, "TaOx-HfOx"));
    cfg.epiram_ec = true;
    EXPECT_TRUE(ec_allowed(cfg, "EpiRAM"));
    cfg.ec = false;
    EXPECT_FALSE(ec_allowed(cfg, "TaOx-HfOx"));
    cfg.devices = {"ideal"};
    EXPECT_EQ(selected_devices(cfg), std::vector<std::string>{"ideal"});
}

TEST(experiments, seed_schedule) {
    io::ExperimentConfig cfg = small_config();
    EXPECT_EQ(replicate_seed(cfg.seed, 3), derive_seed(cfg.seed, 3));
    EXPECT_NE(replicate_input(cfg, 10, 0), replicate_input(cfg, 10, 1));
    EXPECT_EQ(replicate_input(cfg, 10, 1), replicate_input(cfg, 10, 1));
    cfg.fixed_x = true;
    EXPECT_EQ(replicate_input(cfg, 10, 0), replicate_input(cfg, 10, 5));
    cfg.vector_seed = 77;
    EXPECT_EQ(replicate_input(cfg, 10, 2), io::sample_input_vector(10, 77));
}

TEST(experiments, ec_sweep_shape) {
    io::ExperimentConfig cfg = small_config();
    cfg.reps = 1;
    cfg.k_max = 0;
    cfg.ec = false;
    const LoadedMatrix m = load_matrix(cfg, "iperturb");
    SweepOutput s = bench_ec_sweep(cfg, m);
    EXPECT_EQ(s.runs.size(), 4u);
    std::set<std::string> devices;
    for (const auto& r : s.runs) devices.insert(r.device);
    EXPECT_EQ(devices.size(), 4u);

    cfg.ec = true;
    cfg.k_max = 20;
    cfg.devices = {"TaOx-HfOx", "EpiRAM"};
    s = bench_ec_sweep(cfg, m);
    // TaOx-HfOx with and without correction, EpiRAM without.
    EXPECT_EQ(s.summary.size(), 3u * 21u);
    EXPECT_EQ(s.runs.size(), 3u * 21u);
    for (const auto& r : s.summary) {
        EXPECT_FALSE(r.replicate.has_value());
        EXPECT_FALSE(r.device == "EpiRAM" && r.ec_enabled);
        EXPECT_EQ(r.grid, "1x1x66x66");
    }
}

TEST(experiments, ec_sweep_summary_is_mean_of_runs) {
    io::ExperimentConfig cfg = small_config();
    cfg.reps = 4;
    cfg.devices = {"Ag-aSi"};
    const SweepOutput s = bench_ec_sweep(cfg, load_matrix(cfg, "iperturb"));
    ASSERT_EQ(s.summary.size(), 4u);
    for (std::size_t i = 0; i < s.summary.size(); ++i) {
        std::vector<double> errs;
        for (std::size_t r = 0; r < 4; ++r) errs.push_back(s.runs[i * 4 + r].err_l2);
        std::sort(errs.begin(), errs.end());
        EXPECT_DOUBLE_EQ(s.summary[i].err_l2, (errs[0] + errs[1] + errs[2] + errs[3]) / 4.0);
    }
}

TEST(experiments, sweep_is_worker_independent) {
    io::ExperimentConfig cfg = small_config();
    const LoadedMatrix m = load_matrix(cfg, "bcsstk02");
    cfg.workers = 1;
    const SweepOutput a = bench_ec_sweep(cfg, m);
    cfg.workers = 3;
    const SweepOutput b = bench_ec_sweep(cfg, m);
    EXPECT_EQ(io::to_csv(a.runs), io::to_csv(b.runs));
    EXPECT_EQ(io::to_csv(a.summary), io::to_csv(b.summary));
}

TEST(experiments, weak_scaling_checks_cell_sizes) {
    io::ExperimentConfig cfg = small_config();
    const LoadedMatrix m = load_matrix(cfg, "iperturb");
    EXPECT_THROW(bench_weak_scaling(cfg, m, {48}), std::invalid_argument);
    EXPECT_THROW(bench_weak_scaling(cfg, m, {16}), std::invalid_argument);
    EXPECT_THROW(bench_weak_scaling(cfg, m, {2048}), std::invalid_argument);
    cfg.devices = {"TaOx-HfOx"};
    cfg.reps = 1;
    cfg.grid = {2, 2, 32, 32};
    const SweepOutput s = bench_weak_scaling(cfg, m, {32, 64});
    ASSERT_EQ(s.summary.size(), 2u);
    EXPECT_EQ(s.summary[0].grid, "2x2x32x32");
    EXPECT_EQ(s.summary[1].grid, "2x2x64x64");
    EXPECT_EQ(s.summary[0].normalization, 1u);
}

TEST(experiments, strong_scaling_normalizes_by_reassignment) {
    io::ExperimentConfig cfg = small_config();
    cfg.devices = {"TaOx-HfOx", "Ag-aSi"};
    cfg.reps = 1;
    cfg.grid = {1, 1, 32, 32};
    std::vector<LoadedMatrix> ms{load_matrix(cfg, "iperturb")};
    const SweepOutput s = bench_strong_scaling(cfg, ms);
    ASSERT_EQ(s.summary.size(), 2u);
    const std::uint64_t factor = reassignment_factor(66, 66, cfg.grid);
    EXPECT_EQ(factor, 3u);
    for (const auto& r : s.summary) {
        EXPECT_EQ(r.normalization, factor);
        EXPECT_NEAR(r.e_w_joules * factor, r.e_w_raw_joules, 1e-12 * r.e_w_raw_joules);
        EXPECT_NEAR(r.l_w_seconds * factor, r.l_w_raw_seconds, 1e-12 * r.l_w_raw_seconds);
    }
    cfg.normalization = 5;
    EXPECT_EQ(bench_strong_scaling(cfg, ms).summary[0].normalization, 5u);
}

TEST(experiments, run_identity_on_ideal_device) {
    io::ExperimentConfig cfg = small_config();
    cfg.devices = {"ideal"};
    cfg.grid = {1, 1, 66, 66};
    const LoadedMatrix m = load_matrix(cfg, write_identity(66).string());
    cfg.ec = false;
    const RunOutput r = run_mvm(cfg, m);
    // Only conductance scaling round-off remains.
    EXPECT_LE(r.row.err_l2, 1e-15);
    EXPECT_LE(r.row.err_linf, 1e-15);
    const Vector x = replicate_input(cfg, 66, 0);
    for (std::size_t i = 0; i < 66; ++i) EXPECT_DOUBLE_EQ(r.b_hat[i], x[i]);
    // The default smoothing weight shifts the corrected result by O(lambda).
    cfg.ec = true;
    EXPECT_LE(run_mvm(cfg, m).row.err_l2, 1e-10);
}

TEST(experiments, run_populates_all_metrics) {
    io::ExperimentConfig cfg = small_config();
    cfg.grid = {1, 1, 66, 66};
    const RunOutput r = run_mvm(cfg, load_matrix(cfg, "bcsstk02"));
    EXPECT_EQ(r.row.device, "TaOx-HfOx");
    EXPECT_TRUE(r.row.ec_enabled);
    EXPECT_EQ(r.row.k, 20u);
    EXPECT_GT(r.row.err_l2, 0.0);
    EXPECT_GT(r.row.err_linf, 0.0);
    EXPECT_GT(r.row.e_w_joules, 0.0);
    EXPECT_GT(r.row.l_w_seconds, 0.0);
    EXPECT_EQ(r.b_hat.size(), 66u);
}
