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

#include <CLI11.hpp>

#include <cstdio>
#include <exception>
#include <filesystem>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "xbar/cli/experiments.hpp"
#include "xbar/io/config.hpp"
#include "xbar/io/registry.hpp"
#include "xbar/io/results.hpp"

namespace fs = std::filesystem;
using namespace xbar;

namespace {

// Flags shared by every simulation subcommand. Unset flags leave the config
// file (or the subcommand default) in charge.
struct CommonFlags {
  std::string config;
  std::string out = ".";
  std::vector<std::string> devices;
  std::optional<std::string> matrix;
  std::optional<std::size_t> k, k_max, reps, workers, tile_rows, tile_cols, cell_rows, cell_cols;
  std::optional<double> eps, lambda, kappa;
  std::optional<int> h;
  std::optional<std::string> norm, denoise, data_dir;
  std::optional<std::uint64_t> seed, vector_seed, normalization;
  bool fixed_x = false;
  bool epiram_ec = false;
  bool synthetic = false;
  bool no_ec = false;

  void attach(CLI::App* app, bool with_matrix) {
    app->add_option("--config", config, "Experiment TOML file")->check(CLI::ExistingFile);
    app->add_option("--out", out, "Output directory");
    app->add_option("--device", devices, "Device profile name (repeatable)")->delimiter(',');
    if (with_matrix)
      app->add_option("--matrix", matrix, "Registry name, 'iperturb', or a .mtx path");
    app->add_option("--k", k, "Write-and-verify iterations");
    app->add_option("--reps", reps, "Replicates per configuration");
    app->add_option("--eps", eps, "Write-and-verify tolerance");
    app->add_option("--norm", norm, "Residual norm: 2 or inf");
    app->add_option("--lambda", lambda, "Denoiser regularization");
    app->add_option("--superdiagonal", h, "Differential matrix superdiagonal value h");
    app->add_option("--denoise", denoise, "Denoise mode: exact or encoded");
    app->add_option("--seed", seed, "Master seed");
    app->add_option("--vector-seed", vector_seed, "Fixed seed for the input vector");
    app->add_option("--kappa", kappa, "Iperturb target condition number");
    app->add_option("--normalization", normalization, "Energy/latency divisor (0 = automatic)");
    app->add_option("--data-dir", data_dir, "Directory holding registry .mtx files");
    app->add_option("--R", tile_rows, "Tile rows");
    app->add_option("--C", tile_cols, "Tile columns");
    app->add_option("--r", cell_rows, "Cells per crossbar row");
    app->add_option("--c", cell_cols, "Cells per crossbar column");
    app->add_option("--workers", workers, "Worker threads (overrides XBAR_WORKERS)");
    app->add_flag("--fixed-x", fixed_x, "Reuse one input vector for every replicate");
    app->add_flag("--epiram-ec", epiram_ec, "Also run EpiRAM with error correction");
    app->add_flag("--synthetic", synthetic, "Use generated stand-ins for missing matrices");
    app->add_flag("--no-ec", no_ec, "Disable error correction");
  }

  io::ExperimentConfig resolve(io::ExperimentConfig base) const {
    io::ExperimentConfig cfg =
        config.empty() ? std::move(base) : io::load_experiment_config(config, std::move(base));
    if (!devices.empty()) cfg.devices = devices;
    if (matrix) cfg.matrix = *matrix;
    if (k) cfg.k = *k;
    if (k_max) cfg.k_max = *k_max;
    if (reps) cfg.reps = *reps;
    if (eps) cfg.eps = *eps;
    if (norm) {
      try {
        cfg.norm = parse_norm(*norm);
      } catch (const std::invalid_argument& e) {
        throw io::ConfigError(std::string("--norm: ") + e.what());
      }
    }
    if (lambda) cfg.lambda = *lambda;
    if (h) cfg.h = *h;
    if (denoise) cfg.denoise = io::parse_denoise_mode(*denoise);
    if (seed) cfg.seed = *seed;
    if (vector_seed) cfg.vector_seed = *vector_seed;
    if (kappa) cfg.kappa = *kappa;
    if (normalization) cfg.normalization = *normalization;
    if (data_dir) cfg.data_dir = *data_dir;
    if (tile_rows) cfg.grid.tile_rows = *tile_rows;
    if (tile_cols) cfg.grid.tile_cols = *tile_cols;
    if (cell_rows) cfg.grid.cell_rows = *cell_rows;
    if (cell_cols) cfg.grid.cell_cols = *cell_cols;
    if (workers) cfg.workers = *workers;
    if (fixed_x) cfg.fixed_x = true;
    if (epiram_ec) cfg.epiram_ec = true;
    if (synthetic) cfg.synthetic = true;
    if (no_ec) cfg.ec = false;
    cfg.validate();
    return cfg;
  }
};

// Creates the directory and proves it is writable before any simulation runs.
fs::path prepare_out_dir(const std::string& out) {
  fs::path dir(out);
  fs::create_directories(dir);
  const fs::path probe = dir / ".xbar-write-probe";
  io::write_file_atomic(probe, "");
  fs::remove(probe);
  return dir;
}

void note_sources(const std::vector<const cli::LoadedMatrix*>& ms) {
  for (const auto* m : ms) {
    std::cerr << "matrix " << m->record.name << ": " << m->csr.rows() << "x" << m->csr.cols()
              << ", " << m->csr.nnz() << " nonzeros, source " << m->record.provenance << "\n";
  }
}

void write_sweep(const fs::path& dir, const std::string& stem, const cli::SweepOutput& s,
                 const io::ExperimentConfig& cfg, const std::string& command) {
  const std::string runs = io::to_csv(s.runs);
  const std::string summary = io::to_csv(s.summary);
  const std::string json = io::to_json(s.summary, cfg, command);
  io::write_file_atomic(dir / (stem + "_runs.csv"), runs);
  io::write_file_atomic(dir / (stem + "_summary.csv"), summary);
  io::write_file_atomic(dir / (stem + ".json"), json);
}

io::ExperimentConfig with_grid(GridShape g) {
  io::ExperimentConfig cfg;
  cfg.grid = g;
  return cfg;
}

std::vector<std::size_t> parse_sizes(const std::vector<std::size_t>& v) {
  if (v.empty()) return {32, 64, 128, 256, 512, 1024};
  return v;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"RRAM crossbar matrix-vector multiplication simulator and benchmark harness"};
  app.require_subcommand(1);

  CommonFlags run_flags;
  CLI::App* run = app.add_subcommand("run", "Single distributed multiply");
  run_flags.attach(run, true);

  CommonFlags ec_flags;
  CLI::App* bench_ec = app.add_subcommand("bench-ec", "Write-and-verify and error-correction sweep");
  ec_flags.attach(bench_ec, true);
  bench_ec->add_option("--k-max", ec_flags.k_max, "Largest iteration count in the sweep");

  CommonFlags weak_flags;
  std::vector<std::size_t> cell_sizes;
  CLI::App* weak = app.add_subcommand("bench-weak", "Weak scaling over crossbar cell sizes");
  weak_flags.attach(weak, true);
  weak->add_option("--cell-sizes", cell_sizes, "Square cell sizes (powers of two, 32..1024)")
      ->delimiter(',');

  CommonFlags strong_flags;
  std::vector<std::string> strong_matrices;
  bool strong_all = false;
  CLI::App* strong = app.add_subcommand("bench-strong", "Strong scaling over registry matrices");
  strong_flags.attach(strong, false);
  strong->add_option("--matrices", strong_matrices, "Registry names (default: desk-scale subset)")
      ->delimiter(',');
  strong->add_flag("--all", strong_all, "Include every registry matrix");

  CLI::App* profiles = app.add_subcommand("profiles", "Device profile utilities");
  profiles->require_subcommand(1);
  std::string profiles_config;
  CLI::App* profiles_list = profiles->add_subcommand("list", "List available device profiles");
  profiles_list->add_option("--config", profiles_config, "Experiment or profile TOML to merge")
      ->check(CLI::ExistingFile);

  CLI11_PARSE(app, argc, argv);

  try {
    if (*run) {
      const auto cfg = run_flags.resolve(with_grid({8, 8, 1024, 1024}));
      const auto matrix = cli::load_matrix(cfg, cfg.matrix);
      const fs::path dir = prepare_out_dir(run_flags.out);
      note_sources({&matrix});
      const cli::RunOutput r = cli::run_mvm(cfg, matrix);
      std::ostringstream b;
      b << "index,value\n";
      char buf[40];
      for (std::size_t i = 0; i < r.b_hat.size(); ++i) {
        std::snprintf(buf, sizeof buf, "%.17g", r.b_hat[i]);
        b << i << ',' << buf << '\n';
      }
      const std::vector<io::ResultRow> rows{r.row};
      io::write_file_atomic(dir / "run.csv", io::to_csv(rows));
      io::write_file_atomic(dir / "run.json", io::to_json(rows, cfg, "run"));
      io::write_file_atomic(dir / "b_hat.csv", b.str());
      std::cout << io::to_csv(rows);
    } else if (*bench_ec) {
      const auto cfg = ec_flags.resolve(with_grid({1, 1, 66, 66}));
      const auto matrix = cli::load_matrix(cfg, cfg.matrix);
      const fs::path dir = prepare_out_dir(ec_flags.out);
      note_sources({&matrix});
      write_sweep(dir, "ec", cli::bench_ec_sweep(cfg, matrix), cfg, "bench-ec");
    } else if (*weak) {
      auto base = with_grid({8, 8, 1024, 1024});
      base.matrix = "add32";
      const auto cfg = weak_flags.resolve(std::move(base));
      const auto sizes = parse_sizes(cell_sizes);
      const auto matrix = cli::load_matrix(cfg, cfg.matrix);
      const fs::path dir = prepare_out_dir(weak_flags.out);
      note_sources({&matrix});
      write_sweep(dir, "weak", cli::bench_weak_scaling(cfg, matrix, sizes), cfg, "bench-weak");
    } else if (*strong) {
      const auto cfg = strong_flags.resolve(with_grid({8, 8, 1024, 1024}));
      std::vector<std::string> names = strong_matrices;
      if (names.empty()) {
        for (const auto& e : io::matrix_registry())
          if (strong_all || e.desk_scale) names.emplace_back(e.name);
      }
      // Report every missing file at once rather than stopping at the first.
      std::vector<cli::LoadedMatrix> matrices;
      std::string missing;
      for (const auto& n : names) {
        try {
          matrices.push_back(cli::load_matrix(cfg, n));
        } catch (const std::exception& e) {
          missing += std::string("\n  ") + e.what();
        }
      }
      if (!missing.empty()) throw std::runtime_error("cannot load matrices:" + missing);
      const fs::path dir = prepare_out_dir(strong_flags.out);
      std::vector<const cli::LoadedMatrix*> ptrs;
      for (const auto& m : matrices) ptrs.push_back(&m);
      note_sources(ptrs);
      write_sweep(dir, "strong", cli::bench_strong_scaling(cfg, matrices), cfg, "bench-strong");
    } else if (*profiles_list) {
      io::ProfileSet set = io::builtin_profiles();
      if (!profiles_config.empty()) set = io::load_experiment_config(profiles_config).profiles;
      std::printf("%-12s %11s %11s %8s %7s %7s %9s %9s %9s %6s\n", "name", "g_min", "g_max",
                  "levels", "nl_ltp", "nl_ltd", "sigma", "e_pulse", "t_pulse", "p_max");
      for (const auto& [name, p] : set) {
        std::printf("%-12s %11.4g %11.4g %8llu %7.3g %7.3g %9.3g %9.3g %9.3g %6llu\n",
                    name.c_str(), p.g_min, p.g_max, static_cast<unsigned long long>(p.n_levels),
                    p.nl_ltp, p.nl_ltd, p.sigma_c2c, p.e_pulse, p.t_pulse,
                    static_cast<unsigned long long>(p.p_max));
      }
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
