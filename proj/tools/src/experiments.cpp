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

#include <algorithm>
#include <filesystem>
#include <stdexcept>

#include "xbar/io/generators.hpp"
#include "xbar/io/registry.hpp"
#include "xbar/metrics.hpp"
#include "xbar/parallel.hpp"
#include "xbar/rng.hpp"
#include "xbar/tiling.hpp"

namespace xbar::cli {
namespace {

constexpr const char* kBenchmarkDevice = "EpiRAM";
constexpr const char* kShippedNoisy[] = {"Ag-aSi", "AlOx-HfO2", "EpiRAM", "TaOx-HfOx"};

// One (device, matrix, grid, k, ec) point of an experiment.
struct Setting {
  std::string device;
  const LoadedMatrix* matrix = nullptr;
  GridShape grid;
  std::size_t k = 0;
  bool ec = false;
  std::uint64_t normalization = 1;
};

io::ResultRow make_row(const Setting& s, std::size_t rep, std::uint64_t seed,
                       const DistributedResult& r) {
  io::ResultRow row;
  row.device = s.device;
  row.matrix = s.matrix->label;
  row.m = s.matrix->csr.rows();
  row.n = s.matrix->csr.cols();
  row.grid = io::grid_label(s.grid);
  row.k = s.k;
  row.ec_enabled = s.ec;
  row.replicate = rep;
  row.err_l2 = r.metrics.err_l2;
  row.err_linf = r.metrics.err_linf;
  row.e_w_joules = r.metrics.e_w;
  row.l_w_seconds = r.metrics.l_w;
  row.e_w_raw_joules = r.raw.e_w;
  row.l_w_raw_seconds = r.raw.l_w;
  row.normalization = r.metrics.normalization;
  row.seed = seed;
  return row;
}

DistributedResult run_once(const io::ExperimentConfig& cfg, const Setting& s, std::size_t rep,
                           std::size_t inner_workers) {
  const DeviceProfile& profile = io::find_profile(cfg.profiles, s.device);
  TileGrid grid(s.grid, profile);
  const Vector x = replicate_input(cfg, s.matrix->csr.cols(), rep);
  DistributedOptions opts;
  opts.workers = inner_workers;
  opts.normalization = s.normalization;
  return distributed_mat_vec_mul(s.matrix->csr, x, grid, cfg.ec_config(s.k, s.ec),
                                 replicate_seed(cfg.seed, rep), opts);
}

io::ResultRow summarize(const Setting& s, std::span<const io::ResultRow> runs,
                        std::uint64_t master) {
  std::vector<RunMetrics> norm;
  std::vector<RunMetrics> raw;
  for (const auto& r : runs) {
    norm.push_back({r.err_l2, r.err_linf, r.e_w_joules, r.l_w_seconds, 1, r.normalization});
    raw.push_back({r.err_l2, r.err_linf, r.e_w_raw_joules, r.l_w_raw_seconds, 1, 1});
  }
  const RunMetrics m = replication_summary(norm);
  const RunMetrics mr = replication_summary(raw);
  io::ResultRow row = runs.front();
  row.replicate.reset();
  row.err_l2 = m.err_l2;
  row.err_linf = m.err_linf;
  row.e_w_joules = m.e_w;
  row.l_w_seconds = m.l_w;
  row.e_w_raw_joules = mr.e_w;
  row.l_w_raw_seconds = mr.l_w;
  row.normalization = s.normalization;
  row.seed = master;
  return row;
}

// Runs every (setting, replicate) pair. With `parallel_jobs` the pairs are
// spread over the worker pool and each multiply runs single-threaded;
// otherwise pairs run in order and each multiply uses the pool. Output order
// and values are the same either way.
SweepOutput run_settings(const io::ExperimentConfig& cfg, const std::vector<Setting>& settings,
                         bool parallel_jobs) {
  const std::size_t workers = resolve_workers(cfg.workers);
  const std::size_t reps = cfg.reps;
  std::vector<io::ResultRow> rows(settings.size() * reps);
  auto job = [&](std::size_t j, std::size_t inner) {
    const Setting& s = settings[j / reps];
    const std::size_t rep = j % reps;
    rows[j] = make_row(s, rep, replicate_seed(cfg.seed, rep), run_once(cfg, s, rep, inner));
  };
  if (parallel_jobs) {
    parallel_for(rows.size(), workers, [&](std::size_t j) { job(j, 1); });
  } else {
    for (std::size_t j = 0; j < rows.size(); ++j) job(j, workers);
  }

  SweepOutput out;
  out.runs = rows;
  for (std::size_t i = 0; i < settings.size(); ++i) {
    out.summary.push_back(
        summarize(settings[i], std::span(rows).subspan(i * reps, reps), cfg.seed));
  }
  return out;
}

}  // namespace

LoadedMatrix load_matrix(const io::ExperimentConfig& cfg, const std::string& name) {
  LoadedMatrix out;
  if (name == "iperturb") {
    out.record = io::generate_iperturb(66, derive_seed(cfg.seed, kMatrixStream), cfg.kappa).matrix;
    out.label = "iperturb";
  } else if (std::filesystem::path(name).extension() == ".mtx") {
    out.record = io::load_matrix_market(name);
    out.label = out.record.name;
  } else {
    out.record = io::load_registry_matrix(name, cfg.data_dir, cfg.synthetic,
                                          derive_seed(cfg.seed, kMatrixStream));
    out.label = out.record.provenance.starts_with("surrogate") ? name + "~surrogate" : name;
  }
  out.csr = out.record.to_csr();
  return out;
}

std::vector<std::string> selected_devices(const io::ExperimentConfig& cfg) {
  if (!cfg.devices.empty()) return cfg.devices;
  return {std::begin(kShippedNoisy), std::end(kShippedNoisy)};
}

bool ec_allowed(const io::ExperimentConfig& cfg, const std::string& device) {
  return cfg.ec && (device != kBenchmarkDevice || cfg.epiram_ec);
}

std::uint64_t replicate_seed(std::uint64_t master, std::size_t replicate) {
  return derive_seed(master, replicate);
}

Vector replicate_input(const io::ExperimentConfig& cfg, std::size_t n, std::size_t replicate) {
  if (cfg.vector_seed != 0) return io::sample_input_vector(n, cfg.vector_seed);
  const std::uint64_t base = cfg.fixed_x ? cfg.seed : replicate_seed(cfg.seed, replicate);
  return io::sample_input_vector(n, derive_seed(base, kVectorStream));
}

RunOutput run_mvm(const io::ExperimentConfig& cfg, const LoadedMatrix& matrix) {
  Setting s;
  s.device = cfg.devices.empty() ? "TaOx-HfOx" : cfg.devices.front();
  s.matrix = &matrix;
  s.grid = cfg.grid;
  s.k = cfg.k;
  s.ec = cfg.ec;
  s.normalization = cfg.normalization == 0 ? 1 : cfg.normalization;
  const DistributedResult r = run_once(cfg, s, 0, resolve_workers(cfg.workers));
  RunOutput out;
  out.b_hat = r.b_hat;
  out.row = make_row(s, 0, replicate_seed(cfg.seed, 0), r);
  return out;
}

SweepOutput bench_ec_sweep(const io::ExperimentConfig& cfg, const LoadedMatrix& matrix) {
  std::vector<Setting> settings;
  for (const auto& device : selected_devices(cfg)) {
    for (bool ec : {false, true}) {
      if (ec && !ec_allowed(cfg, device)) continue;
      for (std::size_t k = 0; k <= cfg.k_max; ++k) {
        Setting s;
        s.device = device;
        s.matrix = &matrix;
        s.grid = cfg.grid;
        s.k = k;
        s.ec = ec;
        s.normalization = cfg.normalization == 0 ? 1 : cfg.normalization;
        settings.push_back(s);
      }
    }
  }
  return run_settings(cfg, settings, true);
}

SweepOutput bench_weak_scaling(const io::ExperimentConfig& cfg, const LoadedMatrix& matrix,
                               const std::vector<std::size_t>& cell_sizes) {
  for (std::size_t c : cell_sizes) {
    if (c < 32 || c > 1024 || (c & (c - 1)) != 0)
      throw std::invalid_argument("cell size " + std::to_string(c) +
                                  " must be a power of two in [32, 1024]");
  }
  std::vector<Setting> settings;
  for (const auto& device : selected_devices(cfg)) {
    for (std::size_t c : cell_sizes) {
      Setting s;
      s.device = device;
      s.matrix = &matrix;
      s.grid = {cfg.grid.tile_rows, cfg.grid.tile_cols, c, c};
      s.k = cfg.k;
      s.ec = ec_allowed(cfg, device);
      s.normalization = cfg.normalization == 0 ? 1 : cfg.normalization;
      settings.push_back(s);
    }
  }
  return run_settings(cfg, settings, false);
}

SweepOutput bench_strong_scaling(const io::ExperimentConfig& cfg,
                                 const std::vector<LoadedMatrix>& matrices) {
  std::vector<Setting> settings;
  for (const auto& m : matrices) {
    for (const auto& device : selected_devices(cfg)) {
      Setting s;
      s.device = device;
      s.matrix = &m;
      s.grid = cfg.grid;
      s.k = cfg.k;
      s.ec = ec_allowed(cfg, device);
      s.normalization = cfg.normalization != 0
                            ? cfg.normalization
                            : reassignment_factor(m.csr.rows(), m.csr.cols(), cfg.grid);
      settings.push_back(s);
    }
  }
  return run_settings(cfg, settings, false);
}

}  // namespace xbar::cli
