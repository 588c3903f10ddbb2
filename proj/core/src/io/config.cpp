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

#include "xbar/io/config.hpp"

#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

#include "toml.hpp"
#include "xbar/builtin_profiles.hpp"

namespace xbar::io {
namespace {

std::string key_path(std::string_view table, std::string_view key) {
  return std::string(table) + "." + std::string(key);
}

void reject_unknown(const toml::table& t, std::string_view where,
                    const std::set<std::string, std::less<>>& allowed) {
  for (const auto& [k, v] : t) {
    if (!allowed.contains(k.str())) {
      throw ConfigError("unknown key '" + key_path(where, k.str()) + "'");
    }
  }
}

double get_double(const toml::table& t, std::string_view where, std::string_view key) {
  const toml::node* n = t.get(key);
  if (n == nullptr) throw ConfigError("missing key '" + key_path(where, key) + "'");
  auto v = n->value<double>();
  if (!v || !(n->is_floating_point() || n->is_integer()))
    throw ConfigError("'" + key_path(where, key) + "' must be a number");
  return *v;
}

std::uint64_t get_count(const toml::table& t, std::string_view where, std::string_view key) {
  const toml::node* n = t.get(key);
  if (n == nullptr) throw ConfigError("missing key '" + key_path(where, key) + "'");
  auto v = n->value_exact<std::int64_t>();
  if (!v || *v < 0)
    throw ConfigError("'" + key_path(where, key) + "' must be a non-negative integer");
  return static_cast<std::uint64_t>(*v);
}

template <class F>
void if_present(const toml::table& t, std::string_view key, F&& f) {
  if (t.contains(key)) f();
}

toml::table parse_toml(std::string_view text, std::string_view source) {
  try {
    return toml::parse(text, source);
  } catch (const toml::parse_error& e) {
    std::ostringstream msg;
    msg << source << ":" << e.source().begin.line << ":" << e.source().begin.column << ": "
        << e.description();
    throw ConfigError(msg.str());
  }
}

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("cannot open config file " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

DeviceProfile profile_from_table(const std::string& name, const toml::table& t) {
  const std::string where = "device." + name;
  reject_unknown(t, where,
                 {"g_min", "g_max", "n_levels", "nl_ltp", "nl_ltd", "sigma_c2c", "e_pulse",
                  "t_pulse", "p_max"});
  DeviceProfile p;
  p.name = name;
  p.g_min = get_double(t, where, "g_min");
  p.g_max = get_double(t, where, "g_max");
  p.n_levels = get_count(t, where, "n_levels");
  p.nl_ltp = get_double(t, where, "nl_ltp");
  p.nl_ltd = get_double(t, where, "nl_ltd");
  p.sigma_c2c = get_double(t, where, "sigma_c2c");
  p.e_pulse = get_double(t, where, "e_pulse");
  p.t_pulse = get_double(t, where, "t_pulse");
  p.p_max = get_count(t, where, "p_max");
  try {
    p.validate();
  } catch (const std::invalid_argument& e) {
    throw ConfigError(e.what());
  }
  return p;
}

void merge_profiles(const toml::table& root, ProfileSet& into) {
  const toml::node* dev = root.get("device");
  if (dev == nullptr) return;
  const toml::table* devices = dev->as_table();
  if (devices == nullptr) throw ConfigError("'device' must be a table of device tables");
  for (const auto& [k, v] : *devices) {
    const toml::table* t = v.as_table();
    if (t == nullptr) throw ConfigError("'device." + std::string(k.str()) + "' must be a table");
    into.insert_or_assign(std::string(k.str()), profile_from_table(std::string(k.str()), *t));
  }
}

}  // namespace

ProfileSet parse_profiles(std::string_view toml_text, std::string_view source) {
  ProfileSet out;
  merge_profiles(parse_toml(toml_text, source), out);
  return out;
}

ProfileSet load_profiles_file(const std::filesystem::path& path) {
  return parse_profiles(read_file(path), path.string());
}

const ProfileSet& builtin_profiles() {
  static const ProfileSet set = parse_profiles(detail::kBuiltinProfilesToml, "builtin profiles");
  return set;
}

const DeviceProfile& find_profile(const ProfileSet& set, std::string_view name) {
  auto it = set.find(name);
  if (it != set.end()) return it->second;
  std::string known;
  for (const auto& [k, v] : set) known += (known.empty() ? "" : ", ") + k;
  throw ConfigError("unknown device '" + std::string(name) + "' (available: " + known + ")");
}

DenoiseMode parse_denoise_mode(std::string_view text) {
  if (text == "exact") return DenoiseMode::Exact;
  if (text == "encoded") return DenoiseMode::Encoded;
  throw ConfigError("unknown denoise mode '" + std::string(text) + "' (expected exact or encoded)");
}

std::string_view to_string(DenoiseMode mode) {
  return mode == DenoiseMode::Exact ? "exact" : "encoded";
}

void ExperimentConfig::validate() const {
  try {
    grid.validate();
  } catch (const std::invalid_argument& e) {
    throw ConfigError(std::string("grid: ") + e.what());
  }
  for (const auto& d : devices) find_profile(profiles, d);
  if (reps == 0) throw ConfigError("experiment.reps must be >= 1");
  if (!(eps > 0.0)) throw ConfigError("experiment.eps must be > 0");
  if (!(lambda >= 0.0) || !std::isfinite(lambda))
    throw ConfigError("experiment.lambda must be finite and >= 0");
  if (!(kappa >= 1.0) || !std::isfinite(kappa)) throw ConfigError("experiment.kappa must be >= 1");
  if (matrix.empty()) throw ConfigError("experiment.matrix must not be empty");
}

EcConfig ExperimentConfig::ec_config(std::size_t iterations, bool enabled) const {
  EcConfig cfg;
  cfg.enabled = enabled;
  cfg.verify = {eps, iterations, norm};
  cfg.denoise = {lambda, h};
  cfg.mode = denoise;
  return cfg;
}

ExperimentConfig parse_experiment_config(std::string_view toml_text, std::string_view source,
                                         ExperimentConfig base) {
  const toml::table root = parse_toml(toml_text, source);
  reject_unknown(root, "<root>", {"grid", "device", "experiment"});

  ExperimentConfig cfg = std::move(base);
  if (const toml::table* g = root["grid"].as_table()) {
    reject_unknown(*g, "grid", {"R", "C", "r", "c", "workers"});
    if_present(*g, "R", [&] { cfg.grid.tile_rows = get_count(*g, "grid", "R"); });
    if_present(*g, "C", [&] { cfg.grid.tile_cols = get_count(*g, "grid", "C"); });
    if_present(*g, "r", [&] { cfg.grid.cell_rows = get_count(*g, "grid", "r"); });
    if_present(*g, "c", [&] { cfg.grid.cell_cols = get_count(*g, "grid", "c"); });
    if_present(*g, "workers", [&] { cfg.workers = get_count(*g, "grid", "workers"); });
  }
  merge_profiles(root, cfg.profiles);

  if (const toml::table* e = root["experiment"].as_table()) {
    const std::string_view w = "experiment";
    reject_unknown(*e, w,
                   {"matrix", "devices", "k", "k_max", "reps", "eps", "norm", "ec", "lambda", "h",
                    "denoise", "seed", "vector_seed", "fixed_x", "epiram_ec", "synthetic", "kappa",
                    "normalization", "data_dir"});
    auto str = [&](std::string_view key) {
      auto v = (*e)[key].value<std::string>();
      if (!v) throw ConfigError("'" + key_path(w, key) + "' must be a string");
      return *v;
    };
    auto flag = [&](std::string_view key) {
      auto v = (*e)[key].value<bool>();
      if (!v) throw ConfigError("'" + key_path(w, key) + "' must be a boolean");
      return *v;
    };
    if_present(*e, "matrix", [&] { cfg.matrix = str("matrix"); });
    if_present(*e, "devices", [&] {
      const toml::array* arr = (*e)["devices"].as_array();
      if (arr == nullptr) throw ConfigError("'experiment.devices' must be an array of names");
      cfg.devices.clear();
      for (const auto& n : *arr) {
        auto s = n.value<std::string>();
        if (!s) throw ConfigError("'experiment.devices' must contain only strings");
        cfg.devices.push_back(*s);
      }
    });
    if_present(*e, "k", [&] { cfg.k = get_count(*e, w, "k"); });
    if_present(*e, "k_max", [&] { cfg.k_max = get_count(*e, w, "k_max"); });
    if_present(*e, "reps", [&] { cfg.reps = get_count(*e, w, "reps"); });
    if_present(*e, "eps", [&] { cfg.eps = get_double(*e, w, "eps"); });
    if_present(*e, "norm", [&] {
      try {
        cfg.norm = parse_norm(str("norm"));
      } catch (const std::invalid_argument& ex) {
        throw ConfigError(std::string("experiment.norm: ") + ex.what());
      }
    });
    if_present(*e, "ec", [&] { cfg.ec = flag("ec"); });
    if_present(*e, "lambda", [&] { cfg.lambda = get_double(*e, w, "lambda"); });
    if_present(*e, "h", [&] {
      auto v = (*e)["h"].value_exact<std::int64_t>();
      if (!v) throw ConfigError("'experiment.h' must be an integer");
      cfg.h = static_cast<int>(*v);
    });
    if_present(*e, "denoise", [&] { cfg.denoise = parse_denoise_mode(str("denoise")); });
    if_present(*e, "seed", [&] { cfg.seed = get_count(*e, w, "seed"); });
    if_present(*e, "vector_seed", [&] { cfg.vector_seed = get_count(*e, w, "vector_seed"); });
    if_present(*e, "fixed_x", [&] { cfg.fixed_x = flag("fixed_x"); });
    if_present(*e, "epiram_ec", [&] { cfg.epiram_ec = flag("epiram_ec"); });
    if_present(*e, "synthetic", [&] { cfg.synthetic = flag("synthetic"); });
    if_present(*e, "kappa", [&] { cfg.kappa = get_double(*e, w, "kappa"); });
    if_present(*e, "normalization",
               [&] { cfg.normalization = get_count(*e, w, "normalization"); });
    if_present(*e, "data_dir", [&] { cfg.data_dir = str("data_dir"); });
  }
  cfg.validate();
  return cfg;
}

ExperimentConfig load_experiment_config(const std::filesystem::path& path,
                                        ExperimentConfig base) {
  return parse_experiment_config(read_file(path), path.string(), std::move(base));
}

}  // namespace xbar::io
