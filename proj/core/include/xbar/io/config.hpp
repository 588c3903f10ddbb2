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
#include <filesystem>
#include <map>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "xbar/correction.hpp"
#include "xbar/device.hpp"
#include "xbar/tiling.hpp"

namespace xbar::io {

/// Any problem with a configuration file or value. The message names the
/// offending key.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

using ProfileSet = std::map<std::string, DeviceProfile, std::less<>>;

/// Reads every [device.<name>] table. Keys must match DeviceProfile field
/// names exactly; each profile is validated. Other top-level tables are
/// ignored.
ProfileSet parse_profiles(std::string_view toml_text, std::string_view source = "<string>");
ProfileSet load_profiles_file(const std::filesystem::path& path);

/// The shipped calibrations, compiled in from data/profiles.toml.
const ProfileSet& builtin_profiles();

/// Throws ConfigError listing available names when `name` is missing.
const DeviceProfile& find_profile(const ProfileSet& set, std::string_view name);

struct ExperimentConfig {
  GridShape grid{1, 1, 66, 66};
  std::size_t workers = 0;
  ProfileSet profiles = builtin_profiles();

  std::string matrix = "bcsstk02";  ///< registry name, "iperturb", or a .mtx path
  std::vector<std::string> devices;
  std::size_t k = 20;
  std::size_t k_max = 20;
  std::size_t reps = 100;
  double eps = 1e-6;
  Norm norm = Norm::L2;
  bool ec = true;
  double lambda = 1e-12;
  int h = -1;
  DenoiseMode denoise = DenoiseMode::Exact;
  std::uint64_t seed = 2025;
  std::uint64_t vector_seed = 0;  ///< seed for x in single runs; 0 derives from seed
  bool fixed_x = false;
  bool epiram_ec = false;
  bool synthetic = false;  ///< allow surrogates for missing registry files
  double kappa = 1.2342;   ///< Iperturb target
  std::uint64_t normalization = 0;  ///< 0 means automatic
  std::filesystem::path data_dir = "data/matrices";

  /// Throws ConfigError for inconsistent values or unknown device names.
  void validate() const;

  EcConfig ec_config(std::size_t iterations, bool enabled) const;
};

/// Overlays [grid], [device.<name>] and [experiment] onto `base`. Unknown keys
/// are rejected.
ExperimentConfig parse_experiment_config(std::string_view toml_text,
                                         std::string_view source = "<string>",
                                         ExperimentConfig base = {});
ExperimentConfig load_experiment_config(const std::filesystem::path& path,
                                        ExperimentConfig base = {});

DenoiseMode parse_denoise_mode(std::string_view text);
std::string_view to_string(DenoiseMode mode);

}  // namespace xbar::io
