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
#include <optional>
#include <span>
#include <string>
#include <string_view>

#include "xbar/io/matrix_market.hpp"

namespace xbar::io {

/// Published properties of a SuiteSparse benchmark matrix. A norm or kappa
/// of 0 means the value is not available.
struct RegistryEntry {
  std::string_view name;
  std::size_t dim = 0;
  double norm2 = 0.0;
  double kappa = 0.0;
  bool desk_scale = true;  ///< part of the default strong-scaling subset
};

std::span<const RegistryEntry> matrix_registry();

/// Throws std::invalid_argument listing known names when `name` is unknown.
const RegistryEntry& find_registry_entry(std::string_view name);

/// <data_dir>/<name>.mtx or <data_dir>/<name>/<name>.mtx, if present.
std::optional<std::filesystem::path> locate_matrix_file(std::string_view name,
                                                        const std::filesystem::path& data_dir);

/// Loads a registry matrix from `data_dir`. When the file is missing and
/// `allow_surrogate` is set, returns a generated stand-in with the same
/// dimension (dense SPD with the published norm and kappa for small entries,
/// sparse diagonally dominant otherwise); the record's provenance says which.
/// Throws std::runtime_error naming the expected paths otherwise.
MatrixRecord load_registry_matrix(std::string_view name, const std::filesystem::path& data_dir,
                                  bool allow_surrogate, std::uint64_t seed = 0x5eed);

}  // namespace xbar::io
