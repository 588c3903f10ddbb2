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

#include "xbar/io/registry.hpp"

#include <array>
#include <stdexcept>
#include <string>

#include "xbar/io/generators.hpp"
#include "xbar/rng.hpp"

namespace xbar::io {
namespace {

constexpr std::array<RegistryEntry, 7> kRegistry{{
    {"bcsstk02", 66, 1.822575e+04, 4.324971e+03, true},
    {"wang2", 2903, 4.138078, 2.305543e+04, true},
    {"add32", 4960, 5.749318e-02, 1.366769e+02, true},
    {"c-38", 8127, 6.083484e+02, 1.530683e+04, true},
    {"Dubcova1", 16129, 4.796329, 9.971199, true},
    {"helm3d01", 32226, 5.052177e-01, 2.451897e+05, false},
    {"Dubcova2", 65025, 0.0, 0.0, false},
}};

// Above this size a dense surrogate would dominate memory and setup time.
constexpr std::size_t kDenseSurrogateLimit = 512;

std::uint64_t name_hash(std::string_view name) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (char c : name) h = (h ^ static_cast<unsigned char>(c)) * 0x100000001b3ULL;
  return h;
}

}  // namespace

std::span<const RegistryEntry> matrix_registry() { return kRegistry; }

const RegistryEntry& find_registry_entry(std::string_view name) {
  for (const auto& e : kRegistry)
    if (e.name == name) return e;
  std::string known;
  for (const auto& e : kRegistry) known += (known.empty() ? "" : ", ") + std::string(e.name);
  throw std::invalid_argument("unknown registry matrix '" + std::string(name) + "' (known: " +
                              known + ")");
}

std::optional<std::filesystem::path> locate_matrix_file(std::string_view name,
                                                        const std::filesystem::path& data_dir) {
  const std::string file = std::string(name) + ".mtx";
  for (const auto& candidate : {data_dir / file, data_dir / std::string(name) / file})
    if (std::filesystem::is_regular_file(candidate)) return candidate;
  return std::nullopt;
}

MatrixRecord load_registry_matrix(std::string_view name, const std::filesystem::path& data_dir,
                                  bool allow_surrogate, std::uint64_t seed) {
  const RegistryEntry& entry = find_registry_entry(name);
  if (auto path = locate_matrix_file(name, data_dir)) {
    MatrixRecord rec = load_matrix_market(*path);
    rec.name = std::string(name);
    if (rec.rows != entry.dim || rec.cols != entry.dim) {
      throw std::runtime_error(path->string() + " is " + std::to_string(rec.rows) + "x" +
                               std::to_string(rec.cols) + ", expected " +
                               std::to_string(entry.dim) + "x" + std::to_string(entry.dim));
    }
    rec.kappa = entry.kappa;
    return rec;
  }
  if (!allow_surrogate) {
    throw std::runtime_error("matrix '" + std::string(name) + "' not found; expected " +
                             (data_dir / (std::string(name) + ".mtx")).string() + " or " +
                             (data_dir / std::string(name) / (std::string(name) + ".mtx")).string());
  }

  const std::uint64_t s = derive_seed(seed, name_hash(name));
  MatrixRecord rec;
  if (entry.dim <= kDenseSurrogateLimit && entry.norm2 > 0.0) {
    rec = make_spd_surrogate(entry.dim, entry.norm2, entry.kappa, s);
  } else {
    rec = make_sparse_surrogate(entry.dim, entry.norm2 > 0.0 ? entry.norm2 : 1.0, s);
  }
  rec.name = std::string(name);
  return rec;
}

}  // namespace xbar::io
