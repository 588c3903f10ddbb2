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
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "xbar/io/config.hpp"
#include "xbar/metrics.hpp"

namespace xbar::io {

/// One serialized measurement. A row without a replicate index is a summary
/// (mean over replicates) and is written with replicate "mean".
struct ResultRow {
  std::string device;
  std::string matrix;
  std::size_t m = 0;
  std::size_t n = 0;
  std::string grid;  ///< "RxCxrxc"
  std::size_t k = 0;
  bool ec_enabled = false;
  std::optional<std::size_t> replicate;
  double err_l2 = 0.0;
  double err_linf = 0.0;
  double e_w_joules = 0.0;
  double l_w_seconds = 0.0;
  double e_w_raw_joules = 0.0;
  double l_w_raw_seconds = 0.0;
  std::uint64_t normalization = 1;
  std::uint64_t seed = 0;

  bool operator==(const ResultRow&) const = default;
};

std::string grid_label(const GridShape& g);

std::string_view csv_header();
void write_csv(std::span<const ResultRow> rows, std::ostream& out);
std::string to_csv(std::span<const ResultRow> rows);
/// Inverse of write_csv. Throws std::runtime_error on a header mismatch or a
/// malformed field, naming the line.
std::vector<ResultRow> parse_csv(std::string_view text);

/// {"config": ..., "rows": [...]}; `command` is recorded in the config echo.
std::string to_json(std::span<const ResultRow> rows, const ExperimentConfig& cfg,
                    std::string_view command);
std::vector<ResultRow> parse_json_rows(std::string_view text);

/// Writes through a sibling temporary file and renames it into place, so a
/// failure never leaves a truncated artifact. Throws std::runtime_error if the
/// sink cannot be written.
void write_file_atomic(const std::filesystem::path& path, std::string_view content);

}  // namespace xbar::io
