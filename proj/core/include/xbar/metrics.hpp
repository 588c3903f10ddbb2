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
#include <span>
#include <stdexcept>
#include <vector>

#include "xbar/types.hpp"

namespace xbar {

struct RunMetrics {
  double err_l2 = 0.0;
  double err_linf = 0.0;
  double e_w = 0.0;  ///< J, after normalization
  double l_w = 0.0;  ///< s, after normalization
  std::size_t reps = 1;
  std::uint64_t normalization = 1;
};

/// Raised when a relative error is requested against a zero reference.
class UndefinedMetricError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// ||y - b||_p / ||b||_p. Throws UndefinedMetricError when ||b||_p == 0.
double relative_error(std::span<const double> y, std::span<const double> b, Norm p);

/// Both relative errors at once. A zero reference is tolerated only when y is
/// zero as well, in which case both errors are 0.
void fill_errors(RunMetrics& m, std::span<const double> y, std::span<const double> b);

struct TileCost {
  double e_w = 0.0;
  double l_w = 0.0;
};

/// Mean energy and latency across MCAs, divided by `normalization`.
TileCost aggregate_tile_metrics(std::span<const TileCost> per_mca, std::uint64_t normalization);

/// Fieldwise mean; reps is the number of runs and normalization is taken from
/// the first run. Throws std::invalid_argument on an empty list.
RunMetrics replication_summary(std::span<const RunMetrics> runs);

}  // namespace xbar
