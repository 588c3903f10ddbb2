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

#include "xbar/metrics.hpp"

#include <algorithm>
#include <string>

namespace xbar {

double relative_error(std::span<const double> y, std::span<const double> b, Norm p) {
  if (y.size() != b.size()) throw std::invalid_argument("relative_error: length mismatch");
  const double ref = norm(b, p);
  if (ref == 0.0) {
    throw UndefinedMetricError("relative error undefined: reference has zero " +
                               std::string(to_string(p)) + "-norm");
  }
  return distance(y, b, p) / ref;
}

void fill_errors(RunMetrics& m, std::span<const double> y, std::span<const double> b) {
  if (norm(b, Norm::Inf) == 0.0) {
    if (norm(y, Norm::Inf) != 0.0) {
      throw UndefinedMetricError("relative error undefined: zero reference, nonzero result");
    }
    m.err_l2 = 0.0;
    m.err_linf = 0.0;
    return;
  }
  m.err_l2 = relative_error(y, b, Norm::L2);
  m.err_linf = relative_error(y, b, Norm::Inf);
}

TileCost aggregate_tile_metrics(std::span<const TileCost> per_mca, std::uint64_t normalization) {
  if (per_mca.empty()) throw std::invalid_argument("aggregate_tile_metrics: no MCAs");
  if (normalization == 0) throw std::invalid_argument("aggregate_tile_metrics: normalization 0");
  TileCost sum;
  for (const auto& c : per_mca) {
    sum.e_w += c.e_w;
    sum.l_w += c.l_w;
  }
  const double d = static_cast<double>(per_mca.size()) * static_cast<double>(normalization);
  return {sum.e_w / d, sum.l_w / d};
}

RunMetrics replication_summary(std::span<const RunMetrics> runs) {
  if (runs.empty()) throw std::invalid_argument("replication_summary: no runs");
  // Summing in sorted order makes the mean independent of run order.
  auto mean_of = [&](double RunMetrics::*field) {
    std::vector<double> v;
    v.reserve(runs.size());
    for (const auto& r : runs) v.push_back(r.*field);
    std::sort(v.begin(), v.end());
    double s = 0.0;
    for (double x : v) s += x;
    return s / static_cast<double>(v.size());
  };
  RunMetrics out;
  out.err_l2 = mean_of(&RunMetrics::err_l2);
  out.err_linf = mean_of(&RunMetrics::err_linf);
  out.e_w = mean_of(&RunMetrics::e_w);
  out.l_w = mean_of(&RunMetrics::l_w);
  out.reps = runs.size();
  out.normalization = runs.front().normalization;
  return out;
}

}  // namespace xbar
