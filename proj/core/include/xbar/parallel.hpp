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
#include <functional>

namespace xbar {

/// Worker count: `requested` if nonzero, else the XBAR_WORKERS environment
/// variable, else the hardware concurrency (at least 1). Throws
/// std::invalid_argument for a malformed XBAR_WORKERS value.
std::size_t resolve_workers(std::size_t requested = 0);

/// Runs body(i) for i in [0, n) on up to `workers` threads. Tasks are claimed
/// dynamically, so results must be written to per-index slots. If any task
/// throws, the exception from the lowest failing index is rethrown after all
/// threads have joined.
void parallel_for(std::size_t n, std::size_t workers, const std::function<void(std::size_t)>& body);

}  // namespace xbar
