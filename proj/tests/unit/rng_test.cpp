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

#include "xbar/rng.hpp"

#include <set>

#include "gtest/gtest.h"

using namespace xbar;

TEST(rng, derive_seed_is_stable_and_order_sensitive) {
    EXPECT_EQ(derive_seed(7, 1, 2), derive_seed(7, 1, 2));
    EXPECT_NE(derive_seed(7, 1, 2), derive_seed(7, 2, 1));
    EXPECT_NE(derive_seed(7, 1), derive_seed(8, 1));
    EXPECT_NE(derive_seed(7), derive_seed(7, 0));
    static_assert(derive_seed(1, 2, 3) == derive_seed(1, 2, 3));
}

TEST(rng, derive_seed_spreads_small_indices) {
    std::set<std::uint64_t> seen;
    for (std::uint64_t b = 0; b < 16; ++b)
        for (std::uint64_t p = 0; p < 16; ++p)
            for (std::uint64_t q = 0; q < 16; ++q) seen.insert(derive_seed(2025, b, p, q));
    EXPECT_EQ(seen.size(), 16u * 16u * 16u);
}

TEST(rng, make_rng_reproducible) {
    Rng a = make_rng(99);
    Rng b = make_rng(99);
    for (int i = 0; i < 10; ++i) EXPECT_EQ(a(), b());
}
