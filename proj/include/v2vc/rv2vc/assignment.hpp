// Copyright 2026 The v2vc Authors
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.


#ifndef V2VC_RV2VC_ASSIGNMENT_HPP
#define V2VC_RV2VC_ASSIGNMENT_HPP

#include "v2vc/road_network.hpp"

#include <cstdint>
#include <limits>
#include <optional>
#include <vector>

namespace v2vc {

/// Marks a forbidden cell of an assignment cost matrix. Allowed cells must be
/// well below it.
inline constexpr std::int64_t kForbidden = std::int64_t{1} << 44;

struct AssignmentResult {
    std::vector<std::int32_t> column_of_row;
    std::int64_t cost = 0;
};

/// Minimum-cost perfect assignment of an n x n matrix (rows to columns) by the
/// shortest augmenting path method with potentials, O(n^3). Cells equal to
/// kForbidden may not be used; returns nullopt when no perfect assignment
/// avoids them.
inline std::optional<AssignmentResult> min_cost_assignment(const std::vector<std::vector<std::int64_t>>& cost) {
    const std::size_t n = cost.size();
    for (const auto& row : cost)
        if (row.size() != n)
            throw Error("min_cost_assignment: cost matrix must be square");
    AssignmentResult out;
    out.column_of_row.assign(n, -1);
    if (n == 0)
        return out;
    // 1-based arrays; column 0 is the virtual start of each augmenting path
    const std::int64_t inf = std::numeric_limits<std::int64_t>::max() / 2;
    std::vector<std::int64_t> u(n + 1, 0), v(n + 1, 0), minv(n + 1);
    std::vector<std::size_t> row_of(n + 1, 0), way(n + 1, 0);
    std::vector<char> used(n + 1);
    for (std::size_t i = 1; i <= n; ++i) {
        row_of[0] = i;
        std::size_t j0 = 0;
        std::fill(minv.begin(), minv.end(), inf);
        std::fill(used.begin(), used.end(), 0);
        do {
            used[j0] = 1;
            const std::size_t i0 = row_of[j0];
            std::int64_t delta = inf;
            std::size_t j1 = 0;
            for (std::size_t j = 1; j <= n; ++j) {
                if (used[j])
                    continue;
                const std::int64_t c = cost[i0 - 1][j - 1];
                const std::int64_t reduced = c - u[i0] - v[j];
                if (reduced < minv[j]) {
                    minv[j] = reduced;
                    way[j] = j0;
                }
                if (minv[j] < delta) {
                    delta = minv[j];
                    j1 = j;
                }
            }
            if (j1 == 0)
                return std::nullopt;
            for (std::size_t j = 0; j <= n; ++j) {
                if (used[j]) {
                    u[row_of[j]] += delta;
                    v[j] -= delta;
                } else {
                    minv[j] -= delta;
                }
            }
            j0 = j1;
        } while (row_of[j0] != 0);
        do {
            const std::size_t j1 = way[j0];
            row_of[j0] = row_of[j1];
            j0 = j1;
        } while (j0 != 0);
    }
    for (std::size_t j = 1; j <= n; ++j)
        out.column_of_row[row_of[j] - 1] = static_cast<std::int32_t>(j - 1);
    for (std::size_t i = 0; i < n; ++i) {
        const std::int64_t c = cost[i][static_cast<std::size_t>(out.column_of_row[i])];
        if (c >= kForbidden)
            return std::nullopt;
        out.cost += c;
    }
    return out;
}

} // namespace v2vc

#endif // V2VC_RV2VC_ASSIGNMENT_HPP
