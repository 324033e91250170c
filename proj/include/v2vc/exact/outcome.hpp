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


#ifndef V2VC_EXACT_OUTCOME_HPP
#define V2VC_EXACT_OUTCOME_HPP

#include "v2vc/ip_model.hpp"
#include "v2vc/plan.hpp"

#include <cstdint>
#include <optional>
#include <string_view>
#include <vector>

namespace v2vc {

enum class SolveStatus { optimal, infeasible, budget_exceeded, cap_exceeded };

inline std::string_view to_string(SolveStatus s) {
    switch (s) {
    case SolveStatus::optimal:
        return "optimal";
    case SolveStatus::infeasible:
        return "infeasible";
    case SolveStatus::budget_exceeded:
        return "budget_exceeded";
    default:
        return "cap_exceeded";
    }
}

struct SolveStats {
    std::int64_t nodes = 0;
    std::int64_t memo_hits = 0;
    double wall_ms = 0;
};

/// Result of an exact method. `plan` holds the optimum when status is optimal
/// and the best incumbent (if any) when a budget or cap stopped the search.
struct SolveOutcome {
    SolveStatus status = SolveStatus::infeasible;
    std::optional<Plan> plan;
    Energy objective = 0;
    SolveStats stats;
    std::vector<Energy> incumbents; // objective of every improving solution, in order

    bool exact() const { return status == SolveStatus::optimal || status == SolveStatus::infeasible; }
};

/// Objective value of a plan without materialising the model.
inline Energy plan_objective(const Scenario& s, const TimeSpaceNetwork& ts, const Plan& plan, ObjectiveKind kind) {
    return kind == ObjectiveKind::energy ? plan_energy(s, ts, plan) : 0;
}

} // namespace v2vc

#endif // V2VC_EXACT_OUTCOME_HPP
