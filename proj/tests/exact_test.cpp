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


#include "support.hpp"

#include "v2vc/exact/branch_and_bound.hpp"
#include "v2vc/exact/brute_force.hpp"
#include "v2vc/generator.hpp"
#include "v2vc/verifier.hpp"

#include <gtest/gtest.h>

namespace v2vc {
namespace {

void expect_verified(const Scenario& s, const SolveOutcome& out, ObjectiveKind kind = ObjectiveKind::energy) {
    ASSERT_TRUE(out.plan.has_value());
    const IpInstance ip = build_ip(s, kind);
    const auto x = encode(ip, *out.plan);
    EXPECT_TRUE(verify_algebraic(ip, x).accepted()) << verify_algebraic(ip, x).summary();
    EXPECT_TRUE(verify_semantic(s, x).accepted()) << verify_semantic(s, x).summary();
    EXPECT_EQ(plan_objective(s, *ip.network, *out.plan, kind), out.objective);
}

TEST(BruteForce, SingleEvWithEnoughChargeTakesCheapestPath) {
    const Scenario s = testing::line_scenario(2, 5, 4);
    const auto out = brute_force(s);
    ASSERT_EQ(out.status, SolveStatus::optimal);
    EXPECT_EQ(out.objective, 2);
}

TEST(BruteForce, SingleEvShortOfChargeIsInfeasible) {
    const Scenario s = testing::line_scenario(4, 3, 4);
    EXPECT_EQ(brute_force(s).status, SolveStatus::infeasible);
}

TEST(BruteForce, ReportsCapExceeded) {
    BruteForceCaps caps;
    caps.paths_per_ev = 1;
    const Scenario s = reconstructed_q1();
    EXPECT_EQ(brute_force(s, caps).status, SolveStatus::cap_exceeded);
}

TEST(BranchAndBound, SingleEvMatchesTrivialCases) {
    auto out = solve_bb(testing::line_scenario(2, 5, 4));
    ASSERT_EQ(out.status, SolveStatus::optimal);
    EXPECT_EQ(out.objective, 2);
    EXPECT_EQ(solve_bb(testing::line_scenario(4, 3, 4)).status, SolveStatus::infeasible);
}

TEST(BranchAndBound, UnreachableDestinationIsInfeasibleAtRoot) {
    Scenario s;
    s.horizon = 4;
    const NodeId a = s.road.add_node(NodeKind::plain, "A");
    const NodeId b = s.road.add_node(NodeKind::plain, "B");
    s.road.add_arc(a, b, 1, 1, true);
    s.evs.push_back({"ev", b, a, 5, 5, 1});
    const auto out = solve_bb(s);
    EXPECT_EQ(out.status, SolveStatus::infeasible);
    EXPECT_EQ(out.stats.nodes, 0);
}

TEST(BranchAndBound, QOneIsOptimalAndMatchesBruteForce) {
    const Scenario s = reconstructed_q1();
    const auto bb = solve_bb(s);
    const auto bf = brute_force(s);
    ASSERT_EQ(bb.status, SolveStatus::optimal);
    ASSERT_EQ(bf.status, SolveStatus::optimal);
    EXPECT_EQ(bb.objective, bf.objective);
    EXPECT_EQ(bb.objective, 2);
    expect_verified(s, bb);
}

TEST(BranchAndBound, IpOverloadUsesTheObjectiveTag) {
    const Scenario s = reconstructed_q1();
    const auto out = solve_bb(build_ip(s, ObjectiveKind::feasibility));
    ASSERT_EQ(out.status, SolveStatus::optimal);
    EXPECT_EQ(out.objective, 0);
    expect_verified(s, out, ObjectiveKind::feasibility);
}

TEST(BranchAndBound, AgreesWithBruteForceOnRandomScenarios) {
    int compared = 0;
    int feasible = 0;
    for (std::uint64_t seed = 1; seed <= 400; ++seed) {
        const Scenario s = testing::random_scenario(seed, 5, 3, 8);
        if (!validate(s).empty())
            continue;
        for (auto kind : {ObjectiveKind::energy, ObjectiveKind::feasibility}) {
            const auto bf = brute_force(s, {}, kind);
            if (bf.status == SolveStatus::cap_exceeded)
                continue;
            BranchAndBoundOptions opt;
            opt.objective = kind;
            const auto bb = solve_bb(s, opt);
            ASSERT_EQ(bb.status, bf.status) << "seed " << seed << " " << to_string(kind);
            if (bb.status == SolveStatus::optimal) {
                EXPECT_EQ(bb.objective, bf.objective) << "seed " << seed;
                expect_verified(s, bb, kind);
                ++feasible;
            }
            ++compared;
        }
    }
    EXPECT_GE(compared, 100);
    EXPECT_GE(feasible, 30);
}

TEST(BranchAndBound, SharedChargeScenariosAgreeWithBruteForce) {
    // needy EVs force charge events, which the plain random sample rarely needs
    int compared = 0;
    for (std::uint64_t seed = 1; seed <= 60; ++seed) {
        GeneratorConfig c;
        c.helpers = 1 + static_cast<int>(seed % 2);
        c.needy = 1;
        c.nodes = 3 + static_cast<int>(seed % 2);
        c.horizon = 5 + static_cast<TimeStep>(seed % 3);
        c.meeting_fraction = 0.5;
        c.topology = Topology::ring;
        c.arc_energy = {1, 2};
        c.arc_duration = {1, 1};
        c.helper_surplus = {1, 3};
        c.needy_deficit = {1, 2};
        c.seed = seed;
        Scenario s;
        try {
            s = generate(c);
        } catch (const Error&) {
            continue;
        }
        const auto bf = brute_force(s);
        if (bf.status == SolveStatus::cap_exceeded)
            continue;
        const auto bb = solve_bb(s);
        ASSERT_EQ(bb.status, bf.status) << "seed " << seed;
        if (bb.status == SolveStatus::optimal) {
            EXPECT_EQ(bb.objective, bf.objective) << "seed " << seed;
            expect_verified(s, bb);
        }
        ++compared;
    }
    EXPECT_GE(compared, 20);
}

TEST(BranchAndBound, IncumbentsNeverIncrease) {
    for (std::uint64_t seed = 1; seed <= 100; ++seed) {
        const Scenario s = testing::random_scenario(seed, 5, 3, 8);
        if (!validate(s).empty())
            continue;
        const auto out = solve_bb(s);
        for (std::size_t k = 1; k < out.incumbents.size(); ++k)
            EXPECT_LT(out.incumbents[k], out.incumbents[k - 1]);
        if (out.plan) {
            EXPECT_EQ(out.incumbents.back(), out.objective);
        }
    }
}

TEST(BranchAndBound, BudgetExhaustionIsNeverOptimal) {
    const Scenario s = reconstructed_q1();
    const auto full = solve_bb(s);
    ASSERT_EQ(full.status, SolveStatus::optimal);
    ASSERT_GT(full.stats.nodes, 2);
    for (std::int64_t budget : {std::int64_t{1}, full.stats.nodes / 2, full.stats.nodes - 1}) {
        BranchAndBoundOptions opt;
        opt.budget_nodes = budget;
        const auto out = solve_bb(s, opt);
        EXPECT_EQ(out.status, SolveStatus::budget_exceeded) << budget;
        if (out.plan)
            expect_verified(s, out);
    }
    BranchAndBoundOptions opt;
    opt.budget_nodes = full.stats.nodes;
    EXPECT_EQ(solve_bb(s, opt).status, SolveStatus::optimal);
}

TEST(BranchAndBound, DeterministicForFixedBudget) {
    const Scenario s = testing::random_scenario(17, 5, 3, 8);
    const auto a = solve_bb(s);
    const auto b = solve_bb(s);
    EXPECT_EQ(a.status, b.status);
    EXPECT_EQ(a.plan, b.plan);
    EXPECT_EQ(a.stats.nodes, b.stats.nodes);
}

TEST(BranchAndBound, RejectsOversizedNetworks) {
    Scenario s = reconstructed_q1();
    BranchAndBoundOptions opt;
    opt.max_time_space_nodes = 5;
    EXPECT_THROW(solve_bb(s, opt), Error);
}

} // namespace
} // namespace v2vc
