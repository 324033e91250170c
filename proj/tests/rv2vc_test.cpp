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
#include "v2vc/rv2vc/lowering.hpp"

#include <gtest/gtest.h>

#include <algorithm>
#include <numeric>

namespace v2vc {
namespace {

// Integer determinant by fraction-free elimination.
std::int64_t bareiss(std::vector<std::vector<std::int64_t>> m) {
    const std::size_t n = m.size();
    std::int64_t sign = 1;
    std::int64_t prev = 1;
    for (std::size_t k = 0; k + 1 < n; ++k) {
        if (m[k][k] == 0) {
            std::size_t r = k + 1;
            while (r < n && m[r][k] == 0)
                ++r;
            if (r == n)
                return 0;
            std::swap(m[k], m[r]);
            sign = -sign;
        }
        for (std::size_t i = k + 1; i < n; ++i)
            for (std::size_t j = k + 1; j < n; ++j)
                m[i][j] = (m[i][j] * m[k][k] - m[i][k] * m[k][j]) / prev;
        prev = m[k][k];
    }
    return sign * m[n - 1][n - 1];
}

// Every maximal run of consecutive transfers between the same two EVs at the
// same node counts as one action; returns the largest count over all EVs.
int most_actions(const Plan& p, std::size_t evs) {
    std::vector<std::vector<Transfer>> per(evs);
    for (const auto& t : p.transfers) {
        per[static_cast<std::size_t>(t.receiver)].push_back(t);
        per[static_cast<std::size_t>(t.giver)].push_back(t);
    }
    int worst = 0;
    for (auto& list : per) {
        std::sort(list.begin(), list.end(), [](const Transfer& a, const Transfer& b) { return a.t < b.t; });
        int actions = 0;
        for (std::size_t k = 0; k < list.size(); ++k)
            if (k == 0 || list[k].t != list[k - 1].t + 1 || list[k].receiver != list[k - 1].receiver ||
                list[k].giver != list[k - 1].giver || list[k].node != list[k - 1].node)
                ++actions;
        worst = std::max(worst, actions);
    }
    return worst;
}

// Helper A -> M (1 unit), needy M -> B (1 unit) with nothing in its battery.
Scenario handover(Energy helper_soc, Energy needy_max, TimeStep horizon) {
    Scenario s;
    s.horizon = horizon;
    const NodeId a = s.road.add_node(NodeKind::plain, "A");
    const NodeId m = s.road.add_node(NodeKind::meeting, "M");
    const NodeId b = s.road.add_node(NodeKind::plain, "B");
    s.road.add_arc(a, m, 1, 1);
    s.road.add_arc(m, b, 1, 1);
    s.evs.push_back({"h", a, m, helper_soc, helper_soc, 1});
    s.evs.push_back({"n", m, b, 0, needy_max, 1});
    return s;
}

TEST(Assignment, MatchesPermutationEnumeration) {
    detail::Draw draw(7);
    for (int round = 0; round < 300; ++round) {
        const auto n = static_cast<std::size_t>(draw.uniform(1, 6));
        std::vector<std::vector<std::int64_t>> cost(n, std::vector<std::int64_t>(n));
        for (auto& row : cost)
            for (auto& c : row)
                c = draw.unit() < 0.25 ? kForbidden : draw.uniform(0, 20);
        std::vector<std::size_t> perm(n);
        std::iota(perm.begin(), perm.end(), 0);
        std::optional<std::int64_t> best;
        do {
            std::int64_t total = 0;
            bool ok = true;
            for (std::size_t r = 0; r < n; ++r) {
                ok = ok && cost[r][perm[r]] < kForbidden;
                total += ok ? cost[r][perm[r]] : 0;
            }
            if (ok && (!best || total < *best))
                best = total;
        } while (std::next_permutation(perm.begin(), perm.end()));
        const auto got = min_cost_assignment(cost);
        ASSERT_EQ(got.has_value(), best.has_value()) << "round " << round;
        if (got) {
            EXPECT_EQ(got->cost, *best);
            std::int64_t sum = 0;
            std::vector<int> used(n, 0);
            for (std::size_t r = 0; r < n; ++r) {
                sum += cost[r][static_cast<std::size_t>(got->column_of_row[r])];
                ++used[static_cast<std::size_t>(got->column_of_row[r])];
            }
            EXPECT_EQ(sum, got->cost);
            EXPECT_TRUE(std::all_of(used.begin(), used.end(), [](int u) { return u == 1; }));
        }
    }
}

TEST(ActionGraph, QOneHasTwoEdges) {
    const Scenario s = reconstructed_q1();
    const auto g = build_action_graph(s);
    ASSERT_EQ(g.edges.size(), 2u);
    EXPECT_EQ(g.edges[0].kind, ActionKind::direct);
    EXPECT_EQ(g.edges[1].kind, ActionKind::pair);
    EXPECT_EQ(g.edges[1].i, 0);
    EXPECT_EQ(g.edges[1].j, 1);
    const auto sel = solve_selection(g);
    ASSERT_TRUE(sel.has_value());
    EXPECT_EQ(sel->objective(), solve_bb(s).objective);
}

TEST(ActionGraph, AllReachableGivesOnlyDirectEdges) {
    Scenario s = reconstructed_q1();
    s.evs[1].soc = 4;
    const auto g = build_action_graph(s);
    EXPECT_EQ(g.edges.size(), s.evs.size());
    for (const auto& e : g.edges)
        EXPECT_EQ(e.kind, ActionKind::direct);
    const auto sel = solve_selection(g);
    ASSERT_TRUE(sel.has_value());
    EXPECT_EQ(sel->cost, g.edges[0].cost + g.edges[1].cost);
    const auto r = solve_rv2vc(s);
    ASSERT_TRUE(r.feasible);
    EXPECT_TRUE(r.plan->transfers.empty());
    EXPECT_TRUE(r.plan->grid.empty());
}

TEST(ActionGraph, UnservableNeedyHasDegreeZero) {
    Scenario s = reconstructed_q1();
    s.evs[0].soc = 1; // the helper has nothing to spare
    s.evs[0].max_soc = 1;
    const auto g = build_action_graph(s);
    EXPECT_EQ(g.degree(1), 0u);
    EXPECT_FALSE(solve_selection(g).has_value());
    EXPECT_FALSE(solve_rv2vc(s).feasible);
}

TEST(PairEdge, OneMissingUnitIsCoveredInOneStep) {
    const Scenario s = handover(2, 5, 4);
    const auto e = pair_edge(s, 0, 1, 1);
    ASSERT_TRUE(e.has_value());
    EXPECT_EQ(e->k, 1);
    EXPECT_EQ(e->t0, 1);
    EXPECT_EQ(e->cost, 2);
    const auto exact = brute_force(s);
    ASSERT_EQ(exact.status, SolveStatus::optimal);
    EXPECT_EQ(exact.objective, e->cost);
}

TEST(PairEdge, ShortHorizonIsInfeasible) {
    EXPECT_FALSE(pair_edge(handover(2, 5, 3), 0, 1, 1).has_value());
}

TEST(PairEdge, ReceiverCapBlocksTheTransfer) {
    Scenario s = handover(3, 5, 5);
    s.evs[0].rate = 2; // one step of 2 units
    s.evs[1].max_soc = 1;
    EXPECT_FALSE(pair_edge(s, 0, 1, 1).has_value());
    s.evs[1].max_soc = 2;
    EXPECT_TRUE(pair_edge(s, 0, 1, 1).has_value());
}

TEST(PairEdge, RejectsNonMeetingNode) {
    EXPECT_THROW(pair_edge(handover(2, 5, 4), 0, 1, 0), Error);
}

TEST(Selection, PicksTheCheaperCombination) {
    ActionGraph g;
    g.ev_count = 3;
    g.helper = {1, 1, 0};
    g.edges = {
        {ActionKind::direct, 0, -1, -1, -1, 0, 3, 0},
        {ActionKind::direct, 1, -1, -1, -1, 0, 4, 0},
        {ActionKind::pair, 0, 2, 5, 0, 1, 10, 0},
        {ActionKind::pair, 1, 2, 5, 0, 1, 7, 0},
    };
    const auto sel = solve_selection(g);
    ASSERT_TRUE(sel.has_value());
    EXPECT_EQ(sel->cost, 10);
    EXPECT_EQ(sel->edge_of[2], 3);
    EXPECT_EQ(sel->edge_of[1], 3);
    EXPECT_EQ(sel->edge_of[0], 0);
}

TEST(Selection, ConvexWeightChangesThePreference) {
    ActionGraph g;
    g.ev_count = 3;
    g.helper = {1, 1, 0};
    g.edges = {
        {ActionKind::direct, 0, -1, -1, -1, 0, 3, 0},
        {ActionKind::direct, 1, -1, -1, -1, 0, 1, 0},
        {ActionKind::pair, 0, 2, 5, 0, 1, 6, 0},
        {ActionKind::pair, 1, 2, 5, 0, 1, 8, 0},
    };
    EXPECT_EQ(solve_selection(g)->edge_of[2], 2); // 6 + 1 < 8 + 3
    // beyond 5 units every unit costs 10
    const auto w = convex_weight({{5}, {1, 10}});
    const auto sel = solve_selection(g, w);
    ASSERT_TRUE(sel.has_value());
    EXPECT_EQ(sel->weight, std::min(w(g.edges[2]) + w(g.edges[1]), w(g.edges[3]) + w(g.edges[0])));
    EXPECT_EQ(PiecewiseLinear({{5}, {1, 10}})(7), 25);
    EXPECT_THROW(convex_weight({{5}, {10, 1}}), Error);
    EXPECT_THROW(convex_weight({{5}, {1}}), Error);
}

TEST(Selection, MoreNeedyThanHelpersIsInfeasible) {
    ActionGraph g;
    g.ev_count = 3;
    g.helper = {1, 0, 0};
    g.edges = {{ActionKind::direct, 0, -1, -1, -1, 0, 1, 0},
               {ActionKind::pair, 0, 1, 5, 0, 1, 2, 0},
               {ActionKind::pair, 0, 2, 5, 0, 1, 2, 0}};
    EXPECT_FALSE(solve_selection(g).has_value());
}

TEST(Lowering, PairWithTwoStepsYieldsConsecutiveTransfers) {
    Scenario s = handover(3, 5, 6);
    s.road.add_arc(2, 0, 1, 1); // B -> A so the needy route has two units to cover
    s.evs[1].destination = 0;
    const auto r = solve_rv2vc(s);
    ASSERT_TRUE(r.feasible);
    ASSERT_EQ(r.plan->transfers.size(), 2u);
    const auto& a = r.plan->transfers[0];
    const auto& b = r.plan->transfers[1];
    EXPECT_EQ(a.node, b.node);
    EXPECT_EQ(a.t + 1, b.t);
    const IpInstance ip = build_ip(s);
    const auto x = lower_to_solution(ip, r.graph, *r.selection);
    EXPECT_EQ(eval_objective(ip, x), r.objective);
}

TEST(Lowering, CsvListsEveryEdge) {
    const Scenario s = reconstructed_q1();
    const auto g = build_action_graph(s);
    const auto csv = action_csv(s, g);
    EXPECT_EQ(csv.substr(0, csv.find('\n')), "kind,i,j,node,t0,k,cost");
    EXPECT_EQ(std::count(csv.begin(), csv.end(), '\n'), 3);
    EXPECT_NE(csv.find("direct,h0,,,,,"), std::string::npos);
    EXPECT_NE(csv.find("pair,h0,n0,A,"), std::string::npos);
}

TEST(Lowering, GridEdgesAreOptIn) {
    Scenario s;
    s.horizon = 5;
    const NodeId p = s.road.add_node(NodeKind::parking, "P");
    const NodeId b = s.road.add_node(NodeKind::plain, "B");
    s.road.add_arc(p, b, 2, 1);
    s.grid_rate[p] = 1;
    s.evs.push_back({"n", p, b, 0, 4, 1});
    EXPECT_FALSE(solve_rv2vc(s).feasible);
    const auto r = solve_rv2vc(s, {true});
    ASSERT_TRUE(r.feasible);
    EXPECT_EQ(r.plan->grid.size(), 2u);
    EXPECT_EQ(r.objective, 4);
    const auto exact = brute_force(s);
    EXPECT_EQ(exact.objective, r.objective);
    const IpInstance ip = build_ip(s);
    const auto x = lower_to_solution(ip, r.graph, *r.selection);
    EXPECT_EQ(eval_objective(ip, x), 4);
}

TEST(Rv2vcProperties, SoundAndOptimalWhenOneActionSuffices) {
    int compared = 0;
    int single = 0;
    for (std::uint64_t seed = 1; seed <= 300; ++seed) {
        const Scenario s = testing::random_scenario(seed, 5, 3, 7);
        if (!validate(s).empty())
            continue;
        const auto r = solve_rv2vc(s);
        const auto exact = brute_force(s);
        if (exact.status == SolveStatus::cap_exceeded)
            continue;
        if (r.feasible) {
            ASSERT_EQ(exact.status, SolveStatus::optimal) << "seed " << seed;
            EXPECT_GE(r.objective, exact.objective) << "seed " << seed;
            EXPECT_LE(most_actions(*r.plan, s.evs.size()), 1);
            const IpInstance ip = build_ip(s);
            EXPECT_NO_THROW(lower_to_solution(ip, r.graph, *r.selection)) << "seed " << seed;
        }
        if (exact.status == SolveStatus::optimal && exact.plan->grid.empty() &&
            most_actions(*exact.plan, s.evs.size()) <= 1) {
            ASSERT_TRUE(r.feasible) << "seed " << seed;
            EXPECT_EQ(r.objective, exact.objective) << "seed " << seed;
            ++single;
        }
        ++compared;
    }
    EXPECT_GE(compared, 100);
    EXPECT_GE(single, 50);
}

TEST(Rv2vcProperties, InfeasibleMeansNoCoverExists) {
    int checked = 0;
    for (std::uint64_t seed = 1; seed <= 300; ++seed) {
        const Scenario s = testing::random_scenario(seed, 5, 4, 7);
        if (!validate(s).empty())
            continue;
        const auto g = build_action_graph(s);
        if (g.edges.size() > 16)
            continue;
        bool cover = false;
        for (std::uint32_t mask = 0; mask < (1u << g.edges.size()) && !cover; ++mask) {
            std::vector<int> hits(g.ev_count, 0);
            for (std::size_t e = 0; e < g.edges.size(); ++e)
                if (mask >> e & 1u) {
                    ++hits[static_cast<std::size_t>(g.edges[e].i)];
                    if (g.edges[e].kind == ActionKind::pair)
                        ++hits[static_cast<std::size_t>(g.edges[e].j)];
                }
            cover = std::all_of(hits.begin(), hits.end(), [](int h) { return h == 1; });
        }
        EXPECT_EQ(solve_selection(g).has_value(), cover) << "seed " << seed;
        ++checked;
    }
    EXPECT_GE(checked, 100);
}

TEST(Rv2vcProperties, IncidenceSubmatricesAreUnimodular) {
    detail::Draw draw(11);
    int checked = 0;
    for (std::uint64_t seed = 1; seed <= 40; ++seed) {
        auto c = *find_preset(seed % 2 ? "Q5" : "Q6");
        c.seed = seed;
        const auto g = build_action_graph(generate(c));
        const auto a = incidence_matrix(g);
        if (a.empty() || a[0].empty())
            continue;
        for (int round = 0; round < 50; ++round) {
            const auto limit = std::min<std::int64_t>({6, static_cast<std::int64_t>(a.size()),
                                                       static_cast<std::int64_t>(a[0].size())});
            const auto k = static_cast<std::size_t>(draw.uniform(1, limit));
            std::vector<std::size_t> rows(a.size()), cols(a[0].size());
            std::iota(rows.begin(), rows.end(), 0);
            std::iota(cols.begin(), cols.end(), 0);
            draw.shuffle(rows);
            draw.shuffle(cols);
            std::vector<std::vector<std::int64_t>> sub(k, std::vector<std::int64_t>(k));
            for (std::size_t r = 0; r < k; ++r)
                for (std::size_t q = 0; q < k; ++q)
                    sub[r][q] = a[rows[r]][cols[q]];
            const auto det = bareiss(sub);
            EXPECT_TRUE(det >= -1 && det <= 1) << det;
            ++checked;
        }
    }
    EXPECT_GE(checked, 1000);
}

TEST(Rv2vcProperties, LoweredPlansPassBothVerifiers) {
    int lowered = 0;
    for (std::uint64_t seed = 1; seed <= 40; ++seed) {
        auto c = *find_preset("Q4");
        c.seed = seed;
        const Scenario s = generate(c);
        const auto r = solve_rv2vc(s);
        if (!r.feasible)
            continue;
        const IpInstance ip = build_ip(s);
        const auto x = lower_to_solution(ip, r.graph, *r.selection);
        EXPECT_TRUE(verify_algebraic(ip, x).accepted());
        EXPECT_TRUE(verify_semantic(s, x).accepted());
        EXPECT_EQ(eval_objective(ip, x), r.objective);
        ++lowered;
    }
    EXPECT_GE(lowered, 30);
}

TEST(Rv2vcProperties, WarmStartKeepsTheOptimum) {
    for (std::uint64_t seed = 1; seed <= 15; ++seed) {
        auto c = *find_preset("Q3");
        c.seed = seed;
        const Scenario s = generate(c);
        const auto r = solve_rv2vc(s);
        if (!r.feasible)
            continue;
        BranchAndBoundOptions warm;
        warm.incumbent = r.plan;
        const auto a = solve_bb(s);
        const auto b = solve_bb(s, warm);
        ASSERT_EQ(a.status, SolveStatus::optimal);
        ASSERT_EQ(b.status, SolveStatus::optimal);
        EXPECT_EQ(a.objective, b.objective) << "seed " << seed;
        EXPECT_LE(b.objective, r.objective);
    }
}

TEST(Rv2vcProperties, RejectsBrokenWarmStart) {
    const Scenario s = reconstructed_q1();
    BranchAndBoundOptions opt;
    opt.incumbent = Plan{{{}, {}}, {}, {}};
    EXPECT_THROW(solve_bb(s, opt), Error);
}

} // namespace
} // namespace v2vc
