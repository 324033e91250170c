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

#ifndef V2VC_PLAN_HPP
#define V2VC_PLAN_HPP

#include "v2vc/layout.hpp"
#include "v2vc/time_space.hpp"

#include <algorithm>
#include <vector>

namespace v2vc {

/// `receiver` is charged by `giver` at `node` between t and t+1.
struct Transfer {
    std::int32_t receiver;
    std::int32_t giver;
    NodeId node;
    TimeStep t;

    friend auto operator<=>(const Transfer&, const Transfer&) = default;
};

/// `ev` draws grid energy at parking `node` between t and t+1.
struct GridCharge {
    std::int32_t ev;
    NodeId node;
    TimeStep t;

    friend auto operator<=>(const GridCharge&, const GridCharge&) = default;
};

/// Structured form of a solution: one time-space route per EV plus charge
/// events. This is what solvers produce; it lowers to a column vector through
/// encode() and is recovered by decode().
struct Plan {
    std::vector<std::vector<TsArcId>> routes;
    std::vector<GridCharge> grid;
    std::vector<Transfer> transfers;

    void normalize() {
        std::sort(grid.begin(), grid.end());
        std::sort(transfers.begin(), transfers.end());
    }
    friend bool operator==(const Plan&, const Plan&) = default;
};

/// Full column vector of the integer program (decision variables and slacks).
struct Solution {
    std::vector<Index> values;
    friend bool operator==(const Solution&, const Solution&) = default;
};

/// Charge of `ev` at t = 0..T-1. A travel arc is charged when it ends; a
/// charge event during (t, t+1) is credited at t+1. No bounds are checked.
inline std::vector<Energy> soc_series(const Scenario& s, const TimeSpaceNetwork& ts, const Plan& plan, std::size_t ev) {
    const auto horizon = static_cast<std::size_t>(s.horizon);
    std::vector<Energy> delta(horizon, 0);
    for (TsArcId a : plan.routes.at(ev)) {
        const auto& arc = ts.arc(a);
        if (arc.kind == TsArcKind::travel)
            delta[static_cast<std::size_t>(ts.time(arc.head))] -= arc.energy;
    }
    for (const auto& g : plan.grid)
        if (static_cast<std::size_t>(g.ev) == ev)
            delta[static_cast<std::size_t>(g.t) + 1] += s.grid_rate_at(g.node);
    for (const auto& tr : plan.transfers) {
        if (static_cast<std::size_t>(tr.receiver) == ev)
            delta[static_cast<std::size_t>(tr.t) + 1] += s.evs[static_cast<std::size_t>(tr.giver)].rate;
        if (static_cast<std::size_t>(tr.giver) == ev)
            delta[static_cast<std::size_t>(tr.t) + 1] -= s.evs[ev].rate;
    }
    std::vector<Energy> out(horizon);
    Energy level = s.evs[ev].soc;
    for (std::size_t t = 0; t < horizon; ++t) {
        level += delta[t];
        out[t] = level;
    }
    return out;
}

/// Column vector for a plan. Decision columns come from the plan; every slack
/// takes the single value that satisfies its row, whether or not that value is
/// within bounds. Charge events outside the column space are dropped.
inline Solution encode(const Scenario& s, const TimeSpaceNetwork& ts, const VariableLayout& layout, const Plan& plan) {
    Solution sol{std::vector<Index>(static_cast<std::size_t>(layout.cols()), 0)};
    auto& x = sol.values;
    const auto at = [&](Index col) -> Index& { return x[static_cast<std::size_t>(col)]; };
    const auto n = static_cast<std::int32_t>(s.evs.size());
    const TimeStep last = s.horizon - 1;

    // waiting[ev][(v,t)] == 1 when ev takes the waiting arc out of (v,t)
    std::vector<std::vector<std::uint8_t>> waiting(static_cast<std::size_t>(n),
                                                   std::vector<std::uint8_t>(ts.node_count(), 0));
    for (std::int32_t i = 0; i < n; ++i)
        for (TsArcId a : plan.routes.at(static_cast<std::size_t>(i))) {
            at(layout.x(i, a)) = 1;
            if (ts.arc(a).kind == TsArcKind::waiting)
                waiting[static_cast<std::size_t>(i)][static_cast<std::size_t>(ts.arc(a).tail)] = 1;
        }
    for (const auto& g : plan.grid)
        if (layout.parking_index(g.node) >= 0 && g.t >= 0 && g.t < last)
            at(layout.y(g.ev, g.node, g.t)) = 1;
    for (const auto& tr : plan.transfers)
        if (layout.meeting_index(tr.node) >= 0 && tr.t >= 0 && tr.t < last && tr.receiver != tr.giver)
            at(layout.z(tr.receiver, tr.giver, tr.node, tr.t)) = 1;

    for (std::int32_t i = 0; i < n; ++i) {
        const auto soc = soc_series(s, ts, plan, static_cast<std::size_t>(i));
        for (TimeStep t = 1; t <= last; ++t)
            at(layout.battery(i, t)) = -soc[static_cast<std::size_t>(t)];
    }
    for (std::int32_t i = 0; i < n; ++i)
        for (NodeId p : layout.parking_stations())
            for (TimeStep t = 0; t < last; ++t)
                at(layout.grid_link(i, p, t)) =
                    waiting[static_cast<std::size_t>(i)][static_cast<std::size_t>(ts.id(p, t))] - at(layout.y(i, p, t));
    for (std::int32_t r = 0; r < n; ++r)
        for (std::int32_t g = 0; g < n; ++g) {
            if (r == g)
                continue;
            for (NodeId m : layout.meeting_points())
                for (TimeStep t = 0; t < last; ++t) {
                    const Index zc = at(layout.z(r, g, m, t));
                    const auto node = static_cast<std::size_t>(ts.id(m, t));
                    at(layout.v2v_receiver(r, g, m, t)) = waiting[static_cast<std::size_t>(r)][node] - zc;
                    at(layout.v2v_giver(r, g, m, t)) = waiting[static_cast<std::size_t>(g)][node] - zc;
                    if (r < g)
                        at(layout.one_way(r, g, m, t)) = 1 - zc - at(layout.z(g, r, m, t));
                }
        }
    for (std::int32_t i = 0; i < n; ++i)
        for (TimeStep t = 0; t < last; ++t) {
            Index received = 0;
            Index given = 0;
            for (std::int32_t j = 0; j < n; ++j) {
                if (j == i)
                    continue;
                for (NodeId m : layout.meeting_points()) {
                    received += at(layout.z(i, j, m, t));
                    given += at(layout.z(j, i, m, t));
                }
            }
            at(layout.receive_once(i, t)) = -received;
            at(layout.give_once(i, t)) = -given;
        }
    return sol;
}

/// Plan read back from the nonzero decision columns. Routes keep the arcs in
/// time order but are not checked for contiguity.
inline Plan decode(const TimeSpaceNetwork& ts, const VariableLayout& layout, const Solution& sol) {
    if (static_cast<Index>(sol.values.size()) != layout.cols())
        throw Error("solution length does not match the column count");
    Plan plan;
    plan.routes.resize(static_cast<std::size_t>(layout.ev_count()));
    for (Index col = 0; col < layout.block_end(Block::z); ++col) {
        if (sol.values[static_cast<std::size_t>(col)] == 0)
            continue;
        const auto info = layout.describe(col);
        switch (info.block) {
        case Block::x:
            plan.routes[static_cast<std::size_t>(info.ev)].push_back(info.arc);
            break;
        case Block::y:
            plan.grid.push_back({info.ev, info.node, info.t});
            break;
        default:
            plan.transfers.push_back({info.ev, info.other, info.node, info.t});
            break;
        }
    }
    for (auto& r : plan.routes)
        std::stable_sort(r.begin(), r.end(),
                         [&](TsArcId a, TsArcId b) { return ts.time(ts.arc(a).tail) < ts.time(ts.arc(b).tail); });
    plan.normalize();
    return plan;
}

} // namespace v2vc

#endif // V2VC_PLAN_HPP
