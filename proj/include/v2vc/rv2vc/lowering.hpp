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


#ifndef V2VC_RV2VC_LOWERING_HPP
#define V2VC_RV2VC_LOWERING_HPP

#include "v2vc/ip_model.hpp"
#include "v2vc/rv2vc/action_graph.hpp"
#include "v2vc/verifier.hpp"

#include <chrono>

namespace v2vc {

namespace detail {

inline std::vector<TsArcId> route_via(const TimeSpaceNetwork& ts, const Ev& ev, NodeId node, TimeStep t0, TimeStep k) {
    const auto fwd = min_energy_forward(ts, ev.origin);
    const auto bwd = min_energy_backward(ts, ev.destination);
    auto route = path_to(ts, fwd, ts.id(node, t0));
    for (TimeStep t = t0; t < t0 + k; ++t)
        route.push_back(ts.waiting_arc(node, t));
    const auto tail = path_from(ts, bwd, ts.id(node, t0 + k));
    route.insert(route.end(), tail.begin(), tail.end());
    return route;
}

} // namespace detail

/// Concrete routes and charge events realising a selection. Each action is
/// realised with minimum-energy paths, waiting at the station for the charge.
inline Plan lower_to_plan(const Scenario& s, const TimeSpaceNetwork& ts, const ActionGraph& g,
                          const ActionSelection& sel) {
    Plan plan;
    plan.routes.resize(s.evs.size());
    for (std::size_t i = 0; i < s.evs.size(); ++i)
        if (sel.edge_of.at(i) < 0)
            throw Error("lower_to_plan: EV " + s.evs[i].id + " is not covered by the selection");
    for (std::size_t e : sel.edges) {
        const auto& a = g.edges.at(e);
        const auto i = static_cast<std::size_t>(a.i);
        switch (a.kind) {
        case ActionKind::direct: {
            const auto fwd = min_energy_forward(ts, s.evs[i].origin);
            plan.routes[i] = path_to(ts, fwd, ts.id(s.evs[i].destination, s.horizon - 1));
            break;
        }
        case ActionKind::pair: {
            const auto j = static_cast<std::size_t>(a.j);
            plan.routes[i] = detail::route_via(ts, s.evs[i], a.node, a.t0, a.k);
            plan.routes[j] = detail::route_via(ts, s.evs[j], a.node, a.t0, a.k);
            for (TimeStep t = a.t0; t < a.t0 + a.k; ++t)
                plan.transfers.push_back({a.j, a.i, a.node, t});
            break;
        }
        case ActionKind::g2vc:
            plan.routes[i] = detail::route_via(ts, s.evs[i], a.node, a.t0, a.k);
            for (TimeStep t = a.t0; t < a.t0 + a.k; ++t)
                plan.grid.push_back({a.i, a.node, t});
            break;
        }
    }
    plan.normalize();
    return plan;
}

/// Full column vector for a selection. Throws when the result fails either
/// verifier, which would mean an edge was mispriced.
inline Solution lower_to_solution(const IpInstance& ip, const ActionGraph& g, const ActionSelection& sel) {
    const auto plan = lower_to_plan(*ip.scenario, *ip.network, g, sel);
    auto x = encode(ip, plan);
    const auto algebraic = verify_algebraic(ip, x);
    if (!algebraic.accepted())
        throw Error("lower_to_solution: lowered selection is rejected: " + algebraic.summary());
    const auto semantic = verify_semantic(*ip.scenario, x);
    if (!semantic.accepted())
        throw Error("lower_to_solution: lowered selection is rejected: " + semantic.summary());
    return x;
}

struct Rv2vcOptions {
    bool g2vc = false;
    EdgeWeight weight = energy_weight;
};

struct Rv2vcResult {
    bool feasible = false;
    ActionGraph graph;
    std::optional<ActionSelection> selection;
    std::optional<Plan> plan;
    Energy objective = 0;
    double build_ms = 0;
    double select_ms = 0;
    double lower_ms = 0;

    double total_ms() const { return build_ms + select_ms + lower_ms; }
};

/// Builds the action graph, selects one action per EV and lowers the choice to
/// a plan, re-simulated before it is returned. Works at any scale since the
/// model itself is never materialised.
inline Rv2vcResult solve_rv2vc(const Scenario& s, const TimeSpaceNetwork& ts, const Rv2vcOptions& opt = {}) {
    using clock = std::chrono::steady_clock;
    const auto ms = [](clock::time_point a, clock::time_point b) {
        return std::chrono::duration<double, std::milli>(b - a).count();
    };
    Rv2vcResult out;
    auto t = clock::now();
    out.graph = build_action_graph(s, ts, {opt.g2vc});
    auto now = clock::now();
    out.build_ms = ms(t, now);
    t = now;
    out.selection = solve_selection(out.graph, opt.weight);
    now = clock::now();
    out.select_ms = ms(t, now);
    if (!out.selection)
        return out;
    t = now;
    out.plan = lower_to_plan(s, ts, out.graph, *out.selection);
    const auto findings = check_plan(s, ts, *out.plan);
    if (!findings.empty())
        throw Error("solve_rv2vc: lowered plan is rejected: " + findings.front().message);
    out.lower_ms = ms(t, clock::now());
    out.feasible = true;
    out.objective = out.selection->objective();
    return out;
}

inline Rv2vcResult solve_rv2vc(const Scenario& s, const Rv2vcOptions& opt = {}) {
    return solve_rv2vc(s, TimeSpaceNetwork(s.road, s.horizon), opt);
}

} // namespace v2vc

#endif // V2VC_RV2VC_LOWERING_HPP
