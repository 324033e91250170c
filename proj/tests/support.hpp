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

#ifndef V2VC_TESTS_SUPPORT_HPP
#define V2VC_TESTS_SUPPORT_HPP

#include "v2vc/generator.hpp"
#include "v2vc/plan.hpp"
#include "v2vc/scenario.hpp"
#include "v2vc/time_space.hpp"

#include <cstdint>
#include <functional>
#include <limits>
#include <vector>

namespace v2vc::testing {

inline Scenario line_scenario(Energy energy, Energy soc, TimeStep horizon) {
    Scenario s;
    s.horizon = horizon;
    const NodeId a = s.road.add_node(NodeKind::plain, "A");
    const NodeId b = s.road.add_node(NodeKind::plain, "B");
    s.road.add_arc(a, b, energy, 1, true);
    s.evs.push_back({"ev", a, b, soc, std::max<Energy>(soc, 10), 1});
    return s;
}

/// Small random road: `nodes` nodes with random kinds and arcs, durations 1..2.
inline RoadNetwork random_road(detail::Draw& draw, int nodes, int arcs, bool kinds = true) {
    RoadNetwork road;
    for (int v = 0; v < nodes; ++v) {
        NodeKind k = NodeKind::plain;
        if (kinds) {
            const auto r = draw.uniform(0, 3);
            k = r == 0 ? NodeKind::meeting : r == 1 ? NodeKind::parking : NodeKind::plain;
        }
        road.add_node(k);
    }
    for (int k = 0; k < arcs && nodes > 1; ++k) {
        const auto a = static_cast<NodeId>(draw.uniform(0, nodes - 1));
        auto b = static_cast<NodeId>(draw.uniform(0, nodes - 2));
        if (b >= a)
            ++b;
        road.add_arc(a, b, draw.uniform(0, 4), static_cast<TimeStep>(draw.uniform(1, 2)), draw.uniform(0, 1) == 1);
    }
    return road;
}

/// Minimum path energy from `origin` to every time-space node by exhaustive
/// enumeration of paths.
inline std::vector<Energy> enumerate_min_energy(const TimeSpaceNetwork& ts, TsNodeId origin) {
    constexpr Energy none = std::numeric_limits<Energy>::max();
    std::vector<Energy> best(ts.node_count(), none);
    std::function<void(TsNodeId, Energy)> walk = [&](TsNodeId n, Energy spent) {
        auto& b = best[static_cast<std::size_t>(n)];
        b = std::min(b, spent);
        for (std::size_t a = 0; a < ts.arc_count(); ++a)
            if (ts.arc(static_cast<TsArcId>(a)).tail == n)
                walk(ts.arc(static_cast<TsArcId>(a)).head, spent + ts.arc(static_cast<TsArcId>(a)).energy);
    };
    walk(origin, 0);
    return best;
}

/// Random small scenario for property tests: up to `max_evs` EVs with arbitrary
/// endpoints and charges; validity is guaranteed, feasibility is not.
inline Scenario random_scenario(std::uint64_t seed, int max_nodes = 5, int max_evs = 3, TimeStep max_t = 6) {
    detail::Draw draw(seed);
    Scenario s;
    const int nodes = static_cast<int>(draw.uniform(2, max_nodes));
    s.road = random_road(draw, nodes, static_cast<int>(draw.uniform(1, nodes + 2)));
    for (NodeId p : s.road.nodes_of_kind(NodeKind::parking))
        s.grid_rate[p] = draw.uniform(1, 3);
    s.horizon = static_cast<TimeStep>(draw.uniform(2, max_t));
    const int evs = static_cast<int>(draw.uniform(1, max_evs));
    for (int k = 0; k < evs; ++k) {
        Ev ev;
        ev.id = "e" + std::to_string(k);
        ev.origin = static_cast<NodeId>(draw.uniform(0, nodes - 1));
        ev.destination = static_cast<NodeId>(draw.uniform(0, nodes - 1));
        ev.soc = draw.uniform(0, 6);
        ev.max_soc = ev.soc + draw.uniform(0, 4);
        ev.rate = draw.uniform(1, 3);
        s.evs.push_back(ev);
    }
    return s;
}

/// Route that sits at positions[t] at every step t; consecutive positions must
/// be equal or joined by a one-step road arc.
inline std::vector<TsArcId> route_through(const TimeSpaceNetwork& ts, const std::vector<NodeId>& positions) {
    std::vector<TsArcId> route;
    for (std::size_t t = 0; t + 1 < positions.size(); ++t) {
        const TsNodeId from = ts.id(positions[t], static_cast<TimeStep>(t));
        const TsNodeId to = ts.id(positions[t + 1], static_cast<TimeStep>(t + 1));
        TsArcId found = -1;
        for (TsArcId a : ts.out_arcs(from))
            if (ts.arc(a).head == to)
                found = a;
        if (found < 0)
            throw Error("route_through: no arc between consecutive positions");
        route.push_back(found);
    }
    return route;
}

/// Feasible plan for reconstructed_q1(): the helper drives to A, hands over one
/// unit during (1,2), and the needy EV then drives to B.
inline Plan q1_plan(const TimeSpaceNetwork& ts) {
    Plan p;
    p.routes.push_back(route_through(ts, {1, 0, 0, 0, 0, 0, 0, 0, 0, 0}));
    p.routes.push_back(route_through(ts, {0, 0, 0, 1, 1, 1, 1, 1, 1, 1}));
    p.transfers.push_back({1, 0, 0, 1});
    return p;
}

} // namespace v2vc::testing

#endif // V2VC_TESTS_SUPPORT_HPP
