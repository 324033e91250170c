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

#ifndef V2VC_SCENARIO_HPP
#define V2VC_SCENARIO_HPP

#include "v2vc/labels.hpp"
#include "v2vc/road_network.hpp"
#include "v2vc/time_space.hpp"

#include <map>
#include <string>
#include <vector>

namespace v2vc {

struct Ev {
    std::string id;
    NodeId origin = 0;      // s_i
    NodeId destination = 0; // f_i
    Energy soc = 0;         // SOC_i, charge at t = 0
    Energy max_soc = 0;     // MAXSOC_i
    Energy rate = 0;        // e_i, energy handed to another EV per time step

    friend bool operator==(const Ev&, const Ev&) = default;
};

/// Complete problem data. Parking stations are the nodes of kind `parking`;
/// `grid_rate` holds e_p for each of them.
struct Scenario {
    RoadNetwork road;
    std::vector<Ev> evs;
    std::map<NodeId, Energy> grid_rate;
    TimeStep horizon = 0;

    std::vector<NodeId> meeting_points() const { return road.nodes_of_kind(NodeKind::meeting); }
    std::vector<NodeId> parking_stations() const { return road.nodes_of_kind(NodeKind::parking); }
    std::size_t ev_count() const { return evs.size(); }

    Energy grid_rate_at(NodeId p) const {
        const auto it = grid_rate.find(p);
        return it == grid_rate.end() ? 0 : it->second;
    }

    friend bool operator==(const Scenario&, const Scenario&) = default;
};

/// Every broken rule, one message per violation naming the field and rule.
inline std::vector<std::string> validate(const Scenario& s) {
    auto out = s.road.violations();
    if (s.horizon < 1)
        out.push_back("T: horizon must be >= 1");
    bool any_moves = false;
    for (std::size_t k = 0; k < s.evs.size(); ++k) {
        const auto& ev = s.evs[k];
        const std::string where = "evs[" + std::to_string(k) + "] (" + ev.id + ")";
        if (!s.road.contains(ev.origin))
            out.push_back(where + ".s_i: not a road node");
        if (!s.road.contains(ev.destination))
            out.push_back(where + ".f_i: not a road node");
        if (ev.soc < 0)
            out.push_back(where + ".SOC_i: must be >= 0");
        if (ev.soc > ev.max_soc)
            out.push_back(where + ".SOC_i: must not exceed MAXSOC_i");
        if (ev.rate < 0)
            out.push_back(where + ".e_i: must be >= 0");
        if (ev.origin != ev.destination)
            any_moves = true;
        for (std::size_t j = 0; j < k; ++j)
            if (s.evs[j].id == ev.id)
                out.push_back(where + ".id: duplicate EV id");
    }
    if (any_moves && s.horizon < 2)
        out.push_back("T: must be >= 2 when an EV has to move");
    for (const auto& [p, rate] : s.grid_rate) {
        const std::string where = "e_p[" + std::to_string(p) + "]";
        if (!s.road.contains(p)) {
            out.push_back(where + ": not a road node");
            continue;
        }
        if (s.road.kind(p) == NodeKind::meeting)
            out.push_back(where + ": node is a meeting point; parking and meeting sets must be disjoint (P ∩ M = ∅)");
        else if (s.road.kind(p) != NodeKind::parking)
            out.push_back(where + ": node is not a parking station");
        if (rate < 0)
            out.push_back(where + ": rate must be >= 0");
    }
    for (const auto& n : s.road.nodes())
        if (n.kind == NodeKind::parking && !s.grid_rate.contains(n.id))
            out.push_back("e_p: parking node " + std::to_string(n.id) + " has no grid rate");
    return out;
}

inline void require_valid(const Scenario& s) {
    const auto v = validate(s);
    if (!v.empty())
        throw Error("invalid scenario: " + v.front());
}

inline bool can_reach_direct(const Scenario& s, const TimeSpaceNetwork& ts, std::size_t ev) {
    const auto& e = s.evs.at(ev);
    return can_reach_direct(ts, e.origin, e.destination, e.soc);
}

inline bool can_reach_direct(const Scenario& s, std::size_t ev) {
    return can_reach_direct(s, expand_time_space(s.road, s.horizon), ev);
}

} // namespace v2vc

#endif // V2VC_SCENARIO_HPP
