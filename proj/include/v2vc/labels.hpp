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

#ifndef V2VC_LABELS_HPP
#define V2VC_LABELS_HPP

#include "v2vc/time_space.hpp"

#include <limits>
#include <vector>

namespace v2vc {

inline constexpr Energy kUnreachable = std::numeric_limits<Energy>::max();

/// Minimum traversal energy between a fixed anchor state and every (v,t).
///
/// Forward tables measure energy from the anchor to each node, backward tables
/// from each node to the anchor. `via` stores the last arc (forward) or the
/// first arc (backward) of one minimising path, so paths can be rebuilt.
struct LabelTable {
    enum class Direction { forward, backward };

    Direction direction = Direction::forward;
    TsNodeId anchor = 0;
    std::vector<Energy> energy;
    std::vector<TsArcId> via;

    bool reachable(TsNodeId n) const { return energy[static_cast<std::size_t>(n)] != kUnreachable; }
    Energy at(TsNodeId n) const { return energy[static_cast<std::size_t>(n)]; }
};

/// Labels from an arbitrary time-space state.
inline LabelTable min_energy_forward_from(const TimeSpaceNetwork& ts, TsNodeId origin) {
    LabelTable table{LabelTable::Direction::forward, origin,
                     std::vector<Energy>(ts.node_count(), kUnreachable),
                     std::vector<TsArcId>(ts.node_count(), -1)};
    table.energy[static_cast<std::size_t>(origin)] = 0;
    // Arcs are stored in non-decreasing tail time and every arc moves forward
    // in time, so one sweep in storage order is a topological relaxation.
    const auto& arcs = ts.arcs();
    for (std::size_t a = 0; a < arcs.size(); ++a) {
        const auto& arc = arcs[a];
        const Energy from = table.energy[static_cast<std::size_t>(arc.tail)];
        if (from == kUnreachable)
            continue;
        auto& to = table.energy[static_cast<std::size_t>(arc.head)];
        if (from + arc.energy < to) {
            to = from + arc.energy;
            table.via[static_cast<std::size_t>(arc.head)] = static_cast<TsArcId>(a);
        }
    }
    return table;
}

inline LabelTable min_energy_forward(const TimeSpaceNetwork& ts, NodeId origin_node) {
    return min_energy_forward_from(ts, ts.id(origin_node, 0));
}

/// Labels towards an arbitrary time-space state.
inline LabelTable min_energy_backward_to(const TimeSpaceNetwork& ts, TsNodeId sink) {
    LabelTable table{LabelTable::Direction::backward, sink,
                     std::vector<Energy>(ts.node_count(), kUnreachable),
                     std::vector<TsArcId>(ts.node_count(), -1)};
    table.energy[static_cast<std::size_t>(sink)] = 0;
    const auto& arcs = ts.arcs();
    for (std::size_t k = arcs.size(); k-- > 0;) {
        const auto& arc = arcs[k];
        const Energy from = table.energy[static_cast<std::size_t>(arc.head)];
        if (from == kUnreachable)
            continue;
        auto& to = table.energy[static_cast<std::size_t>(arc.tail)];
        if (from + arc.energy < to ||
            (from + arc.energy == to && arc.kind == TsArcKind::waiting)) {
            to = from + arc.energy;
            table.via[static_cast<std::size_t>(arc.tail)] = static_cast<TsArcId>(k);
        }
    }
    return table;
}

inline LabelTable min_energy_backward(const TimeSpaceNetwork& ts, NodeId sink_node) {
    return min_energy_backward_to(ts, ts.id(sink_node, ts.horizon() - 1));
}

/// Arcs of a minimum-energy path from the forward anchor to `target`, in time order.
inline std::vector<TsArcId> path_to(const TimeSpaceNetwork& ts, const LabelTable& forward, TsNodeId target) {
    if (forward.direction != LabelTable::Direction::forward || !forward.reachable(target))
        throw Error("path_to: target is not reachable from the forward anchor");
    std::vector<TsArcId> rev;
    for (TsNodeId n = target; n != forward.anchor;) {
        const TsArcId a = forward.via[static_cast<std::size_t>(n)];
        rev.push_back(a);
        n = ts.arc(a).tail;
    }
    return {rev.rbegin(), rev.rend()};
}

/// Arcs of a minimum-energy path from `source` to the backward anchor, in time order.
inline std::vector<TsArcId> path_from(const TimeSpaceNetwork& ts, const LabelTable& backward, TsNodeId source) {
    if (backward.direction != LabelTable::Direction::backward || !backward.reachable(source))
        throw Error("path_from: anchor is not reachable from the source");
    std::vector<TsArcId> out;
    for (TsNodeId n = source; n != backward.anchor;) {
        const TsArcId a = backward.via[static_cast<std::size_t>(n)];
        out.push_back(a);
        n = ts.arc(a).head;
    }
    return out;
}

/// Cheapest traversal energy from (origin,0) to (destination,T-1), or kUnreachable.
inline Energy min_direct_energy(const TimeSpaceNetwork& ts, NodeId origin, NodeId destination) {
    const auto fwd = min_energy_forward(ts, origin);
    return fwd.at(ts.id(destination, ts.horizon() - 1));
}

/// True iff the vehicle reaches its destination by T-1 on its own charge.
/// Charge only decreases along an uncharged route, so checking the endpoint
/// suffices for every intermediate state.
inline bool can_reach_direct(const TimeSpaceNetwork& ts, NodeId origin, NodeId destination, Energy soc) {
    const Energy need = min_direct_energy(ts, origin, destination);
    return need != kUnreachable && need <= soc;
}

} // namespace v2vc

#endif // V2VC_LABELS_HPP
