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

#ifndef V2VC_TIME_SPACE_HPP
#define V2VC_TIME_SPACE_HPP

#include "v2vc/road_network.hpp"

#include <cstdint>
#include <span>
#include <vector>

namespace v2vc {

using TsNodeId = std::int32_t;
using TsArcId = std::int32_t;

enum class TsArcKind : std::uint8_t { waiting, travel };

struct TsArc {
    TsNodeId tail;
    TsNodeId head;
    TsArcKind kind;
    Energy energy;
    std::int32_t road_arc; // index into RoadNetwork::directed_arcs(), -1 for waiting arcs
};

/// Energy charged on the time-space copy of a road arc. The whole-arc energy
/// e_a is used as is; it is not scaled by the duration.
inline Energy traversal_energy(const DirectedArc& arc) { return arc.energy; }

/// Time-expanded copy of a road network. Node (v, t) has id t * |V| + v.
/// Arcs are ordered by tail time; within a time step waiting arcs come first
/// (by node), then travel arcs (by directed road arc).
class TimeSpaceNetwork {
  public:
    TimeSpaceNetwork() = default;

    TimeSpaceNetwork(const RoadNetwork& road, TimeStep horizon) : horizon_(horizon) {
        if (horizon < 1)
            throw Error("time-space expansion needs a horizon T >= 1");
        road_nodes_ = static_cast<std::int32_t>(road.node_count());
        const auto directed = road.directed_arcs();
        const auto node_total = static_cast<std::size_t>(road_nodes_) * static_cast<std::size_t>(horizon);

        waiting_.assign(node_total, -1);
        for (TimeStep t = 0; t + 1 < horizon; ++t) {
            for (NodeId v = 0; v < road_nodes_; ++v) {
                waiting_[static_cast<std::size_t>(id(v, t))] = static_cast<TsArcId>(arcs_.size());
                arcs_.push_back({id(v, t), id(v, t + 1), TsArcKind::waiting, 0, -1});
            }
            for (std::size_t a = 0; a < directed.size(); ++a) {
                const auto& ra = directed[a];
                if (t + ra.duration > horizon - 1)
                    continue;
                arcs_.push_back({id(ra.tail, t), id(ra.head, t + ra.duration), TsArcKind::travel,
                                 traversal_energy(ra), static_cast<std::int32_t>(a)});
            }
        }
        build_adjacency(node_total);
    }

    TimeStep horizon() const { return horizon_; }
    std::int32_t road_node_count() const { return road_nodes_; }
    std::size_t node_count() const { return static_cast<std::size_t>(road_nodes_) * static_cast<std::size_t>(horizon_); }
    std::size_t arc_count() const { return arcs_.size(); }

    TsNodeId id(NodeId v, TimeStep t) const { return t * road_nodes_ + v; }
    NodeId road_node(TsNodeId n) const { return n % road_nodes_; }
    TimeStep time(TsNodeId n) const { return n / road_nodes_; }

    const TsArc& arc(TsArcId a) const { return arcs_[static_cast<std::size_t>(a)]; }
    const std::vector<TsArc>& arcs() const { return arcs_; }

    /// Waiting arc (v,t) -> (v,t+1), or -1 when t == T-1.
    TsArcId waiting_arc(NodeId v, TimeStep t) const {
        if (t < 0 || t + 1 >= horizon_)
            return -1;
        return waiting_[static_cast<std::size_t>(id(v, t))];
    }

    std::span<const TsArcId> out_arcs(TsNodeId n) const {
        const auto b = out_offset_[static_cast<std::size_t>(n)];
        const auto e = out_offset_[static_cast<std::size_t>(n) + 1];
        return {out_list_.data() + b, static_cast<std::size_t>(e - b)};
    }
    std::span<const TsArcId> in_arcs(TsNodeId n) const {
        const auto b = in_offset_[static_cast<std::size_t>(n)];
        const auto e = in_offset_[static_cast<std::size_t>(n) + 1];
        return {in_list_.data() + b, static_cast<std::size_t>(e - b)};
    }

  private:
    void build_adjacency(std::size_t node_total) {
        out_offset_.assign(node_total + 1, 0);
        in_offset_.assign(node_total + 1, 0);
        for (const auto& a : arcs_) {
            ++out_offset_[static_cast<std::size_t>(a.tail) + 1];
            ++in_offset_[static_cast<std::size_t>(a.head) + 1];
        }
        for (std::size_t k = 0; k < node_total; ++k) {
            out_offset_[k + 1] += out_offset_[k];
            in_offset_[k + 1] += in_offset_[k];
        }
        out_list_.resize(arcs_.size());
        in_list_.resize(arcs_.size());
        auto out_fill = out_offset_;
        auto in_fill = in_offset_;
        for (std::size_t a = 0; a < arcs_.size(); ++a) {
            out_list_[static_cast<std::size_t>(out_fill[static_cast<std::size_t>(arcs_[a].tail)]++)] = static_cast<TsArcId>(a);
            in_list_[static_cast<std::size_t>(in_fill[static_cast<std::size_t>(arcs_[a].head)]++)] = static_cast<TsArcId>(a);
        }
    }

    TimeStep horizon_ = 0;
    std::int32_t road_nodes_ = 0;
    std::vector<TsArc> arcs_;
    std::vector<TsArcId> waiting_;
    std::vector<std::int32_t> out_offset_, in_offset_;
    std::vector<TsArcId> out_list_, in_list_;
};

inline TimeSpaceNetwork expand_time_space(const RoadNetwork& road, TimeStep horizon) {
    return TimeSpaceNetwork(road, horizon);
}

} // namespace v2vc

#endif // V2VC_TIME_SPACE_HPP
