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

#ifndef V2VC_ROAD_NETWORK_HPP
#define V2VC_ROAD_NETWORK_HPP

#include <cstdint>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace v2vc {

using Energy = std::int64_t;
using TimeStep = std::int32_t;
using NodeId = std::int32_t;

class Error : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

enum class NodeKind { plain, meeting, parking };

inline std::string_view to_string(NodeKind kind) {
    switch (kind) {
    case NodeKind::meeting:
        return "meeting";
    case NodeKind::parking:
        return "parking";
    default:
        return "plain";
    }
}

inline NodeKind node_kind_from_string(std::string_view s) {
    if (s == "plain")
        return NodeKind::plain;
    if (s == "meeting")
        return NodeKind::meeting;
    if (s == "parking")
        return NodeKind::parking;
    throw Error("unknown node kind '" + std::string(s) + "'");
}

struct RoadNode {
    NodeId id = 0;
    NodeKind kind = NodeKind::plain;
    std::string name; // optional label, empty when unnamed

    friend bool operator==(const RoadNode&, const RoadNode&) = default;
};

/// A road connection. Undirected edges are stored once and expanded on demand.
struct RoadArc {
    NodeId tail = 0;
    NodeId head = 0;
    Energy energy = 0;
    TimeStep duration = 1;
    bool directed = true;

    friend bool operator==(const RoadArc&, const RoadArc&) = default;
};

/// One direction of a road arc, as used by the time-space expansion.
struct DirectedArc {
    NodeId tail;
    NodeId head;
    Energy energy;
    TimeStep duration;
};

/// The map. Node ids are dense: nodes[k].id == k.
class RoadNetwork {
  public:
    RoadNetwork() = default;
    RoadNetwork(std::vector<RoadNode> nodes, std::vector<RoadArc> arcs)
        : nodes_(std::move(nodes)), arcs_(std::move(arcs)) {}

    NodeId add_node(NodeKind kind, std::string name = {}) {
        const auto id = static_cast<NodeId>(nodes_.size());
        nodes_.push_back({id, kind, std::move(name)});
        return id;
    }

    void add_arc(NodeId tail, NodeId head, Energy energy, TimeStep duration,
                 bool directed = true) {
        arcs_.push_back({tail, head, energy, duration, directed});
    }

    const std::vector<RoadNode>& nodes() const { return nodes_; }
    const std::vector<RoadArc>& arcs() const { return arcs_; }
    std::size_t node_count() const { return nodes_.size(); }

    bool contains(NodeId v) const {
        return v >= 0 && static_cast<std::size_t>(v) < nodes_.size();
    }
    NodeKind kind(NodeId v) const { return nodes_.at(static_cast<std::size_t>(v)).kind; }

    std::vector<NodeId> nodes_of_kind(NodeKind kind) const {
        std::vector<NodeId> out;
        for (const auto& n : nodes_)
            if (n.kind == kind)
                out.push_back(n.id);
        return out;
    }

    /// Undirected edges become two arcs with identical energy and duration.
    std::vector<DirectedArc> directed_arcs() const {
        std::vector<DirectedArc> out;
        out.reserve(arcs_.size() * 2);
        for (const auto& a : arcs_) {
            out.push_back({a.tail, a.head, a.energy, a.duration});
            if (!a.directed)
                out.push_back({a.head, a.tail, a.energy, a.duration});
        }
        return out;
    }

    /// Violated structural rules, empty when the network is well formed.
    std::vector<std::string> violations() const {
        std::vector<std::string> out;
        for (std::size_t k = 0; k < nodes_.size(); ++k)
            if (nodes_[k].id != static_cast<NodeId>(k))
                out.push_back("nodes[" + std::to_string(k) + "].id: ids must be dense and unique (expected " +
                              std::to_string(k) + ")");
        for (std::size_t k = 0; k < arcs_.size(); ++k) {
            const auto& a = arcs_[k];
            const std::string where = "arcs[" + std::to_string(k) + "]";
            if (!contains(a.tail) || !contains(a.head))
                out.push_back(where + ": endpoint does not exist");
            if (a.energy < 0)
                out.push_back(where + ".e_a: energy must be >= 0");
            if (a.duration < 1)
                out.push_back(where + ".d_a: duration must be >= 1");
        }
        return out;
    }

    friend bool operator==(const RoadNetwork&, const RoadNetwork&) = default;

  private:
    std::vector<RoadNode> nodes_;
    std::vector<RoadArc> arcs_;
};

} // namespace v2vc

#endif // V2VC_ROAD_NETWORK_HPP
