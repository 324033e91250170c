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

#ifndef V2VC_GENERATOR_HPP
#define V2VC_GENERATOR_HPP

#include "v2vc/labels.hpp"
#include "v2vc/scenario.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <map>
#include <numeric>
#include <optional>
#include <random>
#include <set>
#include <string>
#include <utility>
#include <vector>

namespace v2vc {

enum class Topology { complete, ring, grid, random_geometric };

inline std::string_view to_string(Topology t) {
    switch (t) {
    case Topology::complete:
        return "complete";
    case Topology::ring:
        return "ring";
    case Topology::grid:
        return "grid";
    default:
        return "random-geometric";
    }
}

struct Range {
    std::int64_t lo;
    std::int64_t hi;
};

struct GeneratorConfig {
    int helpers = 1;
    int needy = 1;
    int nodes = 2;
    TimeStep horizon = 10;
    double meeting_fraction = 1.0;
    int parking = 0;
    Topology topology = Topology::random_geometric;
    int degree_bound = 3;
    Range arc_energy{1, 2};
    Range arc_duration{1, 1};
    Range helper_surplus{5, 8}; // charge above the helper's cheapest route
    Range needy_deficit{1, 2};  // charge missing from the needy EV's cheapest route
    Range transfer_rate{1, 2};  // e_i
    Energy grid_rate = 2;       // e_p of every parking station
    std::uint64_t seed = 1;
    int max_attempts = 200;

    std::vector<std::string> violations() const {
        std::vector<std::string> out;
        if (helpers < 0 || needy < 0 || nodes < 0 || parking < 0)
            out.push_back("counts must be non-negative");
        if (!(meeting_fraction >= 0.0 && meeting_fraction <= 1.0))
            out.push_back("meeting fraction must be in [0,1]");
        if (horizon < 1)
            out.push_back("T must be >= 1");
        if (nodes == 0 && helpers + needy > 0)
            out.push_back("EVs need at least one road node");
        for (const Range* r : {&arc_energy, &arc_duration, &helper_surplus, &needy_deficit, &transfer_rate})
            if (r->lo > r->hi || r->lo < 0)
                out.push_back("ranges must satisfy 0 <= lo <= hi");
        if (arc_duration.lo < 1)
            out.push_back("arc durations must be >= 1");
        if (needy_deficit.lo < 1)
            out.push_back("needy deficit must be >= 1");
        return out;
    }
};

namespace detail {

/// Portable draws on top of mt19937_64, whose output sequence is fixed by the
/// standard (the std distributions are not).
class Draw {
  public:
    explicit Draw(std::uint64_t seed) : rng_(seed) {}

    std::int64_t uniform(std::int64_t lo, std::int64_t hi) {
        const auto span = static_cast<std::uint64_t>(hi - lo) + 1;
        if (span == 0)
            return static_cast<std::int64_t>(rng_());
        const std::uint64_t limit = std::numeric_limits<std::uint64_t>::max() - std::numeric_limits<std::uint64_t>::max() % span;
        std::uint64_t v;
        do
            v = rng_();
        while (v >= limit);
        return lo + static_cast<std::int64_t>(v % span);
    }
    std::int64_t uniform(const Range& r) { return uniform(r.lo, r.hi); }
    double unit() { return static_cast<double>(rng_() >> 11) * 0x1.0p-53; }

    template <typename T> void shuffle(std::vector<T>& v) {
        for (std::size_t k = v.size(); k > 1; --k)
            std::swap(v[k - 1], v[static_cast<std::size_t>(uniform(0, static_cast<std::int64_t>(k) - 1))]);
    }

  private:
    std::mt19937_64 rng_;
};

inline std::vector<std::pair<int, int>> topology_edges(const GeneratorConfig& c, Draw& draw) {
    const int n = c.nodes;
    std::set<std::pair<int, int>> edges;
    const auto add = [&](int a, int b) {
        if (a != b)
            edges.insert({std::min(a, b), std::max(a, b)});
    };
    switch (c.topology) {
    case Topology::complete:
        for (int a = 0; a < n; ++a)
            for (int b = a + 1; b < n; ++b)
                add(a, b);
        break;
    case Topology::ring:
        for (int a = 0; a < n; ++a)
            add(a, (a + 1) % n);
        break;
    case Topology::grid: {
        const int width = std::max(1, static_cast<int>(std::ceil(std::sqrt(static_cast<double>(n)))));
        for (int a = 0; a < n; ++a) {
            if ((a + 1) % width != 0 && a + 1 < n)
                add(a, a + 1);
            if (a + width < n)
                add(a, a + width);
        }
        break;
    }
    case Topology::random_geometric: {
        std::vector<std::pair<double, double>> pos(static_cast<std::size_t>(n));
        for (auto& p : pos)
            p = {draw.unit(), draw.unit()};
        const auto dist = [&](int a, int b) {
            const double dx = pos[static_cast<std::size_t>(a)].first - pos[static_cast<std::size_t>(b)].first;
            const double dy = pos[static_cast<std::size_t>(a)].second - pos[static_cast<std::size_t>(b)].second;
            return dx * dx + dy * dy;
        };
        std::vector<int> degree(static_cast<std::size_t>(n), 0);
        for (int a = 0; a < n; ++a) {
            std::vector<int> order;
            for (int b = 0; b < n; ++b)
                if (b != a)
                    order.push_back(b);
            std::sort(order.begin(), order.end(), [&](int x, int y) { return dist(a, x) < dist(a, y); });
            for (int b : order) {
                if (degree[static_cast<std::size_t>(a)] >= c.degree_bound)
                    break;
                if (degree[static_cast<std::size_t>(b)] >= c.degree_bound || edges.contains({std::min(a, b), std::max(a, b)}))
                    continue;
                add(a, b);
                ++degree[static_cast<std::size_t>(a)];
                ++degree[static_cast<std::size_t>(b)];
            }
        }
        // join components through their closest node pair
        std::vector<int> comp(static_cast<std::size_t>(n));
        for (;;) {
            std::iota(comp.begin(), comp.end(), 0);
            bool changed = true;
            while (changed) {
                changed = false;
                for (const auto& [a, b] : edges) {
                    const int m = std::min(comp[static_cast<std::size_t>(a)], comp[static_cast<std::size_t>(b)]);
                    if (comp[static_cast<std::size_t>(a)] != m || comp[static_cast<std::size_t>(b)] != m) {
                        comp[static_cast<std::size_t>(a)] = comp[static_cast<std::size_t>(b)] = m;
                        changed = true;
                    }
                }
            }
            std::optional<std::pair<int, int>> best;
            for (int a = 0; a < n; ++a)
                for (int b = 0; b < n; ++b)
                    if (comp[static_cast<std::size_t>(a)] == 0 && comp[static_cast<std::size_t>(b)] != 0 &&
                        (!best || dist(a, b) < dist(best->first, best->second)))
                        best = {a, b};
            if (!best)
                break;
            add(best->first, best->second);
        }
        break;
    }
    }
    return {edges.begin(), edges.end()};
}

} // namespace detail

/// Random scenario with exactly `helpers` EVs that reach their destination on
/// their own charge and `needy` EVs that cannot. Deterministic in the config.
inline Scenario generate(const GeneratorConfig& c) {
    if (const auto v = c.violations(); !v.empty())
        throw Error("invalid generator config: " + v.front());
    detail::Draw draw(c.seed);
    Scenario s;
    s.horizon = c.horizon;

    std::vector<NodeKind> kinds(static_cast<std::size_t>(c.nodes), NodeKind::plain);
    std::vector<int> order(static_cast<std::size_t>(c.nodes));
    std::iota(order.begin(), order.end(), 0);
    draw.shuffle(order);
    int meetings = static_cast<int>(std::lround(c.meeting_fraction * c.nodes));
    if (c.needy > 0 && meetings == 0 && c.meeting_fraction > 0.0)
        meetings = 1;
    meetings = std::min(meetings, c.nodes);
    const int parkings = std::min(c.parking, c.nodes - meetings);
    for (int k = 0; k < meetings; ++k)
        kinds[static_cast<std::size_t>(order[static_cast<std::size_t>(k)])] = NodeKind::meeting;
    for (int k = 0; k < parkings; ++k)
        kinds[static_cast<std::size_t>(order[static_cast<std::size_t>(meetings + k)])] = NodeKind::parking;
    for (int v = 0; v < c.nodes; ++v) {
        s.road.add_node(kinds[static_cast<std::size_t>(v)]);
        if (kinds[static_cast<std::size_t>(v)] == NodeKind::parking)
            s.grid_rate[v] = c.grid_rate;
    }
    for (const auto& [a, b] : detail::topology_edges(c, draw))
        s.road.add_arc(a, b, draw.uniform(c.arc_energy), static_cast<TimeStep>(draw.uniform(c.arc_duration)), false);

    if (c.needy > 0 && meetings == 0 && parkings == 0)
        throw Error("generate: needy EVs requested but the network has no meeting point");

    const TimeSpaceNetwork ts(s.road, s.horizon);
    std::vector<LabelTable> forward(static_cast<std::size_t>(c.nodes));
    std::vector<std::uint8_t> have(static_cast<std::size_t>(c.nodes), 0);
    const auto direct = [&](NodeId from, NodeId to) {
        if (!have[static_cast<std::size_t>(from)]) {
            forward[static_cast<std::size_t>(from)] = min_energy_forward(ts, from);
            have[static_cast<std::size_t>(from)] = 1;
        }
        return forward[static_cast<std::size_t>(from)].at(ts.id(to, s.horizon - 1));
    };

    std::map<NodeId, LabelTable> backward;
    const auto to_destination = [&](NodeId to) -> const LabelTable& {
        auto it = backward.find(to);
        if (it == backward.end())
            it = backward.emplace(to, min_energy_backward(ts, to)).first;
        return it->second;
    };
    // a needy EV must get to some meeting point or parking on its own charge
    // and still have time to finish from there
    const auto can_meet = [&](NodeId from, NodeId to, Energy soc) {
        direct(from, to);
        const auto& fwd = forward[static_cast<std::size_t>(from)];
        const auto& bwd = to_destination(to);
        for (NodeId m = 0; m < c.nodes; ++m) {
            if (kinds[static_cast<std::size_t>(m)] == NodeKind::plain)
                continue;
            for (TimeStep t = 0; t + 1 < s.horizon; ++t) {
                const Energy there = fwd.at(ts.id(m, t));
                if (there != kUnreachable && there <= soc && bwd.at(ts.id(m, t + 1)) != kUnreachable)
                    return true;
            }
        }
        return false;
    };

    const auto draw_ev = [&](bool helper, int index) {
        for (int attempt = 0; attempt < c.max_attempts; ++attempt) {
            const auto from = static_cast<NodeId>(draw.uniform(0, c.nodes - 1));
            auto to = static_cast<NodeId>(draw.uniform(0, c.nodes - 1));
            if (c.nodes > 1 && to == from)
                continue;
            const Energy need = direct(from, to);
            if (need == kUnreachable)
                continue;
            Ev ev;
            ev.origin = from;
            ev.destination = to;
            ev.rate = draw.uniform(c.transfer_rate);
            if (helper) {
                ev.id = "h" + std::to_string(index);
                ev.soc = need + draw.uniform(c.helper_surplus);
                ev.max_soc = ev.soc;
            } else {
                if (need < 1)
                    continue;
                ev.id = "n" + std::to_string(index);
                ev.soc = std::max<Energy>(0, need - draw.uniform(c.needy_deficit));
                ev.max_soc = need + c.helper_surplus.hi;
                if (!can_meet(from, to, ev.soc))
                    continue;
            }
            return ev;
        }
        throw Error(std::string("generate: could not place a ") + (helper ? "helper" : "needy") + " EV after " +
                    std::to_string(c.max_attempts) + " attempts");
    };
    for (int k = 0; k < c.helpers; ++k)
        s.evs.push_back(draw_ev(true, k));
    for (int k = 0; k < c.needy; ++k)
        s.evs.push_back(draw_ev(false, k));
    return s;
}

struct Preset {
    std::string id;
    GeneratorConfig config;
};

/// Helper/needy/node/T counts of the B and Q benchmark families.
inline std::vector<Preset> benchmark_suite() {
    struct Row {
        const char* id;
        int helpers, needy, nodes;
        TimeStep horizon;
    };
    static constexpr Row rows[] = {
        {"B1", 1, 1, 20, 40},    {"B2", 2, 1, 20, 40},     {"B3", 2, 2, 20, 40},     {"B4", 4, 2, 20, 40},
        {"B5", 6, 3, 20, 40},    {"B6", 8, 4, 20, 40},     {"B7", 10, 5, 20, 40},    {"B8", 20, 10, 40, 80},
        {"B9", 40, 20, 80, 160}, {"B10", 60, 30, 120, 240}, {"B11", 80, 40, 160, 320}, {"Q1", 1, 1, 2, 10},
        {"Q2", 2, 1, 3, 10},     {"Q3", 3, 2, 5, 10},      {"Q4", 4, 2, 6, 10},      {"Q5", 5, 3, 8, 10},
        {"Q6", 6, 3, 9, 10},
    };
    std::vector<Preset> out;
    for (const auto& r : rows) {
        GeneratorConfig c;
        c.helpers = r.helpers;
        c.needy = r.needy;
        c.nodes = r.nodes;
        c.horizon = r.horizon;
        if (r.id[0] == 'B') {
            c.meeting_fraction = 0.2;
            c.arc_energy = {1, 3};
            c.arc_duration = {1, 2};
            c.helper_surplus = {4, 10};
            c.needy_deficit = {1, 3};
        } else {
            // every node is a meeting point and every arc takes one step
            c.meeting_fraction = 1.0;
            c.arc_energy = {1, 2};
            c.arc_duration = {1, 1};
            c.helper_surplus = {5, 8};
            c.needy_deficit = {1, 2};
        }
        out.push_back({r.id, c});
    }
    return out;
}

inline std::optional<GeneratorConfig> find_preset(std::string_view id) {
    for (const auto& p : benchmark_suite())
        if (p.id == id)
            return p.config;
    return std::nullopt;
}

/// Random-size family: 15 to 120 EVs in steps of 3, two helpers per needy EV,
/// 4/3 road nodes and 8/3 time steps per EV.
inline std::vector<Preset> random_suite() {
    std::vector<Preset> out;
    for (int evs = 15; evs <= 120; evs += 3) {
        GeneratorConfig c;
        c.helpers = evs * 2 / 3;
        c.needy = evs / 3;
        c.nodes = evs * 4 / 3;
        c.horizon = evs * 8 / 3;
        c.meeting_fraction = 0.2;
        c.arc_energy = {1, 3};
        c.arc_duration = {1, 2};
        c.helper_surplus = {4, 10};
        c.needy_deficit = {1, 3};
        out.push_back({"R" + std::to_string(evs), c});
    }
    return out;
}

/// Fixed two-node instance matching the Q1 row: both nodes are meeting points
/// joined by one undirected edge (e = 1, d = 1), T = 10. The helper starts at
/// B bound for A; the needy EV starts empty at A bound for B.
inline Scenario reconstructed_q1() {
    Scenario s;
    s.horizon = 10;
    const NodeId a = s.road.add_node(NodeKind::meeting, "A");
    const NodeId b = s.road.add_node(NodeKind::meeting, "B");
    s.road.add_arc(a, b, 1, 1, false);
    s.evs.push_back({"h0", b, a, 3, 3, 1});
    s.evs.push_back({"n0", a, b, 0, 4, 1});
    return s;
}

} // namespace v2vc

#endif // V2VC_GENERATOR_HPP
