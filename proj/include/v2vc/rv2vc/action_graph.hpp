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


#ifndef V2VC_RV2VC_ACTION_GRAPH_HPP
#define V2VC_RV2VC_ACTION_GRAPH_HPP

#include "v2vc/labels.hpp"
#include "v2vc/rv2vc/assignment.hpp"
#include "v2vc/scenario.hpp"

#include <algorithm>
#include <functional>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

namespace v2vc {

enum class ActionKind { direct, pair, g2vc };

inline std::string_view to_string(ActionKind k) {
    switch (k) {
    case ActionKind::direct:
        return "direct";
    case ActionKind::pair:
        return "pair";
    default:
        return "g2vc";
    }
}

/// One admissible action. `direct`: EV i drives to its destination unaided.
/// `pair`: helper i charges needy j at meeting point `node` for k steps from
/// t0. `g2vc`: EV i draws k steps of grid energy at parking `node` from t0.
struct ActionEdge {
    ActionKind kind = ActionKind::direct;
    std::int32_t i = -1;
    std::int32_t j = -1;
    NodeId node = -1;
    TimeStep t0 = -1;
    TimeStep k = 0;
    Energy cost = 0; // traversal energy of every EV the action covers
    Energy grid = 0; // grid energy drawn (g2vc only)

    friend bool operator==(const ActionEdge&, const ActionEdge&) = default;
};

struct ActionGraphOptions {
    bool g2vc = false;
};

struct ActionGraph {
    std::size_t ev_count = 0;
    std::vector<std::uint8_t> helper; // 1 when the EV reaches its destination unaided
    std::vector<ActionEdge> edges;

    std::size_t degree(std::int32_t ev) const {
        return static_cast<std::size_t>(std::count_if(edges.begin(), edges.end(), [&](const ActionEdge& e) {
            return e.i == ev || (e.kind == ActionKind::pair && e.j == ev);
        }));
    }
};

/// Forward and backward labels of one EV restricted to a set of station
/// nodes, all time steps. Full tables are large at benchmark scale.
class StationLabels {
  public:
    StationLabels(const TimeSpaceNetwork& ts, const Ev& ev, const std::vector<NodeId>& stations)
        : horizon_(ts.horizon()), stations_(stations) {
        const auto fwd = min_energy_forward(ts, ev.origin);
        const auto bwd = min_energy_backward(ts, ev.destination);
        direct_ = fwd.at(ts.id(ev.destination, horizon_ - 1));
        const auto slots = stations.size() * static_cast<std::size_t>(horizon_);
        fwd_.resize(slots);
        bwd_.resize(slots);
        for (std::size_t s = 0; s < stations.size(); ++s)
            for (TimeStep t = 0; t < horizon_; ++t) {
                fwd_[slot(s, t)] = fwd.at(ts.id(stations[s], t));
                bwd_[slot(s, t)] = bwd.at(ts.id(stations[s], t));
            }
    }

    Energy direct() const { return direct_; }
    Energy forward(std::size_t station, TimeStep t) const { return fwd_[slot(station, t)]; }
    Energy backward(std::size_t station, TimeStep t) const { return bwd_[slot(station, t)]; }
    NodeId station(std::size_t s) const { return stations_[s]; }

  private:
    std::size_t slot(std::size_t s, TimeStep t) const {
        return s * static_cast<std::size_t>(horizon_) + static_cast<std::size_t>(t);
    }

    TimeStep horizon_;
    std::vector<NodeId> stations_;
    Energy direct_ = kUnreachable;
    std::vector<Energy> fwd_, bwd_;
};

namespace detail {

/// Cheapest (t0, k) at which `giver` can hand `rate` per step to `taker` at
/// station index `st`. A null giver means the grid. Labels are monotone in t
/// (waiting is free), so for each t0 the first k that suffices is cheapest and
/// the loop over k stops as soon as a giver or cap condition fails.
inline std::optional<ActionEdge> price_charge(TimeStep horizon, const Ev* giver, const StationLabels* giver_labels,
                                              const Ev& taker, const StationLabels& taker_labels, std::size_t st,
                                              Energy rate) {
    if (rate <= 0)
        return std::nullopt;
    std::optional<ActionEdge> best;
    Energy best_total = 0;
    for (TimeStep t0 = 0; t0 + 1 < horizon; ++t0) {
        const Energy fn = taker_labels.forward(st, t0);
        if (fn == kUnreachable || taker.soc < fn)
            continue;
        const Energy rn = taker.soc - fn;
        Energy fh = 0;
        Energy rh = 0;
        if (giver) {
            fh = giver_labels->forward(st, t0);
            if (fh == kUnreachable || giver->soc < fh)
                continue;
            rh = giver->soc - fh;
        }
        for (TimeStep k = 1; t0 + k <= horizon - 1; ++k) {
            const Energy gift = rate * k;
            if (rn + gift > taker.max_soc)
                break;
            Energy bh = 0;
            if (giver) {
                bh = giver_labels->backward(st, t0 + k);
                if (bh == kUnreachable || rh - gift < bh)
                    break;
            }
            const Energy bn = taker_labels.backward(st, t0 + k);
            if (bn == kUnreachable)
                break;
            if (rn + gift < bn)
                continue;
            const Energy cost = fn + bn + (giver ? fh + bh : 0);
            const Energy grid = giver ? 0 : gift;
            if (!best || cost + grid < best_total) {
                best = ActionEdge{giver ? ActionKind::pair : ActionKind::g2vc, -1, -1, taker_labels.station(st), t0, k,
                                  cost, grid};
                best_total = cost + grid;
            }
            break;
        }
    }
    return best;
}

} // namespace detail

/// Cheapest schedule for `helper` to charge `needy` at meeting point m, or
/// nullopt when no (t0, k) leaves both able to finish their trips.
inline std::optional<ActionEdge> pair_edge(const Scenario& s, std::int32_t helper, std::int32_t needy, NodeId m) {
    if (s.road.kind(m) != NodeKind::meeting)
        throw Error("pair_edge: node " + std::to_string(m) + " is not a meeting point");
    const TimeSpaceNetwork ts(s.road, s.horizon);
    const auto& h = s.evs.at(static_cast<std::size_t>(helper));
    const auto& n = s.evs.at(static_cast<std::size_t>(needy));
    const StationLabels hl(ts, h, {m});
    const StationLabels nl(ts, n, {m});
    auto e = detail::price_charge(s.horizon, &h, &hl, n, nl, 0, h.rate);
    if (e) {
        e->i = helper;
        e->j = needy;
    }
    return e;
}

/// Action graph over all EVs: a direct edge for every EV that finishes
/// unaided, a pair edge for every (helper, needy, meeting point) with a
/// feasible schedule, and optionally a g2vc edge per (needy, parking).
inline ActionGraph build_action_graph(const Scenario& s, const TimeSpaceNetwork& ts,
                                      const ActionGraphOptions& opt = {}) {
    require_valid(s);
    ActionGraph g;
    const auto n = s.evs.size();
    g.ev_count = n;
    g.helper.assign(n, 0);
    const auto meetings = s.meeting_points();
    const auto parkings = opt.g2vc ? s.parking_stations() : std::vector<NodeId>{};
    std::vector<NodeId> stations = meetings;
    stations.insert(stations.end(), parkings.begin(), parkings.end());

    std::vector<StationLabels> labels;
    labels.reserve(n);
    for (const auto& ev : s.evs)
        labels.emplace_back(ts, ev, stations);
    for (std::size_t i = 0; i < n; ++i) {
        const Energy direct = labels[i].direct();
        if (direct != kUnreachable && direct <= s.evs[i].soc) {
            g.helper[i] = 1;
            g.edges.push_back({ActionKind::direct, static_cast<std::int32_t>(i), -1, -1, -1, 0, direct, 0});
        }
    }
    for (std::size_t i = 0; i < n; ++i) {
        if (!g.helper[i])
            continue;
        for (std::size_t j = 0; j < n; ++j) {
            if (g.helper[j])
                continue;
            for (std::size_t m = 0; m < meetings.size(); ++m) {
                auto e = detail::price_charge(s.horizon, &s.evs[i], &labels[i], s.evs[j], labels[j], m, s.evs[i].rate);
                if (!e)
                    continue;
                e->i = static_cast<std::int32_t>(i);
                e->j = static_cast<std::int32_t>(j);
                g.edges.push_back(*e);
            }
        }
    }
    for (std::size_t j = 0; j < n; ++j) {
        if (g.helper[j])
            continue;
        for (std::size_t p = 0; p < parkings.size(); ++p) {
            auto e = detail::price_charge(s.horizon, nullptr, nullptr, s.evs[j], labels[j], meetings.size() + p,
                                          s.grid_rate_at(parkings[p]));
            if (!e)
                continue;
            e->i = static_cast<std::int32_t>(j);
            g.edges.push_back(*e);
        }
    }
    return g;
}

inline ActionGraph build_action_graph(const Scenario& s, const ActionGraphOptions& opt = {}) {
    return build_action_graph(s, TimeSpaceNetwork(s.road, s.horizon), opt);
}

/// Convex piecewise-linear function on [0, inf): f(0) = 0, slope
/// slopes[k] between breakpoints[k-1] and breakpoints[k] (breakpoints[-1] = 0,
/// the last slope extends to infinity). Slopes must be non-decreasing.
struct PiecewiseLinear {
    std::vector<Energy> breakpoints;
    std::vector<Energy> slopes;

    void check() const {
        if (slopes.empty() || breakpoints.size() + 1 != slopes.size())
            throw Error("piecewise-linear cost needs one more slope than breakpoints");
        if (!std::is_sorted(slopes.begin(), slopes.end()))
            throw Error("piecewise-linear cost is not convex (slopes must be non-decreasing)");
        for (std::size_t k = 0; k < breakpoints.size(); ++k)
            if (breakpoints[k] <= (k ? breakpoints[k - 1] : 0))
                throw Error("piecewise-linear breakpoints must be positive and increasing");
    }

    Energy operator()(Energy x) const {
        Energy value = 0;
        Energy from = 0;
        for (std::size_t k = 0; k < slopes.size(); ++k) {
            const Energy to = k < breakpoints.size() ? breakpoints[k] : std::numeric_limits<Energy>::max();
            if (x <= from)
                break;
            value += slopes[k] * (std::min(x, to) - from);
            from = to;
        }
        return value;
    }
};

/// Weight of an edge in the selection. The default is its energy (traversal
/// plus grid), matching the energy objective.
using EdgeWeight = std::function<std::int64_t(const ActionEdge&)>;

inline std::int64_t energy_weight(const ActionEdge& e) { return e.cost + e.grid; }

/// Applies a convex piecewise-linear function to each action's energy.
inline EdgeWeight convex_weight(PiecewiseLinear f) {
    f.check();
    return [f = std::move(f)](const ActionEdge& e) { return f(e.cost + e.grid); };
}

struct ActionSelection {
    std::vector<std::size_t> edges;    // indices into ActionGraph::edges
    std::vector<std::int32_t> edge_of; // per EV, index of the edge covering it
    Energy cost = 0;                   // traversal energy
    Energy grid = 0;                   // grid energy
    std::int64_t weight = 0;           // selection weight under the chosen EdgeWeight

    Energy objective() const { return cost + grid; }
};

/// Exactly one edge per EV node at minimum total weight, or nullopt when
/// some EV cannot be covered. Solved as a square assignment: rows are helpers
/// and one slot per needy EV, columns are needy EVs and one slot per helper.
/// helper -> needy uses the cheapest pair edge, helper -> own slot its direct
/// edge, needy slot -> own needy EV its cheapest g2vc edge, and needy slot ->
/// any helper slot is free.
inline std::optional<ActionSelection> solve_selection(const ActionGraph& g, const EdgeWeight& weight = energy_weight) {
    std::vector<std::int32_t> helpers, needy;
    for (std::size_t i = 0; i < g.ev_count; ++i)
        (g.helper[i] ? helpers : needy).push_back(static_cast<std::int32_t>(i));
    const std::size_t H = helpers.size();
    const std::size_t N = needy.size();
    std::vector<std::size_t> row_of(g.ev_count), col_of(g.ev_count);
    for (std::size_t r = 0; r < H; ++r)
        row_of[static_cast<std::size_t>(helpers[r])] = r;
    for (std::size_t c = 0; c < N; ++c)
        col_of[static_cast<std::size_t>(needy[c])] = c;

    const std::size_t size = H + N;
    std::vector<std::vector<std::int64_t>> cost(size, std::vector<std::int64_t>(size, kForbidden));
    std::vector<std::vector<std::int64_t>> pick(size, std::vector<std::int64_t>(size, -1));
    const auto offer = [&](std::size_t r, std::size_t c, std::size_t edge) {
        const std::int64_t w = weight(g.edges[edge]);
        if (w >= kForbidden)
            throw Error("solve_selection: edge weight out of range");
        // ties keep the earliest edge, i.e. the lowest meeting point
        if (w < cost[r][c]) {
            cost[r][c] = w;
            pick[r][c] = static_cast<std::int64_t>(edge);
        }
    };
    for (std::size_t e = 0; e < g.edges.size(); ++e) {
        const auto& a = g.edges[e];
        switch (a.kind) {
        case ActionKind::direct:
            offer(row_of[static_cast<std::size_t>(a.i)], N + row_of[static_cast<std::size_t>(a.i)], e);
            break;
        case ActionKind::pair:
            offer(row_of[static_cast<std::size_t>(a.i)], col_of[static_cast<std::size_t>(a.j)], e);
            break;
        case ActionKind::g2vc:
            if (!g.helper[static_cast<std::size_t>(a.i)])
                offer(H + col_of[static_cast<std::size_t>(a.i)], col_of[static_cast<std::size_t>(a.i)], e);
            break;
        }
    }
    for (std::size_t r = H; r < size; ++r)
        for (std::size_t c = N; c < size; ++c)
            cost[r][c] = 0;

    const auto result = min_cost_assignment(cost);
    if (!result)
        return std::nullopt;
    ActionSelection sel;
    sel.edge_of.assign(g.ev_count, -1);
    for (std::size_t r = 0; r < size; ++r) {
        const auto c = static_cast<std::size_t>(result->column_of_row[r]);
        if (pick[r][c] < 0)
            continue;
        const auto e = static_cast<std::size_t>(pick[r][c]);
        const auto& a = g.edges[e];
        sel.edges.push_back(e);
        sel.cost += a.cost;
        sel.grid += a.grid;
        sel.weight += cost[r][c];
        sel.edge_of[static_cast<std::size_t>(a.i)] = static_cast<std::int32_t>(e);
        if (a.kind == ActionKind::pair)
            sel.edge_of[static_cast<std::size_t>(a.j)] = static_cast<std::int32_t>(e);
    }
    std::sort(sel.edges.begin(), sel.edges.end());
    return sel;
}

inline std::string node_label(const RoadNetwork& road, NodeId v) {
    const auto& name = road.nodes().at(static_cast<std::size_t>(v)).name;
    return name.empty() ? std::to_string(v) : name;
}

/// CSV `kind,i,j,node,t0,k,cost`, one row per edge; unused fields are empty.
inline void write_action_csv(const Scenario& s, const ActionGraph& g, std::ostream& out) {
    out << "kind,i,j,node,t0,k,cost\n";
    for (const auto& e : g.edges) {
        out << to_string(e.kind) << ',' << s.evs[static_cast<std::size_t>(e.i)].id << ',';
        if (e.kind == ActionKind::pair)
            out << s.evs[static_cast<std::size_t>(e.j)].id;
        out << ',';
        if (e.kind != ActionKind::direct)
            out << node_label(s.road, e.node) << ',' << e.t0 << ',' << e.k;
        else
            out << ",,";
        out << ',' << e.cost + e.grid << '\n';
    }
}

inline std::string action_csv(const Scenario& s, const ActionGraph& g) {
    std::ostringstream os;
    write_action_csv(s, g, os);
    return os.str();
}

/// EV-by-edge incidence matrix (rows EVs, columns edges). Every column has one
/// or two ones; pair columns join a helper row and a needy row.
inline std::vector<std::vector<int>> incidence_matrix(const ActionGraph& g) {
    std::vector<std::vector<int>> a(g.ev_count, std::vector<int>(g.edges.size(), 0));
    for (std::size_t e = 0; e < g.edges.size(); ++e) {
        a[static_cast<std::size_t>(g.edges[e].i)][e] = 1;
        if (g.edges[e].kind == ActionKind::pair)
            a[static_cast<std::size_t>(g.edges[e].j)][e] = 1;
    }
    return a;
}

} // namespace v2vc

#endif // V2VC_RV2VC_ACTION_GRAPH_HPP
