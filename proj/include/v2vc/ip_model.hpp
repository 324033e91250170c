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

#ifndef V2VC_IP_MODEL_HPP
#define V2VC_IP_MODEL_HPP

#include "v2vc/layout.hpp"
#include "v2vc/plan.hpp"
#include "v2vc/scenario.hpp"
#include "v2vc/time_space.hpp"

#include <memory>
#include <string>
#include <vector>

namespace v2vc {

struct Triplet {
    Index row;
    Index col;
    Index value;
    friend bool operator==(const Triplet&, const Triplet&) = default;
};

/// Row-major sparse integer matrix.
struct SparseMatrix {
    Index rows = 0;
    Index cols = 0;
    std::vector<Index> row_start{0};
    std::vector<Index> col_index;
    std::vector<Index> value;

    Index nonzeros() const { return static_cast<Index>(col_index.size()); }

    std::vector<Triplet> triplets() const {
        std::vector<Triplet> out;
        out.reserve(col_index.size());
        for (Index r = 0; r < rows; ++r)
            for (Index k = row_start[static_cast<std::size_t>(r)]; k < row_start[static_cast<std::size_t>(r) + 1]; ++k)
                out.push_back({r, col_index[static_cast<std::size_t>(k)], value[static_cast<std::size_t>(k)]});
        return out;
    }
};

enum class ObjectiveKind { energy, feasibility };

/// Linear objective. `energy` charges traversal energy on travel arcs and grid
/// energy on G2VC columns; transfers between EVs cost nothing. `feasibility`
/// is identically zero.
struct ObjectiveSpec {
    std::string tag = "energy";
    std::vector<Index> coefficient;
};

inline std::string_view to_string(ObjectiveKind k) { return k == ObjectiveKind::energy ? "energy" : "feasibility"; }

inline ObjectiveKind objective_from_string(std::string_view s) {
    if (s == "energy")
        return ObjectiveKind::energy;
    if (s == "feasibility")
        return ObjectiveKind::feasibility;
    throw Error("unknown objective '" + std::string(s) + "' (expected energy or feasibility)");
}

/// min c.x subject to A x = b, l <= x <= u, x integral.
struct IpInstance {
    SparseMatrix A;
    std::vector<Index> b;
    std::vector<Index> lower;
    std::vector<Index> upper;
    ObjectiveSpec objective;
    VariableLayout layout;
    std::shared_ptr<const Scenario> scenario;
    std::shared_ptr<const TimeSpaceNetwork> network;

    Index rows() const { return A.rows; }
    Index cols() const { return A.cols; }
};

struct Dimensions {
    Index rows;
    Index cols;
    friend bool operator==(const Dimensions&, const Dimensions&) = default;
};

/// |A| of the expansion without building it: one waiting arc per (v,t) with
/// t <= T-2, and T - d_a copies of each directed road arc.
inline Index predicted_ts_arc_count(const RoadNetwork& road, TimeStep horizon) {
    Index count = static_cast<Index>(road.node_count()) * std::max<Index>(0, horizon - 1);
    for (const auto& a : road.directed_arcs())
        count += std::max<Index>(0, horizon - a.duration);
    return count;
}

/// Closed-form matrix size. The (|V|-1)/2 terms are evaluated as |V|(|V|-1)/2,
/// which is always integral.
inline Dimensions predicted_dimensions(const Scenario& s) {
    const Index v = static_cast<Index>(s.evs.size());
    const Index steps = s.horizon - 1;
    const Index p = static_cast<Index>(s.parking_stations().size());
    const Index m = static_cast<Index>(s.meeting_points().size());
    const Index n = static_cast<Index>(s.road.node_count()) * s.horizon;
    const Index a = predicted_ts_arc_count(s.road, s.horizon);
    const Index pairs = v * (v - 1);
    const Index rows = v * n + v * steps * (3 + p) + steps * m * (5 * pairs / 2);
    const Index cols = v * a + v * steps * (3 + 2 * p) + steps * m * (7 * pairs / 2);
    return {rows, cols};
}

namespace detail {

class RowWriter {
  public:
    explicit RowWriter(SparseMatrix& m) : m_(m) {}
    void add(Index col, Index value) {
        if (value != 0) {
            m_.col_index.push_back(col);
            m_.value.push_back(value);
        }
    }
    void end_row() {
        // merge duplicate columns so each (row, col) appears once
        const auto begin = static_cast<std::size_t>(m_.row_start.back());
        std::vector<std::pair<Index, Index>> entries;
        for (std::size_t k = begin; k < m_.col_index.size(); ++k)
            entries.emplace_back(m_.col_index[k], m_.value[k]);
        std::sort(entries.begin(), entries.end());
        m_.col_index.resize(begin);
        m_.value.resize(begin);
        for (std::size_t k = 0; k < entries.size(); ++k) {
            if (!m_.col_index.empty() && m_.col_index.size() > begin && m_.col_index.back() == entries[k].first)
                m_.value.back() += entries[k].second;
            else {
                m_.col_index.push_back(entries[k].first);
                m_.value.push_back(entries[k].second);
            }
        }
        m_.row_start.push_back(static_cast<Index>(m_.col_index.size()));
        ++m_.rows;
    }

  private:
    SparseMatrix& m_;
};

} // namespace detail

inline ObjectiveSpec make_objective(const Scenario& s, const TimeSpaceNetwork& ts, const VariableLayout& layout,
                                    ObjectiveKind kind) {
    ObjectiveSpec obj{std::string(to_string(kind)), std::vector<Index>(static_cast<std::size_t>(layout.cols()), 0)};
    if (kind == ObjectiveKind::feasibility)
        return obj;
    for (Index i = 0; i < layout.ev_count(); ++i) {
        for (std::size_t a = 0; a < ts.arc_count(); ++a)
            if (ts.arc(static_cast<TsArcId>(a)).kind == TsArcKind::travel)
                obj.coefficient[static_cast<std::size_t>(layout.x(i, static_cast<TsArcId>(a)))] =
                    ts.arc(static_cast<TsArcId>(a)).energy;
        for (NodeId p : layout.parking_stations())
            for (TimeStep t = 0; t < layout.steps(); ++t)
                obj.coefficient[static_cast<std::size_t>(layout.y(i, p, t))] = s.grid_rate_at(p);
    }
    return obj;
}

inline IpInstance build_ip(const Scenario& scenario, ObjectiveKind objective = ObjectiveKind::energy) {
    require_valid(scenario);
    if (scenario.horizon < 2)
        throw Error("build_ip needs T >= 2");
    IpInstance ip;
    ip.scenario = std::make_shared<const Scenario>(scenario);
    ip.network = std::make_shared<const TimeSpaceNetwork>(scenario.road, scenario.horizon);
    const auto& s = *ip.scenario;
    const auto& ts = *ip.network;
    ip.layout = VariableLayout(s, ts.arc_count());
    const auto& L = ip.layout;
    const auto n = static_cast<std::int32_t>(s.evs.size());
    const TimeStep last = s.horizon - 1;
    const auto& M = L.meeting_points();
    const auto& P = L.parking_stations();

    ip.A.cols = L.cols();
    detail::RowWriter w(ip.A);
    auto& b = ip.b;

    // Flow conservation: in - out = -1 at (s_i,0), +1 at (f_i,T-1), 0 elsewhere.
    for (std::int32_t i = 0; i < n; ++i) {
        const auto& ev = s.evs[static_cast<std::size_t>(i)];
        for (TsNodeId node = 0; node < static_cast<TsNodeId>(ts.node_count()); ++node) {
            for (TsArcId a : ts.in_arcs(node))
                w.add(L.x(i, a), 1);
            for (TsArcId a : ts.out_arcs(node))
                w.add(L.x(i, a), -1);
            w.end_row();
            Index rhs = 0;
            if (node == ts.id(ev.origin, 0))
                rhs -= 1;
            if (node == ts.id(ev.destination, last))
                rhs += 1;
            b.push_back(rhs);
        }
    }

    // Battery balance after every arc ending at or before t:
    //   sum(grid gain + received - given - traversal) + z_{t,i} = -SOC_i.
    // The receiver gains at the giver's rate, the giver loses at its own rate.
    for (std::int32_t i = 0; i < n; ++i) {
        const auto& ev = s.evs[static_cast<std::size_t>(i)];
        for (TimeStep t = 1; t <= last; ++t) {
            for (std::size_t a = 0; a < ts.arc_count(); ++a) {
                const auto& arc = ts.arc(static_cast<TsArcId>(a));
                if (arc.kind == TsArcKind::travel && ts.time(arc.head) <= t)
                    w.add(L.x(i, static_cast<TsArcId>(a)), -arc.energy);
            }
            for (TimeStep tau = 0; tau + 1 <= t; ++tau) {
                for (NodeId p : P)
                    w.add(L.y(i, p, tau), s.grid_rate_at(p));
                for (std::int32_t j = 0; j < n; ++j) {
                    if (j == i)
                        continue;
                    for (NodeId m : M) {
                        w.add(L.z(i, j, m, tau), s.evs[static_cast<std::size_t>(j)].rate);
                        w.add(L.z(j, i, m, tau), -ev.rate);
                    }
                }
            }
            w.add(L.battery(i, t), 1);
            w.end_row();
            b.push_back(-ev.soc);
        }
    }

    // G2VC only while parked: Y - X_wait + z = 0, z in [0,1].
    for (std::int32_t i = 0; i < n; ++i)
        for (NodeId p : P)
            for (TimeStep t = 0; t < last; ++t) {
                w.add(L.y(i, p, t), 1);
                w.add(L.x(i, ts.waiting_arc(p, t)), -1);
                w.add(L.grid_link(i, p, t), 1);
                w.end_row();
                b.push_back(0);
            }

    // V2VC only while both are waiting at the meeting point.
    for (std::int32_t r = 0; r < n; ++r)
        for (std::int32_t g = 0; g < n; ++g) {
            if (r == g)
                continue;
            for (NodeId m : M)
                for (TimeStep t = 0; t < last; ++t) {
                    w.add(L.z(r, g, m, t), 1);
                    w.add(L.x(r, ts.waiting_arc(m, t)), -1);
                    w.add(L.v2v_receiver(r, g, m, t), 1);
                    w.end_row();
                    b.push_back(0);
                }
        }
    for (std::int32_t r = 0; r < n; ++r)
        for (std::int32_t g = 0; g < n; ++g) {
            if (r == g)
                continue;
            for (NodeId m : M)
                for (TimeStep t = 0; t < last; ++t) {
                    w.add(L.z(r, g, m, t), 1);
                    w.add(L.x(g, ts.waiting_arc(m, t)), -1);
                    w.add(L.v2v_giver(r, g, m, t), 1);
                    w.end_row();
                    b.push_back(0);
                }
        }

    // One direction per pair: Z_ij + Z_ji + z = 1 with z in [0,1].
    for (std::int32_t i = 0; i < n; ++i)
        for (std::int32_t j = i + 1; j < n; ++j)
            for (NodeId m : M)
                for (TimeStep t = 0; t < last; ++t) {
                    w.add(L.z(i, j, m, t), 1);
                    w.add(L.z(j, i, m, t), 1);
                    w.add(L.one_way(i, j, m, t), 1);
                    w.end_row();
                    b.push_back(1);
                }

    // At most one partner per direction and step.
    for (std::int32_t i = 0; i < n; ++i)
        for (TimeStep t = 0; t < last; ++t) {
            for (std::int32_t j = 0; j < n; ++j)
                if (j != i)
                    for (NodeId m : M)
                        w.add(L.z(i, j, m, t), 1);
            w.add(L.receive_once(i, t), 1);
            w.end_row();
            b.push_back(0);
        }
    for (std::int32_t i = 0; i < n; ++i)
        for (TimeStep t = 0; t < last; ++t) {
            for (std::int32_t j = 0; j < n; ++j)
                if (j != i)
                    for (NodeId m : M)
                        w.add(L.z(j, i, m, t), 1);
            w.add(L.give_once(i, t), 1);
            w.end_row();
            b.push_back(0);
        }

    // Bounds.
    ip.lower.assign(static_cast<std::size_t>(L.cols()), 0);
    ip.upper.assign(static_cast<std::size_t>(L.cols()), 1);
    for (std::int32_t i = 0; i < n; ++i)
        for (TimeStep t = 1; t <= last; ++t) {
            const auto c = static_cast<std::size_t>(L.battery(i, t));
            ip.lower[c] = -s.evs[static_cast<std::size_t>(i)].max_soc;
            ip.upper[c] = 0;
        }
    for (Index c = L.block_begin(Block::receive_once); c < L.block_end(Block::give_once); ++c) {
        ip.lower[static_cast<std::size_t>(c)] = -1;
        ip.upper[static_cast<std::size_t>(c)] = 0;
    }

    ip.objective = make_objective(s, ts, L, objective);
    return ip;
}

inline Index eval_objective(const IpInstance& ip, const Solution& sol) {
    if (static_cast<Index>(sol.values.size()) != ip.cols())
        throw Error("eval_objective: solution length does not match the column count");
    Index total = 0;
    for (std::size_t k = 0; k < sol.values.size(); ++k)
        total += ip.objective.coefficient[k] * sol.values[k];
    return total;
}

/// Objective of a plan under the energy objective, without building the model.
inline Energy plan_energy(const Scenario& s, const TimeSpaceNetwork& ts, const Plan& plan) {
    Energy total = 0;
    for (const auto& r : plan.routes)
        for (TsArcId a : r)
            total += ts.arc(a).energy;
    for (const auto& g : plan.grid)
        total += s.grid_rate_at(g.node);
    return total;
}

inline Solution encode(const IpInstance& ip, const Plan& plan) {
    return encode(*ip.scenario, *ip.network, ip.layout, plan);
}

inline Plan decode(const IpInstance& ip, const Solution& sol) { return decode(*ip.network, ip.layout, sol); }

} // namespace v2vc

#endif // V2VC_IP_MODEL_HPP
