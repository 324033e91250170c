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


#ifndef V2VC_REDUCTION_REDUCE_HPP
#define V2VC_REDUCTION_REDUCE_HPP

#include "v2vc/generator.hpp"
#include "v2vc/ip_model.hpp"
#include "v2vc/reduction/cnf.hpp"
#include "v2vc/verifier.hpp"

#include <algorithm>
#include <string>
#include <vector>

namespace v2vc {

struct AtomNodes {
    NodeId start, yes, no; // s_i, true_i, false_i
};

struct ClauseNodes {
    NodeId sat, finish; // sat_j, f_j
};

/// Which formula element an EV stands for: an occurrence of an atom (atom,
/// occurrence, clause, all 0-based) or a clause (atom = -1).
struct EvRole {
    int atom = -1;
    int occurrence = -1;
    int clause = -1;
    int literal = 0;
};

/// Scenario built from a formula plus the bookkeeping needed to translate
/// witnesses in both directions.
struct ReducedInstance {
    CnfFormula formula;
    Scenario scenario;
    std::vector<AtomNodes> atom_nodes;
    std::vector<ClauseNodes> clause_nodes;
    std::vector<EvRole> roles;
    std::vector<int> k; // occurrences per atom
    int K = 0;          // largest occurrence count

    /// Index of the EV for occurrence `o` of atom `i`, or -1.
    std::int32_t atom_ev(int i, int o) const {
        for (std::size_t e = 0; e < roles.size(); ++e)
            if (roles[e].atom == i && roles[e].occurrence == o)
                return static_cast<std::int32_t>(e);
        return -1;
    }
    std::int32_t clause_ev(int j) const {
        for (std::size_t e = 0; e < roles.size(); ++e)
            if (roles[e].atom < 0 && roles[e].clause == j)
                return static_cast<std::int32_t>(e);
        return -1;
    }
};

/// Builds the charging instance that is feasible exactly when the formula is
/// satisfiable.
///
/// Per clause c_j: meeting point sat_j, node f_j, arc sat_j -> f_j, and an EV
/// at sat_j bound for f_j with an empty battery. Per atom x_i: node s_i,
/// meeting points true_i and false_i, arcs from s_i to both. For every clause
/// containing x_i: arcs true_i -> f_j and false_i -> f_j, plus true_i -> sat_j
/// for a positive and false_i -> sat_j for a negative literal. Occurrence o of
/// x_i (clauses in order) gets an EV from s_i to the clause's f_j holding 1
/// unit, or 3 k_i + 1 units for the first occurrence. All arcs cost 1 unit and
/// 1 step, every EV hands over 1 unit per step, and T = 3K + 6.
inline ReducedInstance reduce_to_v2vc(const CnfFormula& f) {
    const auto bad = f.violations();
    if (!bad.empty())
        throw Error("reduce_to_v2vc: " + bad.front());
    ReducedInstance ri;
    ri.formula = f;
    auto& s = ri.scenario;
    const int n = f.atoms;
    const int m = static_cast<int>(f.clauses.size());

    for (int i = 0; i < n; ++i) {
        const auto id = std::to_string(i + 1);
        AtomNodes a;
        a.start = s.road.add_node(NodeKind::plain, "s" + id);
        a.yes = s.road.add_node(NodeKind::meeting, "true" + id);
        a.no = s.road.add_node(NodeKind::meeting, "false" + id);
        ri.atom_nodes.push_back(a);
    }
    for (int j = 0; j < m; ++j) {
        const auto id = std::to_string(j + 1);
        ClauseNodes c;
        c.sat = s.road.add_node(NodeKind::meeting, "sat" + id);
        c.finish = s.road.add_node(NodeKind::plain, "f" + id);
        ri.clause_nodes.push_back(c);
    }
    for (int j = 0; j < m; ++j)
        s.road.add_arc(ri.clause_nodes[static_cast<std::size_t>(j)].sat,
                       ri.clause_nodes[static_cast<std::size_t>(j)].finish, 1, 1);
    for (const auto& a : ri.atom_nodes) {
        s.road.add_arc(a.start, a.yes, 1, 1);
        s.road.add_arc(a.start, a.no, 1, 1);
    }
    for (int j = 0; j < m; ++j) {
        const auto& clause = f.clauses[static_cast<std::size_t>(j)];
        const auto& cn = ri.clause_nodes[static_cast<std::size_t>(j)];
        for (int i = 0; i < n; ++i) {
            const bool pos = std::find(clause.begin(), clause.end(), i + 1) != clause.end();
            const bool neg = std::find(clause.begin(), clause.end(), -(i + 1)) != clause.end();
            if (!pos && !neg)
                continue;
            const auto& a = ri.atom_nodes[static_cast<std::size_t>(i)];
            s.road.add_arc(a.yes, cn.finish, 1, 1);
            s.road.add_arc(a.no, cn.finish, 1, 1);
            if (pos)
                s.road.add_arc(a.yes, cn.sat, 1, 1);
            if (neg)
                s.road.add_arc(a.no, cn.sat, 1, 1);
        }
    }

    ri.k.assign(static_cast<std::size_t>(n), 0);
    for (const auto& clause : f.clauses)
        for (int lit : clause)
            ++ri.k[static_cast<std::size_t>(std::abs(lit) - 1)];
    ri.K = n ? *std::max_element(ri.k.begin(), ri.k.end()) : 0;
    // room for the first occurrence's charge and for any clause count
    const Energy cap = std::max<Energy>(3 * m + 1, 3 * ri.K + 1);

    for (int i = 0; i < n; ++i) {
        int o = 0;
        for (int j = 0; j < m; ++j)
            for (int lit : f.clauses[static_cast<std::size_t>(j)]) {
                if (std::abs(lit) != i + 1)
                    continue;
                const Energy soc = o == 0 ? 3 * ri.k[static_cast<std::size_t>(i)] + 1 : 1;
                s.evs.push_back({"v" + std::to_string(i + 1) + "_" + std::to_string(o + 1),
                                 ri.atom_nodes[static_cast<std::size_t>(i)].start,
                                 ri.clause_nodes[static_cast<std::size_t>(j)].finish, soc, cap, 1});
                ri.roles.push_back({i, o, j, lit});
                ++o;
            }
    }
    for (int j = 0; j < m; ++j) {
        s.evs.push_back({"vsat" + std::to_string(j + 1), ri.clause_nodes[static_cast<std::size_t>(j)].sat,
                         ri.clause_nodes[static_cast<std::size_t>(j)].finish, 0, cap, 1});
        ri.roles.push_back({-1, -1, j, 0});
    }
    s.horizon = 3 * ri.K + 6;
    return ri;
}

namespace detail {

inline TsArcId travel_arc(const TimeSpaceNetwork& ts, NodeId from, NodeId to, TimeStep t) {
    for (TsArcId a : ts.out_arcs(ts.id(from, t))) {
        const auto& arc = ts.arc(a);
        if (arc.kind == TsArcKind::travel && arc.head == ts.id(to, t + 1))
            return a;
    }
    throw Error("reduction: missing arc");
}

/// Route visiting `stops` (node, departure time) in order, waiting in between,
/// and ending with waits at the last stop until T-1.
inline std::vector<TsArcId> stop_route(const TimeSpaceNetwork& ts, NodeId origin,
                                       const std::vector<std::pair<NodeId, TimeStep>>& stops) {
    std::vector<TsArcId> route;
    NodeId at = origin;
    TimeStep t = 0;
    for (const auto& [next, depart] : stops) {
        for (; t < depart; ++t)
            route.push_back(ts.waiting_arc(at, t));
        route.push_back(travel_arc(ts, at, next, t));
        at = next;
        ++t;
    }
    for (; t + 1 < ts.horizon(); ++t)
        route.push_back(ts.waiting_arc(at, t));
    return route;
}

} // namespace detail

/// Plan realising a satisfying assignment. Every occurrence EV of x_i drives
/// to true_i or false_i at t = 0. There the first occurrence charges each
/// sibling in turn: 1 unit for a sibling that drives straight to its f_j, 3
/// units for the one chosen to serve its clause, which detours via sat_j,
/// hands 1 unit to the clause EV and continues to f_j.
inline Plan witness_plan(const ReducedInstance& ri, const TruthAssignment& a) {
    if (!satisfies(ri.formula, a))
        throw Error("witness_forward: assignment does not satisfy the formula");
    const auto& s = ri.scenario;
    const TimeSpaceNetwork ts(s.road, s.horizon);
    const int m = static_cast<int>(ri.formula.clauses.size());

    // one serving occurrence per clause: the first literal made true
    std::vector<char> serves(ri.roles.size(), 0);
    for (int j = 0; j < m; ++j)
        for (std::size_t e = 0; e < ri.roles.size(); ++e) {
            const auto& r = ri.roles[e];
            if (r.atom >= 0 && r.clause == j && a[static_cast<std::size_t>(r.atom)] == (r.literal > 0)) {
                serves[e] = 1;
                break;
            }
        }

    Plan plan;
    plan.routes.resize(s.evs.size());
    const auto finish_route = [&](std::size_t e, NodeId side, TimeStep depart) {
        const auto& r = ri.roles[e];
        const auto& cn = ri.clause_nodes[static_cast<std::size_t>(r.clause)];
        const NodeId start = ri.atom_nodes[static_cast<std::size_t>(r.atom)].start;
        if (!serves[e]) {
            plan.routes[e] = detail::stop_route(ts, start, {{side, 0}, {cn.finish, depart}});
            return;
        }
        plan.routes[e] = detail::stop_route(ts, start, {{side, 0}, {cn.sat, depart}, {cn.finish, depart + 2}});
        const auto clause_ev = ri.clause_ev(r.clause);
        plan.transfers.push_back({clause_ev, static_cast<std::int32_t>(e), cn.sat, depart + 1});
        plan.routes[static_cast<std::size_t>(clause_ev)] = detail::stop_route(ts, cn.sat, {{cn.finish, depart + 2}});
    };
    for (std::size_t i = 0; i < ri.atom_nodes.size(); ++i) {
        if (ri.k[i] == 0)
            continue;
        const NodeId side = a[i] ? ri.atom_nodes[i].yes : ri.atom_nodes[i].no;
        const auto first = static_cast<std::size_t>(ri.atom_ev(static_cast<int>(i), 0));
        TimeStep t = 1;
        for (int o = 1; o < ri.k[i]; ++o) {
            const auto e = static_cast<std::size_t>(ri.atom_ev(static_cast<int>(i), o));
            const TimeStep steps = serves[e] ? 3 : 1;
            for (TimeStep q = 0; q < steps; ++q)
                plan.transfers.push_back({static_cast<std::int32_t>(e), static_cast<std::int32_t>(first), side, t + q});
            t += steps;
            finish_route(e, side, t);
        }
        finish_route(first, side, t);
    }
    plan.normalize();
    return plan;
}

/// Column vector of witness_plan under the feasibility objective; checked by
/// both verifiers before it is returned.
inline Solution witness_forward(const ReducedInstance& ri, const TruthAssignment& a) {
    const auto plan = witness_plan(ri, a);
    const IpInstance ip = build_ip(ri.scenario, ObjectiveKind::feasibility);
    auto x = encode(ip, plan);
    const auto alg = verify_algebraic(ip, x);
    const auto sem = verify_semantic(ri.scenario, x);
    if (!alg.accepted() || !sem.accepted())
        throw Error("witness_forward: witness is rejected: " + (alg.accepted() ? sem : alg).summary());
    return x;
}

/// Assignment read off a feasible plan: x_i is true iff the first occurrence
/// EV of x_i leaves s_i towards true_i (atoms without occurrences are false).
/// Throws if the plan is infeasible or the result does not satisfy the formula.
inline TruthAssignment witness_backward(const ReducedInstance& ri, const Plan& plan) {
    const TimeSpaceNetwork ts(ri.scenario.road, ri.scenario.horizon);
    const auto findings = check_plan(ri.scenario, ts, plan);
    if (!findings.empty())
        throw Error("witness_backward: plan is not feasible: " + findings.front().message);
    TruthAssignment a(ri.atom_nodes.size(), false);
    for (std::size_t i = 0; i < a.size(); ++i) {
        if (ri.k[i] == 0)
            continue;
        const auto e = static_cast<std::size_t>(ri.atom_ev(static_cast<int>(i), 0));
        for (TsArcId arc : plan.routes[e]) {
            const auto& ta = ts.arc(arc);
            if (ta.kind == TsArcKind::travel && ts.road_node(ta.tail) == ri.atom_nodes[i].start) {
                a[i] = ts.road_node(ta.head) == ri.atom_nodes[i].yes;
                break;
            }
        }
    }
    if (!satisfies(ri.formula, a))
        throw Error("witness_backward: extracted assignment does not satisfy the formula");
    return a;
}

inline TruthAssignment witness_backward(const ReducedInstance& ri, const Solution& x) {
    const IpInstance ip = build_ip(ri.scenario, ObjectiveKind::feasibility);
    const auto report = verify_semantic(ri.scenario, x);
    if (!report.accepted())
        throw Error("witness_backward: solution is rejected: " + report.summary());
    return witness_backward(ri, decode(*ip.network, ip.layout, x));
}

/// Random formula with 1..max_atoms atoms and 1..max_clauses clauses. Each
/// clause has 1..min(3, atoms) literals over distinct atoms.
inline CnfFormula random_cnf(std::uint64_t seed, int max_atoms = 3, int max_clauses = 4) {
    detail::Draw draw(seed);
    CnfFormula f;
    f.atoms = static_cast<int>(draw.uniform(1, max_atoms));
    const auto m = draw.uniform(1, max_clauses);
    std::vector<int> atoms(static_cast<std::size_t>(f.atoms));
    for (int i = 0; i < f.atoms; ++i)
        atoms[static_cast<std::size_t>(i)] = i + 1;
    for (std::int64_t j = 0; j < m; ++j) {
        const auto len = static_cast<std::size_t>(draw.uniform(1, std::min(3, f.atoms)));
        draw.shuffle(atoms);
        std::vector<int> clause;
        for (std::size_t q = 0; q < len; ++q)
            clause.push_back(draw.uniform(0, 1) == 1 ? atoms[q] : -atoms[q]);
        f.clauses.push_back(std::move(clause));
    }
    return f;
}

} // namespace v2vc

#endif // V2VC_REDUCTION_REDUCE_HPP
