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

#ifndef V2VC_VERIFIER_HPP
#define V2VC_VERIFIER_HPP

#include "v2vc/ip_model.hpp"
#include "v2vc/plan.hpp"

#include <map>
#include <sstream>
#include <string>
#include <tuple>
#include <vector>

namespace v2vc {

enum class FindingTag {
    position_mismatch,
    negative_soc,
    soc_above_max,
    concurrent_charge,
    charging_while_absent,
    non_binary,
    slack_mismatch,
};

inline std::string_view to_string(FindingTag tag) {
    switch (tag) {
    case FindingTag::position_mismatch:
        return "position mismatch";
    case FindingTag::negative_soc:
        return "negative SOC";
    case FindingTag::soc_above_max:
        return "SOC above MAXSOC";
    case FindingTag::concurrent_charge:
        return "concurrent-charge violation";
    case FindingTag::charging_while_absent:
        return "charging while absent/wrong node kind";
    case FindingTag::non_binary:
        return "non-binary decision value";
    default:
        return "slack mismatch";
    }
}

struct Finding {
    FindingTag tag;
    std::int32_t ev = -1;
    TimeStep t = -1;
    std::string message;
};

struct RowViolation {
    Index row;
    Index lhs;
    Index rhs;
};

struct BoundViolation {
    Index col;
    Index value;
    Index lower;
    Index upper;
};

struct VerificationReport {
    std::vector<RowViolation> violated_rows;
    std::vector<BoundViolation> bound_violations;
    std::vector<Finding> findings;

    bool accepted() const { return violated_rows.empty() && bound_violations.empty() && findings.empty(); }

    bool has(FindingTag tag) const {
        for (const auto& f : findings)
            if (f.tag == tag)
                return true;
        return false;
    }

    std::string summary() const {
        if (accepted())
            return "accepted";
        std::ostringstream out;
        out << "rejected: " << violated_rows.size() << " violated rows, " << bound_violations.size()
            << " bound violations, " << findings.size() << " findings";
        if (!findings.empty())
            out << " (first: " << to_string(findings.front().tag) << ": " << findings.front().message << ")";
        return out.str();
    }
};

enum class SignMode {
    corrected, // one-way slacks in [0,1]: at most one direction per pair
    literal,   // one-way slacks in [-1,0] as typeset, forcing a transfer every step
};

/// Exact check of A x = b and l <= x <= u. Linear in the nonzeros of A.
inline VerificationReport verify_algebraic(const IpInstance& ip, const Solution& sol,
                                           SignMode mode = SignMode::corrected) {
    if (static_cast<Index>(sol.values.size()) != ip.cols())
        throw Error("verify_algebraic: solution length does not match the column count");
    VerificationReport report;
    const auto& A = ip.A;
    for (Index r = 0; r < A.rows; ++r) {
        Index lhs = 0;
        for (Index k = A.row_start[static_cast<std::size_t>(r)]; k < A.row_start[static_cast<std::size_t>(r) + 1]; ++k)
            lhs += A.value[static_cast<std::size_t>(k)] *
                   sol.values[static_cast<std::size_t>(A.col_index[static_cast<std::size_t>(k)])];
        if (lhs != ip.b[static_cast<std::size_t>(r)])
            report.violated_rows.push_back({r, lhs, ip.b[static_cast<std::size_t>(r)]});
    }
    const Index literal_begin = ip.layout.block_begin(Block::one_way);
    const Index literal_end = ip.layout.block_end(Block::one_way);
    for (std::size_t c = 0; c < sol.values.size(); ++c) {
        Index lo = ip.lower[c];
        Index hi = ip.upper[c];
        if (mode == SignMode::literal && static_cast<Index>(c) >= literal_begin && static_cast<Index>(c) < literal_end) {
            lo = -1;
            hi = 0;
        }
        if (sol.values[c] < lo || sol.values[c] > hi)
            report.bound_violations.push_back({static_cast<Index>(c), sol.values[c], lo, hi});
    }
    return report;
}

/// Re-simulates a structured plan: route contiguity and endpoints, charge
/// bounds, co-location and node kind of every charge event, and one partner
/// per direction and step.
inline std::vector<Finding> check_plan(const Scenario& s, const TimeSpaceNetwork& ts, const Plan& plan) {
    std::vector<Finding> out;
    const auto n = static_cast<std::int32_t>(s.evs.size());
    const TimeStep last = s.horizon - 1;
    if (plan.routes.size() != s.evs.size()) {
        out.push_back({FindingTag::position_mismatch, -1, -1, "plan has a route count different from the EV count"});
        return out;
    }
    std::vector<std::vector<std::uint8_t>> waiting(static_cast<std::size_t>(n),
                                                   std::vector<std::uint8_t>(ts.node_count(), 0));
    for (std::int32_t i = 0; i < n; ++i) {
        const auto& ev = s.evs[static_cast<std::size_t>(i)];
        auto route = plan.routes[static_cast<std::size_t>(i)];
        std::stable_sort(route.begin(), route.end(),
                         [&](TsArcId a, TsArcId b) { return ts.time(ts.arc(a).tail) < ts.time(ts.arc(b).tail); });
        TsNodeId at = ts.id(ev.origin, 0);
        bool ok = true;
        for (TsArcId a : route) {
            if (a < 0 || static_cast<std::size_t>(a) >= ts.arc_count() || ts.arc(a).tail != at) {
                out.push_back({FindingTag::position_mismatch, i, ts.time(at),
                               ev.id + ": route is not a contiguous path from (s_i,0)"});
                ok = false;
                break;
            }
            if (ts.arc(a).kind == TsArcKind::waiting)
                waiting[static_cast<std::size_t>(i)][static_cast<std::size_t>(at)] = 1;
            at = ts.arc(a).head;
        }
        if (ok && at != ts.id(ev.destination, last))
            out.push_back({FindingTag::position_mismatch, i, ts.time(at),
                           ev.id + ": route does not end at (f_i,T-1)"});
    }

    const auto present = [&](std::int32_t ev, NodeId v, TimeStep t) {
        return ev >= 0 && ev < n && t >= 0 && t < last && s.road.contains(v) &&
               waiting[static_cast<std::size_t>(ev)][static_cast<std::size_t>(ts.id(v, t))] != 0;
    };
    std::map<std::pair<std::int32_t, TimeStep>, int> receives, gives;
    std::map<std::tuple<std::int32_t, std::int32_t, NodeId, TimeStep>, int> pair_use;
    for (const auto& tr : plan.transfers) {
        if (tr.receiver < 0 || tr.receiver >= n || tr.giver < 0 || tr.giver >= n || tr.receiver == tr.giver) {
            out.push_back({FindingTag::charging_while_absent, tr.receiver, tr.t, "transfer names an invalid EV pair"});
            continue;
        }
        if (!s.road.contains(tr.node) || s.road.kind(tr.node) != NodeKind::meeting)
            out.push_back({FindingTag::charging_while_absent, tr.receiver, tr.t,
                           "V2VC at node " + std::to_string(tr.node) + " which is not a meeting point"});
        else if (!present(tr.receiver, tr.node, tr.t) || !present(tr.giver, tr.node, tr.t))
            out.push_back({FindingTag::charging_while_absent, tr.receiver, tr.t,
                           "V2VC at node " + std::to_string(tr.node) + " t=" + std::to_string(tr.t) +
                               " while a participant is not waiting there"});
        ++receives[{tr.receiver, tr.t}];
        ++gives[{tr.giver, tr.t}];
        ++pair_use[{std::min(tr.receiver, tr.giver), std::max(tr.receiver, tr.giver), tr.node, tr.t}];
    }
    for (const auto& [key, count] : receives)
        if (count > 1)
            out.push_back({FindingTag::concurrent_charge, key.first, key.second, "charged by more than one EV"});
    for (const auto& [key, count] : gives)
        if (count > 1)
            out.push_back({FindingTag::concurrent_charge, key.first, key.second, "charges more than one EV"});
    for (const auto& [key, count] : pair_use)
        if (count > 1)
            out.push_back({FindingTag::concurrent_charge, std::get<0>(key), std::get<3>(key),
                           "pair charges in both directions"});
    for (const auto& g : plan.grid) {
        if (g.ev < 0 || g.ev >= n || !s.road.contains(g.node) || s.road.kind(g.node) != NodeKind::parking)
            out.push_back({FindingTag::charging_while_absent, g.ev, g.t,
                           "G2VC at node " + std::to_string(g.node) + " which is not a parking station"});
        else if (!present(g.ev, g.node, g.t))
            out.push_back({FindingTag::charging_while_absent, g.ev, g.t, "G2VC while not parked"});
    }
    std::map<std::tuple<std::int32_t, NodeId, TimeStep>, int> grid_use;
    for (const auto& g : plan.grid)
        if (++grid_use[{g.ev, g.node, g.t}] == 2)
            out.push_back({FindingTag::concurrent_charge, g.ev, g.t, "duplicate G2VC event"});

    // charge simulation needs every event to index a real EV and time step
    for (const auto& tr : plan.transfers)
        if (tr.receiver < 0 || tr.receiver >= n || tr.giver < 0 || tr.giver >= n || tr.t < 0 || tr.t >= last)
            return out;
    for (const auto& g : plan.grid)
        if (g.ev < 0 || g.ev >= n || g.t < 0 || g.t >= last)
            return out;
    for (std::int32_t i = 0; i < n; ++i) {
        const auto& ev = s.evs[static_cast<std::size_t>(i)];
        bool route_ok = true;
        for (const auto& f : out)
            if (f.tag == FindingTag::position_mismatch && f.ev == i)
                route_ok = false;
        if (!route_ok)
            continue;
        const auto soc = soc_series(s, ts, plan, static_cast<std::size_t>(i));
        for (TimeStep t = 1; t <= last; ++t)
            if (soc[static_cast<std::size_t>(t)] < 0) {
                out.push_back({FindingTag::negative_soc, i, t,
                               ev.id + ": SOC " + std::to_string(soc[static_cast<std::size_t>(t)]) + " at t=" +
                                   std::to_string(t)});
                break;
            }
        for (TimeStep t = 1; t <= last; ++t)
            if (soc[static_cast<std::size_t>(t)] > ev.max_soc) {
                out.push_back({FindingTag::soc_above_max, i, t,
                               ev.id + ": SOC " + std::to_string(soc[static_cast<std::size_t>(t)]) +
                                   " above MAXSOC at t=" + std::to_string(t)});
                break;
            }
    }
    return out;
}

/// Semantic check of a full column vector: decodes it, re-simulates the plan,
/// and requires every slack to hold the value its row implies.
inline VerificationReport verify_semantic(const Scenario& s, const TimeSpaceNetwork& ts, const VariableLayout& layout,
                                          const Solution& sol) {
    if (static_cast<Index>(sol.values.size()) != layout.cols())
        throw Error("verify_semantic: solution length does not match the column count");
    VerificationReport report;
    for (Index c = 0; c < layout.block_end(Block::z); ++c) {
        const Index v = sol.values[static_cast<std::size_t>(c)];
        if (v != 0 && v != 1) {
            report.findings.push_back({FindingTag::non_binary, -1, -1,
                                       "column " + std::to_string(c) + " (" + std::string(to_string(layout.block_of(c))) +
                                           ") has value " + std::to_string(v)});
        }
    }
    if (!report.findings.empty())
        return report;
    const Plan plan = decode(ts, layout, sol);
    report.findings = check_plan(s, ts, plan);
    if (!report.findings.empty())
        return report;
    const Solution expected = encode(s, ts, layout, plan);
    for (Index c = layout.block_end(Block::z); c < layout.cols(); ++c)
        if (expected.values[static_cast<std::size_t>(c)] != sol.values[static_cast<std::size_t>(c)]) {
            const auto info = layout.describe(c);
            report.findings.push_back({FindingTag::slack_mismatch, info.ev, info.t,
                                       "slack column " + std::to_string(c) + " (" + std::string(to_string(info.block)) +
                                           ") holds " + std::to_string(sol.values[static_cast<std::size_t>(c)]) +
                                           ", expected " + std::to_string(expected.values[static_cast<std::size_t>(c)])});
        }
    return report;
}

inline VerificationReport verify_semantic(const Scenario& s, const Solution& sol) {
    const TimeSpaceNetwork ts(s.road, s.horizon);
    const VariableLayout layout(s, ts.arc_count());
    return verify_semantic(s, ts, layout, sol);
}

/// Plan-level semantic check, for instances too large to encode as a vector.
inline VerificationReport verify_plan(const Scenario& s, const TimeSpaceNetwork& ts, const Plan& plan) {
    VerificationReport report;
    report.findings = check_plan(s, ts, plan);
    return report;
}

struct SocPoint {
    TimeStep t;
    Energy soc;
};

inline std::vector<SocPoint> soc_trajectory(const Scenario& s, const TimeSpaceNetwork& ts, const Plan& plan,
                                            std::size_t ev) {
    if (ev >= s.evs.size())
        throw Error("soc_trajectory: EV index out of range");
    for (const auto& f : check_plan(s, ts, plan))
        if (f.ev == static_cast<std::int32_t>(ev) || f.ev < 0)
            throw Error("soc_trajectory: plan is not valid for " + s.evs[ev].id + ": " + f.message);
    const auto series = soc_series(s, ts, plan, ev);
    std::vector<SocPoint> out;
    for (std::size_t t = 0; t < series.size(); ++t)
        out.push_back({static_cast<TimeStep>(t), series[t]});
    return out;
}

inline std::vector<SocPoint> soc_trajectory(const Scenario& s, const Solution& sol, std::size_t ev) {
    const TimeSpaceNetwork ts(s.road, s.horizon);
    const VariableLayout layout(s, ts.arc_count());
    const auto report = verify_semantic(s, ts, layout, sol);
    if (!report.accepted())
        throw Error("soc_trajectory: solution is not valid: " + report.summary());
    return soc_trajectory(s, ts, decode(ts, layout, sol), ev);
}

/// CSV with header `ev,t,soc`, one row per EV and time step.
inline std::string trajectory_csv(const Scenario& s, const TimeSpaceNetwork& ts, const Plan& plan) {
    std::ostringstream out;
    out << "ev,t,soc\n";
    for (std::size_t i = 0; i < s.evs.size(); ++i)
        for (const auto& p : soc_trajectory(s, ts, plan, i))
            out << s.evs[i].id << ',' << p.t << ',' << p.soc << '\n';
    return out.str();
}

} // namespace v2vc

#endif // V2VC_VERIFIER_HPP
