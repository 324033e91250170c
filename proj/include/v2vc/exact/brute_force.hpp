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


#ifndef V2VC_EXACT_BRUTE_FORCE_HPP
#define V2VC_EXACT_BRUTE_FORCE_HPP

#include "v2vc/exact/outcome.hpp"

#include <algorithm>
#include <chrono>
#include <cstdint>
#include <functional>
#include <limits>
#include <vector>

namespace v2vc {

struct BruteForceCaps {
    std::int64_t paths_per_ev = 2'000;
    std::int64_t combinations = 2'000'000;
    std::int64_t schedule_nodes = 20'000'000;
};

/// Exhaustive reference solver: every route of every EV, every combination of
/// routes, and every charge schedule consistent with co-location. Only meant
/// for tiny instances; it shares no search logic with solve_bb.
inline SolveOutcome brute_force(const Scenario& s, const BruteForceCaps& caps = {},
                                ObjectiveKind objective = ObjectiveKind::energy) {
    const auto start = std::chrono::steady_clock::now();
    require_valid(s);
    SolveOutcome out;
    const TimeSpaceNetwork ts(s.road, s.horizon);
    const auto n = static_cast<std::int32_t>(s.evs.size());
    const TimeStep T = s.horizon;
    const bool energy = objective == ObjectiveKind::energy;
    const auto finish = [&](SolveStatus status) {
        out.status = status;
        out.stats.wall_ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
        return out;
    };

    Energy max_rate = 0;
    for (const auto& ev : s.evs)
        max_rate = std::max(max_rate, ev.rate);
    for (const auto& [p, rate] : s.grid_rate)
        max_rate = std::max(max_rate, rate);

    // 1. every route per EV, dropping those that run dry even if charged at
    //    the largest rate on every step before
    struct Route {
        std::vector<TsArcId> arcs;
        Energy cost;
    };
    std::vector<std::vector<Route>> routes(static_cast<std::size_t>(n));
    for (std::int32_t i = 0; i < n; ++i) {
        const auto& ev = s.evs[static_cast<std::size_t>(i)];
        const TsNodeId sink = ts.id(ev.destination, T - 1);
        std::vector<TsArcId> stack;
        bool overflow = false;
        std::function<void(TsNodeId, Energy)> walk = [&](TsNodeId at, Energy spent) {
            if (overflow)
                return;
            if (ts.time(at) == T - 1) {
                if (at == sink) {
                    if (static_cast<std::int64_t>(routes[static_cast<std::size_t>(i)].size()) >= caps.paths_per_ev) {
                        overflow = true;
                        return;
                    }
                    routes[static_cast<std::size_t>(i)].push_back({stack, spent});
                }
                return;
            }
            for (TsArcId a : ts.out_arcs(at)) {
                const auto& arc = ts.arc(a);
                const Energy next = spent + arc.energy;
                if (arc.energy > 0 && ev.soc + max_rate * ts.time(arc.head) < next)
                    continue;
                stack.push_back(a);
                walk(arc.head, next);
                stack.pop_back();
            }
        };
        walk(ts.id(ev.origin, 0), 0);
        if (overflow)
            return finish(SolveStatus::cap_exceeded);
        if (routes[static_cast<std::size_t>(i)].empty())
            return finish(SolveStatus::infeasible);
        std::stable_sort(routes[static_cast<std::size_t>(i)].begin(), routes[static_cast<std::size_t>(i)].end(),
                         [](const Route& a, const Route& b) { return a.cost < b.cost; });
    }

    // 2. charge schedules for one route combination: depth-first over steps,
    //    every set of events allowed by co-location at that step
    struct Slot {
        std::vector<NodeId> waiting_at; // node the EV waits at during (t,t+1), -1 if travelling
        std::vector<Energy> arrival;    // energy of arcs ending at t+1
    };
    std::vector<Slot> slots(static_cast<std::size_t>(T));
    std::int64_t schedule_nodes = 0;
    bool schedule_overflow = false;
    const Energy none = std::numeric_limits<Energy>::max();

    std::vector<const Route*> chosen(static_cast<std::size_t>(n));
    Plan best_events;

    const auto schedule = [&](Energy grid_budget) {
        for (auto& sl : slots) {
            sl.waiting_at.assign(static_cast<std::size_t>(n), -1);
            sl.arrival.assign(static_cast<std::size_t>(n), 0);
        }
        for (std::int32_t i = 0; i < n; ++i)
            for (TsArcId a : chosen[static_cast<std::size_t>(i)]->arcs) {
                const auto& arc = ts.arc(a);
                const auto t = static_cast<std::size_t>(ts.time(arc.tail));
                if (arc.kind == TsArcKind::waiting)
                    slots[t].waiting_at[static_cast<std::size_t>(i)] = ts.road_node(arc.tail);
                slots[static_cast<std::size_t>(ts.time(arc.head))].arrival[static_cast<std::size_t>(i)] += arc.energy;
            }
        // arrival[t] holds arcs ending at t; shift so slot t reports arcs ending at t+1
        for (TimeStep t = 0; t + 1 < T; ++t)
            slots[static_cast<std::size_t>(t)].arrival = slots[static_cast<std::size_t>(t) + 1].arrival;

        std::vector<Energy> soc(static_cast<std::size_t>(n));
        for (std::int32_t i = 0; i < n; ++i)
            soc[static_cast<std::size_t>(i)] = s.evs[static_cast<std::size_t>(i)].soc;
        Plan events;
        Energy found = none;
        Plan found_events;

        std::function<void(TimeStep, Energy)> step = [&](TimeStep t, Energy grid_cost) {
            if (schedule_overflow || found == 0)
                return;
            if (++schedule_nodes > caps.schedule_nodes) {
                schedule_overflow = true;
                return;
            }
            if (t == T - 1) {
                if (grid_cost < found) {
                    found = grid_cost;
                    found_events = events;
                }
                return;
            }
            const auto& sl = slots[static_cast<std::size_t>(t)];
            // candidate events at this step
            std::vector<Transfer> z;
            std::vector<GridCharge> y;
            for (std::int32_t r = 0; r < n; ++r) {
                const NodeId v = sl.waiting_at[static_cast<std::size_t>(r)];
                if (v < 0)
                    continue;
                if (s.road.kind(v) == NodeKind::parking)
                    y.push_back({r, v, t});
                if (s.road.kind(v) != NodeKind::meeting)
                    continue;
                for (std::int32_t g = 0; g < n; ++g)
                    if (g != r && sl.waiting_at[static_cast<std::size_t>(g)] == v)
                        z.push_back({r, g, v, t});
            }
            const std::size_t total = z.size() + y.size();
            if (total > 20) {
                schedule_overflow = true;
                return;
            }
            for (std::uint32_t mask = 0; mask < (1u << total); ++mask) {
                std::vector<int> gets(static_cast<std::size_t>(n), 0), gives(static_cast<std::size_t>(n), 0);
                bool ok = true;
                Energy extra = 0;
                std::vector<Energy> next = soc;
                for (std::size_t k = 0; k < z.size() && ok; ++k) {
                    if (!(mask >> k & 1u))
                        continue;
                    const auto& e = z[k];
                    if (++gets[static_cast<std::size_t>(e.receiver)] > 1 || ++gives[static_cast<std::size_t>(e.giver)] > 1)
                        ok = false;
                    for (std::size_t q = 0; q < k; ++q)
                        if ((mask >> q & 1u) && z[q].receiver == e.giver && z[q].giver == e.receiver)
                            ok = false;
                    const Energy amount = s.evs[static_cast<std::size_t>(e.giver)].rate;
                    next[static_cast<std::size_t>(e.receiver)] += amount;
                    next[static_cast<std::size_t>(e.giver)] -= amount;
                }
                if (!ok)
                    continue;
                for (std::size_t k = 0; k < y.size(); ++k)
                    if (mask >> (z.size() + k) & 1u) {
                        next[static_cast<std::size_t>(y[k].ev)] += s.grid_rate_at(y[k].node);
                        if (energy)
                            extra += s.grid_rate_at(y[k].node);
                    }
                if (grid_cost + extra >= std::min(found, grid_budget))
                    continue;
                for (std::int32_t i = 0; i < n && ok; ++i) {
                    next[static_cast<std::size_t>(i)] -= sl.arrival[static_cast<std::size_t>(i)];
                    if (next[static_cast<std::size_t>(i)] < 0 ||
                        next[static_cast<std::size_t>(i)] > s.evs[static_cast<std::size_t>(i)].max_soc)
                        ok = false;
                }
                if (!ok)
                    continue;
                const auto saved = soc;
                const auto marks = std::make_pair(events.transfers.size(), events.grid.size());
                for (std::size_t k = 0; k < z.size(); ++k)
                    if (mask >> k & 1u)
                        events.transfers.push_back(z[k]);
                for (std::size_t k = 0; k < y.size(); ++k)
                    if (mask >> (z.size() + k) & 1u)
                        events.grid.push_back(y[k]);
                soc = next;
                step(t + 1, grid_cost + extra);
                soc = saved;
                events.transfers.resize(marks.first);
                events.grid.resize(marks.second);
            }
        };
        step(0, 0);
        if (found != none)
            best_events = found_events;
        return found;
    };

    // 3. route combinations in order of route cost, bounded by the incumbent
    std::vector<Energy> cheapest_rest(static_cast<std::size_t>(n) + 1, 0);
    for (std::int32_t i = n - 1; i >= 0; --i)
        cheapest_rest[static_cast<std::size_t>(i)] =
            cheapest_rest[static_cast<std::size_t>(i) + 1] + (energy ? routes[static_cast<std::size_t>(i)].front().cost : 0);
    Energy best = none;
    std::int64_t combinations = 0;
    bool combo_overflow = false;
    std::function<void(std::int32_t, Energy)> combine = [&](std::int32_t i, Energy cost) {
        if (combo_overflow || schedule_overflow || (!energy && best != none))
            return;
        if (i == n) {
            if (++combinations > caps.combinations) {
                combo_overflow = true;
                return;
            }
            const Energy budget = best == none ? none : best - cost;
            const Energy grid = schedule(budget);
            if (grid != none && cost + grid < best) {
                best = cost + grid;
                Plan p = best_events;
                for (std::int32_t k = 0; k < n; ++k)
                    p.routes.push_back(chosen[static_cast<std::size_t>(k)]->arcs);
                p.normalize();
                out.plan = std::move(p);
                out.objective = best;
                out.incumbents.push_back(best);
            }
            return;
        }
        for (const auto& r : routes[static_cast<std::size_t>(i)]) {
            const Energy c = energy ? r.cost : 0;
            if (best != none && cost + c + cheapest_rest[static_cast<std::size_t>(i) + 1] >= best)
                break;
            chosen[static_cast<std::size_t>(i)] = &r;
            combine(i + 1, cost + c);
            if (combo_overflow || schedule_overflow || (!energy && best != none))
                return;
        }
    };
    combine(0, 0);
    out.stats.nodes = combinations;
    if (combo_overflow || schedule_overflow)
        return finish(SolveStatus::cap_exceeded);
    return finish(best == none ? SolveStatus::infeasible : SolveStatus::optimal);
}

} // namespace v2vc

#endif // V2VC_EXACT_BRUTE_FORCE_HPP
