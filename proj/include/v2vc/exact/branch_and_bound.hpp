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


#ifndef V2VC_EXACT_BRANCH_AND_BOUND_HPP
#define V2VC_EXACT_BRANCH_AND_BOUND_HPP

#include "v2vc/exact/outcome.hpp"
#include "v2vc/labels.hpp"
#include "v2vc/verifier.hpp"

#include <algorithm>
#include <chrono>
#include <cstdint>
#include <cstring>
#include <functional>
#include <limits>
#include <numeric>
#include <optional>
#include <set>
#include <string>
#include <unordered_map>
#include <vector>

namespace v2vc {

struct BranchAndBoundOptions {
    std::int64_t budget_nodes = 5'000'000;
    ObjectiveKind objective = ObjectiveKind::energy;
    std::size_t memo_limit = 2'000'000;
    std::size_t max_time_space_nodes = 4'000; // all-pairs labels are quadratic in this
    std::optional<Plan> incumbent;             // known feasible plan to start from
};

namespace detail {

/// Depth-first search over time steps. At each step every free EV picks its
/// next time-space arc (EV id order), then the charge events among EVs waiting
/// together are chosen. Search states at step boundaries are memoised.
///
/// Pruning is exact:
///  - an EV must keep a finite backward label and cannot start an arc it
///    lacks the charge for;
///  - an EV that waited without charging may not move on the next step (any
///    such wait can be pushed after the move without changing cost or
///    feasibility), so it must stay until it charges there or the horizon ends;
///  - EVs that can still be co-located form groups that exchange energy only
///    among themselves; every group without grid access needs non-negative
///    total spare charge;
///  - cost bound: spent energy plus remaining backward labels plus the least
///    detour a short EV and its partner need to meet.
class BranchAndBound {
  public:
    BranchAndBound(const Scenario& s, const BranchAndBoundOptions& opt)
        : s_(s), opt_(opt), ts_(s.road, s.horizon), n_(static_cast<std::int32_t>(s.evs.size())), T_(s.horizon) {}

    SolveOutcome run() {
        const auto start = std::chrono::steady_clock::now();
        SolveOutcome out = search();
        out.stats.nodes = nodes_;
        out.stats.memo_hits = memo_hits_;
        out.stats.wall_ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
        return out;
    }

  private:
    static constexpr Energy kInf = std::numeric_limits<Energy>::max() / 4;

    struct EvState {
        TsNodeId at;    // where the EV is free next
        Energy soc;     // charge at the current step boundary
        Energy pending; // energy of the arc in progress, charged on arrival
        bool idle;      // waited without charging on the previous step
    };

    SolveOutcome search() {
        SolveOutcome out;
        if (ts_.node_count() > opt_.max_time_space_nodes)
            throw Error("solve_bb: time-space network has " + std::to_string(ts_.node_count()) +
                        " nodes, above the limit of " + std::to_string(opt_.max_time_space_nodes));
        energy_ = opt_.objective == ObjectiveKind::energy;
        prepare();
        for (std::int32_t i = 0; i < n_; ++i) {
            const auto& ev = s_.evs[static_cast<std::size_t>(i)];
            const TsNodeId origin = ts_.id(ev.origin, 0);
            if (back(i, origin) >= kInf) {
                out.status = SolveStatus::infeasible;
                return out;
            }
            state_.push_back({origin, ev.soc, 0, false});
        }
        if (opt_.incumbent) {
            const auto findings = check_plan(s_, ts_, *opt_.incumbent);
            if (!findings.empty())
                throw Error("solve_bb: starting plan is rejected: " + findings.front().message);
            best_ = plan_objective(s_, ts_, *opt_.incumbent, opt_.objective);
            best_plan_ = *opt_.incumbent;
            best_plan_->normalize();
            incumbents_.push_back(best_);
        }
        route_.assign(static_cast<std::size_t>(n_), {});
        waited_.assign(static_cast<std::size_t>(n_), -1);
        step(0);
        out.incumbents = incumbents_;
        if (best_plan_) {
            out.plan = best_plan_;
            out.objective = best_;
        }
        if (stopped_)
            out.status = SolveStatus::budget_exceeded;
        else
            out.status = best_plan_ ? SolveStatus::optimal : SolveStatus::infeasible;
        return out;
    }

    // ---- precomputation -------------------------------------------------

    Energy back(std::int32_t i, TsNodeId u) const {
        return back_[static_cast<std::size_t>(i) * ts_.node_count() + static_cast<std::size_t>(u)];
    }
    Energy dist(TsNodeId u, TsNodeId v) const {
        return dist_[static_cast<std::size_t>(u) * ts_.node_count() + static_cast<std::size_t>(v)];
    }

    void prepare() {
        const std::size_t N = ts_.node_count();
        back_.assign(static_cast<std::size_t>(n_) * N, kInf);
        for (std::int32_t i = 0; i < n_; ++i) {
            const auto table = min_energy_backward(ts_, s_.evs[static_cast<std::size_t>(i)].destination);
            for (std::size_t u = 0; u < N; ++u)
                if (table.energy[u] != kUnreachable)
                    back_[static_cast<std::size_t>(i) * N + u] = table.energy[u];
        }
        dist_.assign(N * N, kInf);
        for (std::size_t u = 0; u < N; ++u) {
            const auto table = min_energy_forward_from(ts_, static_cast<TsNodeId>(u));
            for (std::size_t v = 0; v < N; ++v)
                if (table.energy[v] != kUnreachable)
                    dist_[u * N + v] = table.energy[v];
        }
        meetings_ = s_.meeting_points();
        parkings_ = s_.parking_stations();
        steps_ = T_ - 1;
        slots_ = static_cast<std::int32_t>(meetings_.size()) * steps_;
        words_ = static_cast<std::size_t>((slots_ + 63) / 64);
        can_wait_.assign(static_cast<std::size_t>(n_) * N * words_, 0);
        grid_reach_.assign(static_cast<std::size_t>(n_) * N, 0);
        for (std::int32_t i = 0; i < n_; ++i)
            for (std::size_t u = 0; u < N; ++u) {
                auto* bits = wait_bits(i, static_cast<TsNodeId>(u));
                for (std::size_t mi = 0; mi < meetings_.size(); ++mi)
                    for (TimeStep t = 0; t < steps_; ++t)
                        if (dist(static_cast<TsNodeId>(u), ts_.id(meetings_[mi], t)) < kInf &&
                            back(i, ts_.id(meetings_[mi], t + 1)) < kInf) {
                            const auto bit = static_cast<std::size_t>(mi) * static_cast<std::size_t>(steps_) +
                                             static_cast<std::size_t>(t);
                            bits[bit / 64] |= std::uint64_t{1} << (bit % 64);
                        }
                for (NodeId p : parkings_)
                    for (TimeStep t = 0; t < steps_; ++t)
                        if (s_.grid_rate_at(p) > 0 && dist(static_cast<TsNodeId>(u), ts_.id(p, t)) < kInf &&
                            back(i, ts_.id(p, t + 1)) < kInf)
                            grid_reach_[static_cast<std::size_t>(i) * N + u] = 1;
            }
        meeting_mask_.assign(s_.road.node_count() * words_, 0);
        for (std::size_t mi = 0; mi < meetings_.size(); ++mi)
            for (TimeStep t = 0; t < steps_; ++t) {
                const auto bit = mi * static_cast<std::size_t>(steps_) + static_cast<std::size_t>(t);
                meeting_mask_[static_cast<std::size_t>(meetings_[mi]) * words_ + bit / 64] |= std::uint64_t{1}
                                                                                               << (bit % 64);
            }
    }

    std::uint64_t* wait_bits(std::int32_t i, TsNodeId u) {
        return can_wait_.data() + (static_cast<std::size_t>(i) * ts_.node_count() + static_cast<std::size_t>(u)) * words_;
    }
    const std::uint64_t* wait_bits(std::int32_t i, TsNodeId u) const {
        return can_wait_.data() + (static_cast<std::size_t>(i) * ts_.node_count() + static_cast<std::size_t>(u)) * words_;
    }
    bool overlap(const std::uint64_t* a, const std::uint64_t* b) const {
        for (std::size_t w = 0; w < words_; ++w)
            if (a[w] & b[w])
                return true;
        return false;
    }

    // ---- bounds ---------------------------------------------------------

    static bool has_bit(const std::uint64_t* bits, std::size_t bit) { return (bits[bit / 64] >> (bit % 64) & 1u) != 0; }

    /// Least extra energy EV i spends to wait at meeting slot `bit`.
    Energy meeting_detour(std::size_t i, std::size_t bit) const {
        const auto ii = static_cast<std::int32_t>(i);
        const auto mi = bit / static_cast<std::size_t>(steps_);
        const auto t = static_cast<TimeStep>(bit % static_cast<std::size_t>(steps_));
        return dist(state_[i].at, ts_.id(meetings_[mi], t)) + back(ii, ts_.id(meetings_[mi], t + 1)) -
               back(ii, state_[i].at);
    }

    std::size_t find_root(std::size_t x) {
        while (parent_[x] != x)
            x = parent_[x] = parent_[parent_[x]];
        return x;
    }

    /// Energy balance of the groups that can still meet when the detours of
    /// the two EVs at a meeting must fit in `slack`. A plan cheaper than the
    /// incumbent has all its meetings among such pairs.
    bool groups_within(Energy slack) {
        const auto n = static_cast<std::size_t>(n_);
        const auto S = static_cast<std::size_t>(slots_);
        detour_.assign(n * S, kInf);
        for (std::size_t i = 0; i < n; ++i) {
            const std::uint64_t* bits = reach_bits(i);
            for (std::size_t bit = 0; bit < S; ++bit)
                if (has_bit(bits, bit)) {
                    const Energy d = meeting_detour(i, bit);
                    if (d <= slack)
                        detour_[i * S + bit] = d;
                }
        }
        parent_.resize(n);
        std::iota(parent_.begin(), parent_.end(), 0);
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = i + 1; j < n; ++j) {
                if (find_root(i) == find_root(j))
                    continue;
                for (std::size_t bit = 0; bit < S; ++bit) {
                    const Energy a = detour_[i * S + bit];
                    const Energy b = detour_[j * S + bit];
                    if (a < kInf && b < kInf && a + b <= slack) {
                        parent_[find_root(i)] = find_root(j);
                        break;
                    }
                }
            }
        balance_.assign(n, 0);
        grid_ok_.assign(n, 0);
        for (std::size_t i = 0; i < n; ++i) {
            const auto& e = state_[i];
            const auto ii = static_cast<std::int32_t>(i);
            const std::size_t root = find_root(i);
            balance_[root] += e.soc - e.pending - back(ii, e.at);
            if (grid_ok_[root] || !live_[i])
                continue;
            for (NodeId p : parkings_) {
                if (s_.grid_rate_at(p) <= 0)
                    continue;
                for (TimeStep t = ts_.time(e.at); t < steps_ && !grid_ok_[root]; ++t) {
                    const Energy d = dist(e.at, ts_.id(p, t));
                    const Energy b = back(ii, ts_.id(p, t + 1));
                    if (d < kInf && b < kInf && d + b - back(ii, e.at) + s_.grid_rate_at(p) <= slack)
                        grid_ok_[root] = 1;
                }
            }
        }
        for (std::size_t i = 0; i < n; ++i)
            if (find_root(i) == i && !grid_ok_[i] && balance_[i] < 0)
                return false;

        // an idle EV at a meeting point needs a partner there within the slack
        for (std::size_t i = 0; i < n; ++i) {
            const auto& e = state_[i];
            if (!e.idle)
                continue;
            const NodeId v = ts_.road_node(e.at);
            if (v == s_.evs[i].destination || s_.road.kind(v) != NodeKind::meeting)
                continue;
            const auto mi = static_cast<std::size_t>(
                std::lower_bound(meetings_.begin(), meetings_.end(), v) - meetings_.begin());
            bool partner = false;
            for (TimeStep t = ts_.time(e.at); t < steps_ && !partner; ++t) {
                const std::size_t bit = mi * static_cast<std::size_t>(steps_) + static_cast<std::size_t>(t);
                const Energy a = detour_[i * S + bit];
                if (a >= kInf)
                    continue;
                for (std::size_t j = 0; j < n && !partner; ++j) {
                    const Energy b = detour_[j * S + bit];
                    partner = j != i && b < kInf && a + b <= slack;
                }
            }
            if (!partner)
                return false;
        }

        // a short EV receives at most one partner's rate per remaining step
        for (std::size_t i = 0; i < n; ++i) {
            const auto& e = state_[i];
            const auto ii = static_cast<std::int32_t>(i);
            const Energy shortfall = back(ii, e.at) + e.pending - e.soc;
            if (shortfall <= 0)
                continue;
            Energy capacity = 0;
            for (TimeStep t = ts_.time(e.at); t < steps_ && capacity < shortfall; ++t) {
                Energy best_rate = 0;
                for (std::size_t mi = 0; mi < meetings_.size(); ++mi) {
                    const std::size_t bit = mi * static_cast<std::size_t>(steps_) + static_cast<std::size_t>(t);
                    const Energy a = detour_[i * S + bit];
                    if (a >= kInf)
                        continue;
                    for (std::size_t j = 0; j < n; ++j) {
                        const Energy b = detour_[j * S + bit];
                        if (j != i && b < kInf && a + b <= slack)
                            best_rate = std::max(best_rate, s_.evs[j].rate);
                    }
                }
                for (NodeId p : parkings_) {
                    const Energy rate = s_.grid_rate_at(p);
                    if (rate <= best_rate)
                        continue;
                    const Energy d = dist(e.at, ts_.id(p, t));
                    const Energy b = back(ii, ts_.id(p, t + 1));
                    if (d < kInf && b < kInf && d + b - back(ii, e.at) + rate <= slack)
                        best_rate = rate;
                }
                capacity += best_rate;
            }
            if (capacity < shortfall)
                return false;
        }
        return true;
    }

    /// False when the state cannot be completed; otherwise `extra` receives a
    /// lower bound on detour energy still to be spent beyond the labels.
    const std::uint64_t* reach_bits(std::size_t i) const { return reach_.data() + i * words_; }

    /// Meeting slots each EV can still use. An EV that has not been charged
    /// moves on its own charge only, so until it shares a slot with an EV
    /// that holds charge it is limited to what that charge reaches.
    void compute_reach() {
        const auto n = static_cast<std::size_t>(n_);
        const auto S = static_cast<std::size_t>(slots_);
        reach_.assign(n * words_, 0);
        live_.assign(n, 0);
        for (std::size_t i = 0; i < n; ++i) {
            const auto& e = state_[i];
            const auto ii = static_cast<std::int32_t>(i);
            const std::uint64_t* all = wait_bits(ii, e.at);
            const Energy budget = e.soc - e.pending;
            if (budget > 0) {
                live_[i] = 1;
                std::copy(all, all + words_, reach_.data() + i * words_);
                continue;
            }
            std::uint64_t* mine = reach_.data() + i * words_;
            for (std::size_t bit = 0; bit < S; ++bit)
                if (has_bit(all, bit) &&
                    dist(e.at, ts_.id(meetings_[bit / static_cast<std::size_t>(steps_)],
                                      static_cast<TimeStep>(bit % static_cast<std::size_t>(steps_)))) <= budget)
                    mine[bit / 64] |= std::uint64_t{1} << (bit % 64);
            for (NodeId p : parkings_)
                for (TimeStep t = ts_.time(e.at); t < steps_ && !live_[i]; ++t)
                    if (s_.grid_rate_at(p) > 0 && dist(e.at, ts_.id(p, t)) <= budget && back(ii, ts_.id(p, t + 1)) < kInf)
                        live_[i] = 1;
            if (live_[i])
                std::copy(all, all + words_, mine);
        }
        for (bool grew = true; grew;) {
            grew = false;
            for (std::size_t i = 0; i < n; ++i) {
                if (live_[i])
                    continue;
                for (std::size_t j = 0; j < n; ++j)
                    if (live_[j] && overlap(reach_bits(i), reach_bits(j))) {
                        live_[i] = 1;
                        const std::uint64_t* all = wait_bits(static_cast<std::int32_t>(i), state_[i].at);
                        std::copy(all, all + words_, reach_.data() + i * words_);
                        grew = true;
                        break;
                    }
            }
        }
    }

    bool feasible_bound(Energy& extra) {
        const auto n = static_cast<std::size_t>(n_);
        extra = 0;
        compute_reach();
        // groups of EVs that can still wait together at a meeting point
        parent_.resize(n);
        std::iota(parent_.begin(), parent_.end(), 0);
        const auto find = [&](std::size_t x) {
            while (parent_[x] != x)
                x = parent_[x] = parent_[parent_[x]];
            return x;
        };
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = i + 1; j < n; ++j)
                if (overlap(reach_bits(i), reach_bits(j)))
                    parent_[find(i)] = find(j);
        balance_.assign(n, 0);
        grid_ok_.assign(n, 0);
        for (std::size_t i = 0; i < n; ++i) {
            const auto& e = state_[i];
            const std::size_t root = find(i);
            balance_[root] += e.soc - e.pending - back(static_cast<std::int32_t>(i), e.at);
            if (live_[i] && grid_reach_[i * ts_.node_count() + static_cast<std::size_t>(e.at)])
                grid_ok_[root] = 1;
        }
        for (std::size_t i = 0; i < n; ++i)
            if (find(i) == i && !grid_ok_[i] && balance_[i] < 0)
                return false;

        // an idle EV stays put until it charges there or the horizon ends
        for (std::size_t i = 0; i < n; ++i) {
            const auto& e = state_[i];
            if (!e.idle)
                continue;
            const NodeId v = ts_.road_node(e.at);
            const auto kind = s_.road.kind(v);
            if (v == s_.evs[i].destination || kind == NodeKind::parking)
                continue;
            if (kind != NodeKind::meeting)
                return false;
            bool partner = false;
            const std::uint64_t* mask = meeting_mask_.data() + static_cast<std::size_t>(v) * words_;
            const std::uint64_t* mine = reach_bits(i);
            for (std::size_t j = 0; j < n && !partner; ++j) {
                if (j == i)
                    continue;
                const std::uint64_t* theirs = reach_bits(j);
                for (std::size_t w = 0; w < words_; ++w)
                    if (mine[w] & theirs[w] & mask[w]) {
                        partner = true;
                        break;
                    }
            }
            if (!partner)
                return false;
        }

        if (!energy_)
            return true;
        // Detour bound. A slot is usable only if some other EV can also be
        // there. Without grid energy some EV with spare charge must give at
        // least once, and it is not one of the short EVs counted in sum_own.
        ones_.assign(words_, 0);
        twos_.assign(words_, 0);
        for (std::size_t i = 0; i < n; ++i) {
            const std::uint64_t* bits = reach_bits(i);
            for (std::size_t w = 0; w < words_; ++w) {
                twos_[w] |= ones_[w] & bits[w];
                ones_[w] |= bits[w];
            }
        }
        const auto shared = [&](std::size_t bit) { return (twos_[bit / 64] >> (bit % 64) & 1u) != 0; };
        const auto slot_count = static_cast<std::size_t>(slots_);
        Energy sum_own = 0;
        Energy max_pair = 0;
        bool short_ev = false;
        bool grid_used = false;
        for (std::size_t i = 0; i < n; ++i) {
            const auto& e = state_[i];
            const auto ii = static_cast<std::int32_t>(i);
            const Energy need = back(ii, e.at);
            const Energy spare = e.soc - e.pending - need;
            if (spare >= 0)
                continue;
            short_ev = true;
            Energy own = kInf;
            Energy pair = kInf;
            const std::uint64_t* mine = reach_bits(i);
            for (std::size_t bit = 0; bit < slot_count; ++bit) {
                if (!has_bit(mine, bit) || !shared(bit))
                    continue;
                const Energy part = meeting_detour(i, bit);
                own = std::min(own, part);
                if (part >= pair)
                    continue;
                Energy helper = kInf;
                for (std::size_t j = 0; j < n; ++j)
                    if (j != i && has_bit(reach_bits(j), bit))
                        helper = std::min(helper, meeting_detour(j, bit));
                if (helper < kInf)
                    pair = std::min(pair, part + helper);
            }
            Energy grid = kInf;
            for (NodeId p : parkings_) {
                if (s_.grid_rate_at(p) <= 0)
                    continue;
                for (TimeStep t = ts_.time(e.at); t < steps_; ++t) {
                    const Energy d = dist(e.at, ts_.id(p, t));
                    const Energy b = back(ii, ts_.id(p, t + 1));
                    if (d >= kInf || b >= kInf)
                        continue;
                    // grid energy costs what it adds, so at least the shortfall
                    grid = std::min(grid, d + b - need - spare);
                }
            }
            if (grid < kInf)
                grid_used = true;
            own = std::min(own, grid);
            pair = std::min(pair, grid);
            if (pair >= kInf)
                return false;
            sum_own += own;
            max_pair = std::max(max_pair, pair);
        }
        if (short_ev && !grid_used) {
            Energy giver = kInf;
            for (std::size_t g = 0; g < n; ++g) {
                const auto& e = state_[g];
                if (e.soc - e.pending - back(static_cast<std::int32_t>(g), e.at) <= 0)
                    continue;
                const std::uint64_t* bits = reach_bits(g);
                for (std::size_t bit = 0; bit < slot_count && giver > 0; ++bit)
                    if (has_bit(bits, bit) && shared(bit))
                        giver = std::min(giver, meeting_detour(g, bit));
            }
            if (giver >= kInf)
                return false;
            sum_own += giver;
        }
        extra = std::max(sum_own, max_pair);
        return true;
    }

    // ---- search ---------------------------------------------------------

    bool budget_hit() {
        if (stopped_)
            return true;
        if (++nodes_ > opt_.budget_nodes) {
            stopped_ = true;
            return true;
        }
        return false;
    }

    bool done() const { return stopped_ || (!energy_ && best_plan_); }

    std::string memo_key(TimeStep t) const {
        std::string key(sizeof(TimeStep) + state_.size() * (sizeof(TsNodeId) + 2 * sizeof(Energy) + 1), '\0');
        char* p = key.data();
        std::memcpy(p, &t, sizeof t);
        p += sizeof t;
        for (const auto& e : state_) {
            std::memcpy(p, &e.at, sizeof e.at);
            p += sizeof e.at;
            std::memcpy(p, &e.soc, sizeof e.soc);
            p += sizeof e.soc;
            std::memcpy(p, &e.pending, sizeof e.pending);
            p += sizeof e.pending;
            *p++ = e.idle ? 1 : 0;
        }
        return key;
    }

    Energy label_sum() const {
        Energy sum = 0;
        for (std::int32_t i = 0; i < n_; ++i)
            sum += back(i, state_[static_cast<std::size_t>(i)].at);
        return sum;
    }

    void record_solution() {
        if (best_plan_ && g_ >= best_)
            return;
        Plan p;
        p.routes = route_;
        p.transfers = transfers_;
        p.grid = grid_;
        p.normalize();
        best_ = g_;
        best_plan_ = std::move(p);
        incumbents_.push_back(best_);
    }

    void step(TimeStep t) {
        if (done() || budget_hit())
            return;
        if (t == T_ - 1) {
            record_solution();
            return;
        }
        {
            auto key = memo_key(t);
            const auto it = memo_.find(key);
            if (it != memo_.end()) {
                if (it->second <= g_) {
                    ++memo_hits_;
                    return;
                }
                it->second = g_;
            } else if (memo_.size() < opt_.memo_limit) {
                memo_.emplace(std::move(key), g_);
            }
        }
        Energy extra = 0;
        if (!feasible_bound(extra))
            return;
        Energy slack = kInf;
        if (energy_ && best_plan_) {
            slack = best_ - 1 - g_ - label_sum();
            if (slack < extra)
                return;
        }
        if (!groups_within(slack))
            return;
        assign(t, 0, label_sum());
    }

    void assign(TimeStep t, std::int32_t i, Energy labels) {
        if (done())
            return;
        if (energy_ && best_plan_ && g_ + labels >= best_)
            return;
        if (i == n_) {
            charge(t);
            return;
        }
        auto& e = state_[static_cast<std::size_t>(i)];
        if (ts_.time(e.at) > t) {
            waited_[static_cast<std::size_t>(i)] = -1;
            assign(t, i + 1, labels);
            return;
        }
        if (budget_hit())
            return;
        const TsNodeId from = e.at;
        const Energy here = back(i, from);
        struct Option {
            TsArcId arc;
            Energy delta;
            bool wait;
        };
        Option options[64];
        std::size_t count = 0;
        for (TsArcId a : ts_.out_arcs(from)) {
            const auto& arc = ts_.arc(a);
            const bool wait = arc.kind == TsArcKind::waiting;
            if (e.idle && !wait)
                continue;
            if (!wait && e.soc < arc.energy)
                continue;
            const Energy b = back(i, arc.head);
            if (b >= kInf)
                continue;
            if (count < 64)
                options[count++] = {a, arc.energy + b - here, wait};
        }
        // an EV with charge to spare tries staying before leaving
        const bool stay_first = e.soc - e.pending - here > 0;
        std::stable_sort(options, options + count, [stay_first](const Option& x, const Option& y) {
            if (x.delta != y.delta)
                return x.delta < y.delta;
            return x.wait != y.wait && x.wait == stay_first;
        });
        const EvState saved = e;
        for (std::size_t k = 0; k < count && !done(); ++k) {
            const auto& arc = ts_.arc(options[k].arc);
            e.at = arc.head;
            e.pending = arc.energy;
            e.idle = false;
            waited_[static_cast<std::size_t>(i)] = options[k].wait ? ts_.road_node(from) : -1;
            route_[static_cast<std::size_t>(i)].push_back(options[k].arc);
            if (energy_)
                g_ += arc.energy;
            assign(t, i + 1, labels + options[k].delta - (energy_ ? arc.energy : 0));
            if (energy_)
                g_ -= arc.energy;
            route_[static_cast<std::size_t>(i)].pop_back();
            e = saved;
        }
        waited_[static_cast<std::size_t>(i)] = -1;
    }

    // Charge events for step t, group by group.
    void charge(TimeStep t) {
        std::vector<Group> groups;
        for (NodeId m : meetings_) {
            std::vector<std::int32_t> members;
            for (std::int32_t i = 0; i < n_; ++i)
                if (waited_[static_cast<std::size_t>(i)] == m)
                    members.push_back(i);
            if (members.size() >= 2)
                groups.push_back({m, std::move(members)});
        }
        std::vector<std::int32_t> parked;
        for (std::int32_t i = 0; i < n_; ++i) {
            const NodeId v = waited_[static_cast<std::size_t>(i)];
            if (v >= 0 && s_.road.kind(v) == NodeKind::parking && s_.grid_rate_at(v) > 0)
                parked.push_back(i);
        }
        delta_.assign(static_cast<std::size_t>(n_), 0);
        active_.assign(static_cast<std::size_t>(n_), 0);
        charge_group(t, groups, parked, 0);
    }

    Energy spare(std::int32_t i) const {
        const auto& e = state_[static_cast<std::size_t>(i)];
        return e.soc - e.pending - back(i, e.at);
    }

    struct Group {
        NodeId node;
        std::vector<std::int32_t> members;
    };

    void charge_group(TimeStep t, const std::vector<Group>& groups, const std::vector<std::int32_t>& parked,
                      std::size_t gi) {
        if (done())
            return;
        if (gi == groups.size()) {
            charge_grid(t, parked, 0);
            return;
        }
        const auto& grp = groups[gi];
        // every pattern of at most one giver per receiver and one receiver per
        // giver, without two EVs charging each other
        std::vector<std::vector<std::pair<std::int32_t, std::int32_t>>> patterns;
        std::vector<std::pair<std::int32_t, std::int32_t>> cur;
        std::vector<std::int32_t> giver_of(static_cast<std::size_t>(n_), -1);
        std::vector<std::uint8_t> giving(static_cast<std::size_t>(n_), 0);
        const std::size_t k = grp.members.size();
        // with one rate in the group a relay through an EV can be replaced by
        // a direct transfer, so no EV both gives and receives
        bool one_rate = true;
        for (std::int32_t g : grp.members)
            one_rate = one_rate && s_.evs[static_cast<std::size_t>(g)].rate ==
                                       s_.evs[static_cast<std::size_t>(grp.members.front())].rate;
        std::function<void(std::size_t)> build = [&](std::size_t r) {
            if (r == k) {
                patterns.push_back(cur);
                return;
            }
            build(r + 1);
            const std::int32_t rec = grp.members[r];
            if (one_rate && giving[static_cast<std::size_t>(rec)])
                return;
            for (std::int32_t g : grp.members) {
                if (g == rec || giving[static_cast<std::size_t>(g)] || giver_of[static_cast<std::size_t>(g)] == rec)
                    continue;
                if (one_rate && giver_of[static_cast<std::size_t>(g)] >= 0)
                    continue;
                giving[static_cast<std::size_t>(g)] = 1;
                giver_of[static_cast<std::size_t>(rec)] = g;
                cur.push_back({rec, g});
                build(r + 1);
                cur.pop_back();
                giver_of[static_cast<std::size_t>(rec)] = -1;
                giving[static_cast<std::size_t>(g)] = 0;
            }
        };
        build(0);
        const auto score = [&](const std::vector<std::pair<std::int32_t, std::int32_t>>& p) {
            int useful = 0;
            for (const auto& [rec, g] : p) {
                const Energy rate = s_.evs[static_cast<std::size_t>(g)].rate;
                if (spare(g) >= rate)
                    useful += spare(rec) < 0 ? 3 : 1;
                else
                    useful += spare(rec) < 0 ? 1 : -1;
            }
            return useful;
        };
        std::vector<int> scores(patterns.size());
        for (std::size_t q = 0; q < patterns.size(); ++q)
            scores[q] = score(patterns[q]);
        std::vector<std::size_t> order(patterns.size());
        std::iota(order.begin(), order.end(), 0);
        std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return scores[a] > scores[b]; });
        // patterns with the same charge change and participation per member
        // lead to the same state
        std::set<std::vector<Energy>> seen;
        std::vector<Energy> signature(2 * k);
        for (std::size_t q : order) {
            if (done())
                return;
            std::fill(signature.begin(), signature.end(), 0);
            for (const auto& [rec, g] : patterns[q]) {
                const Energy rate = s_.evs[static_cast<std::size_t>(g)].rate;
                const auto r = static_cast<std::size_t>(std::find(grp.members.begin(), grp.members.end(), rec) - grp.members.begin());
                const auto h = static_cast<std::size_t>(std::find(grp.members.begin(), grp.members.end(), g) - grp.members.begin());
                signature[2 * r] += rate;
                signature[2 * h] -= rate;
                signature[2 * r + 1] = 1;
                signature[2 * h + 1] = 1;
            }
            if (!seen.insert(signature).second)
                continue;
            const auto mark = transfers_.size();
            for (const auto& [rec, g] : patterns[q]) {
                const Energy rate = s_.evs[static_cast<std::size_t>(g)].rate;
                delta_[static_cast<std::size_t>(rec)] += rate;
                delta_[static_cast<std::size_t>(g)] -= rate;
                active_[static_cast<std::size_t>(rec)] = 1;
                active_[static_cast<std::size_t>(g)] = 1;
                transfers_.push_back({rec, g, grp.node, t});
            }
            charge_group(t, groups, parked, gi + 1);
            for (const auto& [rec, g] : patterns[q]) {
                const Energy rate = s_.evs[static_cast<std::size_t>(g)].rate;
                delta_[static_cast<std::size_t>(rec)] -= rate;
                delta_[static_cast<std::size_t>(g)] += rate;
                active_[static_cast<std::size_t>(rec)] = 0;
                active_[static_cast<std::size_t>(g)] = 0;
            }
            transfers_.resize(mark);
        }
    }

    void charge_grid(TimeStep t, const std::vector<std::int32_t>& parked, std::size_t pi) {
        if (done())
            return;
        if (pi == parked.size()) {
            advance(t);
            return;
        }
        const std::int32_t i = parked[pi];
        const NodeId p = waited_[static_cast<std::size_t>(i)];
        const Energy rate = s_.grid_rate_at(p);
        const bool short_of_charge = spare(i) < 0;
        for (int pass = 0; pass < 2 && !done(); ++pass) {
            const bool draw = (pass == 0) == short_of_charge;
            if (!draw) {
                charge_grid(t, parked, pi + 1);
                continue;
            }
            delta_[static_cast<std::size_t>(i)] += rate;
            const auto was_active = active_[static_cast<std::size_t>(i)];
            active_[static_cast<std::size_t>(i)] = 1;
            grid_.push_back({i, p, t});
            if (energy_)
                g_ += rate;
            charge_grid(t, parked, pi + 1);
            if (energy_)
                g_ -= rate;
            grid_.pop_back();
            active_[static_cast<std::size_t>(i)] = was_active;
            delta_[static_cast<std::size_t>(i)] -= rate;
        }
    }

    // Applies the chosen events and arrivals, then moves to step t+1.
    void advance(TimeStep t) {
        std::vector<EvState> saved = state_;
        bool ok = true;
        for (std::int32_t i = 0; i < n_ && ok; ++i) {
            auto& e = state_[static_cast<std::size_t>(i)];
            e.soc += delta_[static_cast<std::size_t>(i)];
            if (ts_.time(e.at) == t + 1) {
                e.soc -= e.pending;
                e.pending = 0;
            }
            if (e.soc < 0 || e.soc > s_.evs[static_cast<std::size_t>(i)].max_soc)
                ok = false;
            e.idle = waited_[static_cast<std::size_t>(i)] >= 0 && !active_[static_cast<std::size_t>(i)];
        }
        if (ok) {
            const auto waited = waited_;
            const auto delta = delta_;
            const auto active = active_;
            step(t + 1);
            waited_ = waited;
            delta_ = delta;
            active_ = active;
        }
        std::copy(saved.begin(), saved.end(), state_.begin());
    }

    const Scenario& s_;
    BranchAndBoundOptions opt_;
    TimeSpaceNetwork ts_;
    std::int32_t n_;
    TimeStep T_;
    bool energy_ = true;

    std::vector<Energy> back_;
    std::vector<Energy> dist_;
    std::vector<NodeId> meetings_;
    std::vector<NodeId> parkings_;
    TimeStep steps_ = 0;
    std::int32_t slots_ = 0;
    std::size_t words_ = 0;
    std::vector<std::uint64_t> can_wait_;
    std::vector<std::uint8_t> grid_reach_;
    std::vector<std::uint64_t> meeting_mask_;

    std::vector<EvState> state_;
    std::vector<std::vector<TsArcId>> route_;
    std::vector<Transfer> transfers_;
    std::vector<GridCharge> grid_;
    std::vector<NodeId> waited_;
    std::vector<Energy> delta_;
    std::vector<std::uint8_t> active_;
    std::vector<std::size_t> parent_;
    std::vector<Energy> balance_;
    std::vector<std::uint8_t> grid_ok_;
    std::vector<std::uint64_t> ones_, twos_;
    std::vector<Energy> detour_;
    std::vector<std::uint64_t> reach_;
    std::vector<std::uint8_t> live_;
    Energy g_ = 0;

    Energy best_ = 0;
    std::optional<Plan> best_plan_;
    std::vector<Energy> incumbents_;
    std::unordered_map<std::string, Energy> memo_;
    std::int64_t nodes_ = 0;
    std::int64_t memo_hits_ = 0;
    bool stopped_ = false;
};

} // namespace detail

/// Exact solver for desk-scale scenarios. Runs to completion (optimal or
/// infeasible) unless the node budget is spent, in which case the best plan
/// found so far is returned with status budget_exceeded.
inline SolveOutcome solve_bb(const Scenario& s, const BranchAndBoundOptions& opt = {}) {
    require_valid(s);
    if (s.horizon < 2) {
        // nothing can move; feasible iff every EV already sits at its destination
        SolveOutcome out;
        bool ok = true;
        for (const auto& ev : s.evs)
            ok = ok && ev.origin == ev.destination;
        out.status = ok ? SolveStatus::optimal : SolveStatus::infeasible;
        if (ok)
            out.plan = Plan{std::vector<std::vector<TsArcId>>(s.evs.size()), {}, {}};
        return out;
    }
    return detail::BranchAndBound(s, opt).run();
}

inline SolveOutcome solve_bb(const IpInstance& ip, std::int64_t budget_nodes = 5'000'000) {
    BranchAndBoundOptions opt;
    opt.budget_nodes = budget_nodes;
    opt.objective = ip.objective.tag == "feasibility" ? ObjectiveKind::feasibility : ObjectiveKind::energy;
    return solve_bb(*ip.scenario, opt);
}

} // namespace v2vc

#endif // V2VC_EXACT_BRANCH_AND_BOUND_HPP
