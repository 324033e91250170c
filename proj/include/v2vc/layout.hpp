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

#ifndef V2VC_LAYOUT_HPP
#define V2VC_LAYOUT_HPP

#include "v2vc/scenario.hpp"

#include <array>
#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

namespace v2vc {

using Index = std::int64_t;

/// Column blocks, in storage order.
enum class Block : std::uint8_t {
    x,             // (ev, ts arc)
    y,             // (ev, parking, t)             t in [0, T-2]
    z,             // (receiver, giver, meeting, t) t in [0, T-2]
    battery,       // (ev, t)                       t in [1, T-1]
    grid_link,     // (ev, parking, t)
    v2v_receiver,  // (receiver, giver, meeting, t): Z <= X of the receiver
    v2v_giver,     // (receiver, giver, meeting, t): Z <= X of the giver
    one_way,       // ({i < j}, meeting, t):         Z_ij + Z_ji <= 1
    receive_once,  // (ev, t): charged by at most one EV
    give_once,     // (ev, t): charges at most one EV
};
inline constexpr std::size_t kBlockCount = 10;

/// Row families, in storage order.
enum class RowFamily : std::uint8_t {
    path,         // (ev, ts node)
    battery,      // (ev, t)  t in [1, T-1]
    grid_link,    // (ev, parking, t)
    v2v_receiver, // (receiver, giver, meeting, t)
    v2v_giver,    // (receiver, giver, meeting, t)
    one_way,      // ({i < j}, meeting, t)
    receive_once, // (ev, t)
    give_once,    // (ev, t)
};
inline constexpr std::size_t kRowFamilyCount = 8;

inline std::string_view to_string(Block b) {
    static constexpr std::array<std::string_view, kBlockCount> names{
        "X", "Y", "Z", "battery", "grid_link", "v2v_receiver", "v2v_giver", "one_way", "receive_once", "give_once"};
    return names[static_cast<std::size_t>(b)];
}

/// Decoded meaning of a column. Fields that do not apply to the block are -1.
struct ColumnInfo {
    Block block;
    std::int32_t ev = -1;    // EV, receiver, or lower pair index
    std::int32_t other = -1; // giver, or upper pair index
    NodeId node = -1;
    TimeStep t = -1;
    TsArcId arc = -1;
};

/// Column and row numbering of the integer program. Every block is a
/// contiguous range; indices are computed arithmetically so the layout of very
/// large instances can be queried without materialising them.
class VariableLayout {
  public:
    VariableLayout() = default;

    VariableLayout(const Scenario& s, std::size_t ts_arc_count)
        : evs_(static_cast<Index>(s.evs.size())), arcs_(static_cast<Index>(ts_arc_count)), steps_(s.horizon - 1),
          meeting_(s.meeting_points()), parking_(s.parking_stations()) {
        meeting_index_.assign(s.road.node_count(), -1);
        parking_index_.assign(s.road.node_count(), -1);
        for (std::size_t k = 0; k < meeting_.size(); ++k)
            meeting_index_[static_cast<std::size_t>(meeting_[k])] = static_cast<std::int32_t>(k);
        for (std::size_t k = 0; k < parking_.size(); ++k)
            parking_index_[static_cast<std::size_t>(parking_[k])] = static_cast<std::int32_t>(k);
        ts_nodes_ = static_cast<Index>(s.road.node_count()) * s.horizon;

        const Index m = static_cast<Index>(meeting_.size());
        const Index p = static_cast<Index>(parking_.size());
        const Index ordered = evs_ * (evs_ - 1);
        const std::array<Index, kBlockCount> col_sizes{evs_ * arcs_,      evs_ * p * steps_,     ordered * m * steps_,
                                                       evs_ * steps_,     evs_ * p * steps_,     ordered * m * steps_,
                                                       ordered * m * steps_, ordered / 2 * m * steps_, evs_ * steps_,
                                                       evs_ * steps_};
        for (std::size_t k = 0; k < kBlockCount; ++k)
            col_offset_[k + 1] = col_offset_[k] + col_sizes[k];
        const std::array<Index, kRowFamilyCount> row_sizes{evs_ * ts_nodes_,  evs_ * steps_,        evs_ * p * steps_,
                                                           ordered * m * steps_, ordered * m * steps_, ordered / 2 * m * steps_,
                                                           evs_ * steps_,     evs_ * steps_};
        for (std::size_t k = 0; k < kRowFamilyCount; ++k)
            row_offset_[k + 1] = row_offset_[k] + row_sizes[k];
    }

    Index ev_count() const { return evs_; }
    Index ts_arc_count() const { return arcs_; }
    TimeStep steps() const { return steps_; }
    const std::vector<NodeId>& meeting_points() const { return meeting_; }
    const std::vector<NodeId>& parking_stations() const { return parking_; }
    std::int32_t meeting_index(NodeId v) const { return meeting_index_[static_cast<std::size_t>(v)]; }
    std::int32_t parking_index(NodeId v) const { return parking_index_[static_cast<std::size_t>(v)]; }

    Index cols() const { return col_offset_.back(); }
    Index rows() const { return row_offset_.back(); }
    Index block_begin(Block b) const { return col_offset_[static_cast<std::size_t>(b)]; }
    Index block_end(Block b) const { return col_offset_[static_cast<std::size_t>(b) + 1]; }
    Index family_begin(RowFamily f) const { return row_offset_[static_cast<std::size_t>(f)]; }
    Index family_end(RowFamily f) const { return row_offset_[static_cast<std::size_t>(f) + 1]; }

    bool is_decision(Index col) const { return col < block_end(Block::z); }

    Index x(Index ev, TsArcId arc) const { return ev * arcs_ + arc; }
    Index y(Index ev, NodeId p, TimeStep t) const { return block_begin(Block::y) + ev_parking_t(ev, p, t); }
    Index z(Index receiver, Index giver, NodeId m, TimeStep t) const {
        return block_begin(Block::z) + pair_meeting_t(receiver, giver, m, t);
    }
    Index battery(Index ev, TimeStep t) const { return block_begin(Block::battery) + ev * steps_ + (t - 1); }
    Index grid_link(Index ev, NodeId p, TimeStep t) const {
        return block_begin(Block::grid_link) + ev_parking_t(ev, p, t);
    }
    Index v2v_receiver(Index receiver, Index giver, NodeId m, TimeStep t) const {
        return block_begin(Block::v2v_receiver) + pair_meeting_t(receiver, giver, m, t);
    }
    Index v2v_giver(Index receiver, Index giver, NodeId m, TimeStep t) const {
        return block_begin(Block::v2v_giver) + pair_meeting_t(receiver, giver, m, t);
    }
    Index one_way(Index i, Index j, NodeId m, TimeStep t) const {
        return block_begin(Block::one_way) + unordered_meeting_t(i, j, m, t);
    }
    Index receive_once(Index ev, TimeStep t) const { return block_begin(Block::receive_once) + ev * steps_ + t; }
    Index give_once(Index ev, TimeStep t) const { return block_begin(Block::give_once) + ev * steps_ + t; }

    Index path_row(Index ev, TsNodeId n) const { return ev * ts_nodes_ + n; }
    Index battery_row(Index ev, TimeStep t) const { return family_begin(RowFamily::battery) + ev * steps_ + (t - 1); }
    Index grid_link_row(Index ev, NodeId p, TimeStep t) const {
        return family_begin(RowFamily::grid_link) + ev_parking_t(ev, p, t);
    }
    Index v2v_receiver_row(Index r, Index g, NodeId m, TimeStep t) const {
        return family_begin(RowFamily::v2v_receiver) + pair_meeting_t(r, g, m, t);
    }
    Index v2v_giver_row(Index r, Index g, NodeId m, TimeStep t) const {
        return family_begin(RowFamily::v2v_giver) + pair_meeting_t(r, g, m, t);
    }
    Index one_way_row(Index i, Index j, NodeId m, TimeStep t) const {
        return family_begin(RowFamily::one_way) + unordered_meeting_t(i, j, m, t);
    }
    Index receive_once_row(Index ev, TimeStep t) const {
        return family_begin(RowFamily::receive_once) + ev * steps_ + t;
    }
    Index give_once_row(Index ev, TimeStep t) const { return family_begin(RowFamily::give_once) + ev * steps_ + t; }

    Block block_of(Index col) const {
        for (std::size_t k = 0; k < kBlockCount; ++k)
            if (col < col_offset_[k + 1])
                return static_cast<Block>(k);
        throw Error("column index out of range");
    }

    ColumnInfo describe(Index col) const {
        const Block b = block_of(col);
        Index r = col - block_begin(b);
        ColumnInfo info{b};
        const Index m = static_cast<Index>(meeting_.size());
        const Index p = static_cast<Index>(parking_.size());
        switch (b) {
        case Block::x:
            info.ev = static_cast<std::int32_t>(r / arcs_);
            info.arc = static_cast<TsArcId>(r % arcs_);
            break;
        case Block::y:
        case Block::grid_link:
            info.t = static_cast<TimeStep>(r % steps_);
            r /= steps_;
            info.node = parking_[static_cast<std::size_t>(r % p)];
            info.ev = static_cast<std::int32_t>(r / p);
            break;
        case Block::z:
        case Block::v2v_receiver:
        case Block::v2v_giver: {
            info.t = static_cast<TimeStep>(r % steps_);
            r /= steps_;
            info.node = meeting_[static_cast<std::size_t>(r % m)];
            r /= m;
            info.ev = static_cast<std::int32_t>(r / (evs_ - 1));
            const auto g = static_cast<std::int32_t>(r % (evs_ - 1));
            info.other = g < info.ev ? g : g + 1;
            break;
        }
        case Block::battery:
            info.ev = static_cast<std::int32_t>(r / steps_);
            info.t = static_cast<TimeStep>(r % steps_ + 1);
            break;
        case Block::one_way: {
            info.t = static_cast<TimeStep>(r % steps_);
            r /= steps_;
            info.node = meeting_[static_cast<std::size_t>(r % m)];
            r /= m;
            // invert the triangular pair numbering
            Index i = 0;
            while (r >= evs_ - 1 - i) {
                r -= evs_ - 1 - i;
                ++i;
            }
            info.ev = static_cast<std::int32_t>(i);
            info.other = static_cast<std::int32_t>(i + 1 + r);
            break;
        }
        case Block::receive_once:
        case Block::give_once:
            info.ev = static_cast<std::int32_t>(r / steps_);
            info.t = static_cast<TimeStep>(r % steps_);
            break;
        }
        return info;
    }

  private:
    Index ev_parking_t(Index ev, NodeId p, TimeStep t) const {
        return (ev * static_cast<Index>(parking_.size()) + parking_index(p)) * steps_ + t;
    }
    Index pair_meeting_t(Index receiver, Index giver, NodeId m, TimeStep t) const {
        const Index g = giver < receiver ? giver : giver - 1;
        return ((receiver * (evs_ - 1) + g) * static_cast<Index>(meeting_.size()) + meeting_index(m)) * steps_ + t;
    }
    Index unordered_meeting_t(Index i, Index j, NodeId m, TimeStep t) const {
        if (i > j)
            std::swap(i, j);
        const Index pair = i * evs_ - i * (i + 1) / 2 + (j - i - 1);
        return (pair * static_cast<Index>(meeting_.size()) + meeting_index(m)) * steps_ + t;
    }

    Index evs_ = 0;
    Index arcs_ = 0;
    TimeStep steps_ = 0;
    Index ts_nodes_ = 0;
    std::vector<NodeId> meeting_;
    std::vector<NodeId> parking_;
    std::vector<std::int32_t> meeting_index_;
    std::vector<std::int32_t> parking_index_;
    std::array<Index, kBlockCount + 1> col_offset_{};
    std::array<Index, kRowFamilyCount + 1> row_offset_{};
};

} // namespace v2vc

#endif // V2VC_LAYOUT_HPP
