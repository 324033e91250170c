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


#include "support.hpp"
#include "v2vc/ip_model.hpp"
#include "v2vc/mps.hpp"
#include "v2vc/solution_io.hpp"

#include <gtest/gtest.h>

#include <filesystem>
#include <map>
#include <set>
#include <sstream>

namespace v2vc {
namespace {

Scenario toy() {
    Scenario s;
    s.horizon = 2;
    s.road.add_node(NodeKind::plain);
    s.road.add_node(NodeKind::plain);
    s.road.add_arc(0, 1, 5, 1, false);
    s.evs.push_back({"a", 0, 1, 5, 5, 1});
    return s;
}

std::vector<Index> residual(const IpInstance& ip, const Solution& x) {
    std::vector<Index> r(static_cast<std::size_t>(ip.rows()), 0);
    for (const auto& t : ip.A.triplets())
        r[static_cast<std::size_t>(t.row)] += t.value * x.values[static_cast<std::size_t>(t.col)];
    for (std::size_t k = 0; k < r.size(); ++k)
        r[k] -= ip.b[k];
    return r;
}

TEST(BuildIp, ToyIsSevenBySeven) {
    const auto ip = build_ip(toy());
    EXPECT_EQ(ip.rows(), 7);
    EXPECT_EQ(ip.cols(), 7);
    EXPECT_EQ((predicted_dimensions(toy())), (Dimensions{7, 7}));
    EXPECT_EQ(ip.layout.block_end(Block::x), 4);
}

TEST(BuildIp, QOneHas252Columns) {
    const auto s = reconstructed_q1();
    const auto ip = build_ip(s);
    EXPECT_EQ(ip.network->node_count(), 20u);
    EXPECT_EQ(ip.network->arc_count(), 36u);
    EXPECT_EQ(ip.cols(), 252);
    EXPECT_EQ(predicted_dimensions(s).cols, 252);
    EXPECT_EQ(ip.rows(), predicted_dimensions(s).rows);
}

TEST(BuildIp, NoMeetingNoParkingFormula) {
    detail::Draw draw(8);
    Scenario s;
    s.road = testing::random_road(draw, 4, 5, false);
    s.horizon = 5;
    s.evs.push_back({"a", 0, 1, 3, 3, 1});
    s.evs.push_back({"b", 2, 3, 3, 3, 1});
    const Index v = 2;
    const Index n = 4 * 5;
    const Index a = predicted_ts_arc_count(s.road, 5);
    EXPECT_EQ(predicted_dimensions(s), (Dimensions{v * n + 3 * v * 4, v * a + 3 * v * 4}));
    const auto ip = build_ip(s);
    EXPECT_EQ(ip.rows(), v * n + 3 * v * 4);
    EXPECT_EQ(ip.cols(), v * a + 3 * v * 4);
}

TEST(BuildIp, RejectsInvalidScenario) {
    auto s = toy();
    s.evs[0].soc = 99;
    EXPECT_THROW(build_ip(s), Error);
    s = toy();
    s.evs[0].destination = 0;
    s.horizon = 1;
    EXPECT_THROW(build_ip(s), Error);
}

TEST(BuildIpProperty, DimensionsMatchPrediction) {
    for (std::uint64_t seed = 1; seed <= 100; ++seed) {
        const auto s = testing::random_scenario(seed, 5, 4, 6);
        ASSERT_TRUE(validate(s).empty()) << validate(s).front();
        const auto ip = build_ip(s);
        const auto d = predicted_dimensions(s);
        EXPECT_EQ(ip.rows(), d.rows) << "seed " << seed;
        EXPECT_EQ(ip.cols(), d.cols) << "seed " << seed;
        EXPECT_EQ(ip.layout.rows(), d.rows);
        EXPECT_EQ(static_cast<Index>(ip.b.size()), d.rows);
    }
}

TEST(BuildIpProperty, StructureOfTheMatrix) {
    for (std::uint64_t seed = 1; seed <= 40; ++seed) {
        const auto s = testing::random_scenario(seed * 31, 5, 3, 5);
        const auto ip = build_ip(s);
        const auto& L = ip.layout;
        std::map<Index, std::vector<Triplet>> by_col;
        for (const auto& t : ip.A.triplets()) {
            by_col[t.col].push_back(t);
            const bool battery_row =
                t.row >= L.family_begin(RowFamily::battery) && t.row < L.family_end(RowFamily::battery);
            if (!battery_row) {
                EXPECT_TRUE(t.value == 1 || t.value == -1) << "row " << t.row;
            }
        }
        for (Index c = 0; c < ip.cols(); ++c) {
            ASSERT_FALSE(by_col[c].empty()) << "column " << c << " unused, seed " << seed;
            EXPECT_LE(ip.lower[static_cast<std::size_t>(c)], ip.upper[static_cast<std::size_t>(c)]);
            if (!L.is_decision(c)) {
                ASSERT_EQ(by_col[c].size(), 1u);
                EXPECT_EQ(by_col[c][0].value, 1);
            } else {
                EXPECT_EQ(ip.lower[static_cast<std::size_t>(c)], 0);
                EXPECT_EQ(ip.upper[static_cast<std::size_t>(c)], 1);
                EXPECT_EQ(ip.objective.coefficient[static_cast<std::size_t>(c)] < 0, false);
            }
            if (!L.is_decision(c)) {
                EXPECT_EQ(ip.objective.coefficient[static_cast<std::size_t>(c)], 0);
            }
            if (c < L.block_end(Block::x)) {
                const auto info = L.describe(c);
                std::vector<Index> path;
                for (const auto& t : by_col[c])
                    if (t.row < L.family_end(RowFamily::path))
                        path.push_back(t.row);
                ASSERT_EQ(path.size(), 2u);
                const auto& arc = ip.network->arc(info.arc);
                Index head_val = 0;
                Index tail_val = 0;
                for (const auto& t : by_col[c]) {
                    if (t.row == L.path_row(info.ev, arc.head))
                        head_val = t.value;
                    if (t.row == L.path_row(info.ev, arc.tail))
                        tail_val = t.value;
                }
                EXPECT_EQ(head_val, 1);
                EXPECT_EQ(tail_val, -1);
            }
        }
    }
}

TEST(BuildIp, BatteryCoefficientsFollowRates) {
    auto s = reconstructed_q1();
    s.evs[0].rate = 3;
    s.evs[1].rate = 2;
    s.evs[1].max_soc = 9;
    const auto ip = build_ip(s);
    const auto& L = ip.layout;
    std::map<std::pair<Index, Index>, Index> entry;
    for (const auto& t : ip.A.triplets())
        entry[{t.row, t.col}] = t.value;
    // EV 1 receiving from EV 0 gains at EV 0's rate; EV 0 loses at its own.
    EXPECT_EQ((entry[{L.battery_row(1, 3), L.z(1, 0, 0, 1)}]), 3);
    EXPECT_EQ((entry[{L.battery_row(0, 3), L.z(1, 0, 0, 1)}]), -3);
    EXPECT_EQ((entry[{L.battery_row(0, 3), L.z(0, 1, 0, 1)}]), 2);
    EXPECT_EQ((entry[{L.battery_row(1, 3), L.z(0, 1, 0, 1)}]), -2);
    // events during (t, t+1) count from t+1 on
    EXPECT_EQ((entry.count({L.battery_row(1, 1), L.z(1, 0, 0, 1)})), 0u);
    EXPECT_EQ((entry[{L.battery_row(1, 2), L.z(1, 0, 0, 1)}]), 3);
    EXPECT_EQ(ip.lower[static_cast<std::size_t>(L.battery(1, 4))], -9);
    EXPECT_EQ(ip.upper[static_cast<std::size_t>(L.one_way(0, 1, 0, 0))], 1);
    EXPECT_EQ(ip.lower[static_cast<std::size_t>(L.one_way(0, 1, 0, 0))], 0);
    EXPECT_EQ(ip.lower[static_cast<std::size_t>(L.receive_once(0, 0))], -1);
}

TEST(BuildIp, FlowRightHandSide) {
    const auto ip = build_ip(reconstructed_q1());
    const auto& L = ip.layout;
    const auto& ts = *ip.network;
    EXPECT_EQ(ip.b[static_cast<std::size_t>(L.path_row(0, ts.id(1, 0)))], -1);
    EXPECT_EQ(ip.b[static_cast<std::size_t>(L.path_row(0, ts.id(0, 9)))], 1);
    EXPECT_EQ(ip.b[static_cast<std::size_t>(L.path_row(1, ts.id(0, 0)))], -1);
    EXPECT_EQ(ip.b[static_cast<std::size_t>(L.path_row(1, ts.id(1, 9)))], 1);
    EXPECT_EQ(ip.b[static_cast<std::size_t>(L.path_row(1, ts.id(1, 5)))], 0);

    Scenario loop = toy();
    loop.evs[0].destination = 0;
    const auto ip2 = build_ip(loop);
    EXPECT_EQ(ip2.b[static_cast<std::size_t>(ip2.layout.path_row(0, 0))], -1);
    EXPECT_EQ(ip2.b[static_cast<std::size_t>(ip2.layout.path_row(0, ip2.network->id(0, 1)))], 1);
}

TEST(BuildIp, EncodedPlanSatisfiesEveryRow) {
    const auto ip = build_ip(reconstructed_q1());
    const auto x = encode(ip, testing::q1_plan(*ip.network));
    for (Index r : residual(ip, x))
        EXPECT_EQ(r, 0);
    for (Index c = 0; c < ip.cols(); ++c) {
        EXPECT_GE(x.values[static_cast<std::size_t>(c)], ip.lower[static_cast<std::size_t>(c)]) << to_string(ip.layout.describe(c).block);
        EXPECT_LE(x.values[static_cast<std::size_t>(c)], ip.upper[static_cast<std::size_t>(c)]);
    }
    EXPECT_EQ(eval_objective(ip, x), 2);
    auto plan = testing::q1_plan(*ip.network);
    plan.normalize();
    EXPECT_EQ(decode(ip, x), plan);
}

TEST(BuildIpProperty, SingleFlipBreaksARow) {
    const auto ip = build_ip(reconstructed_q1());
    const auto x = encode(ip, testing::q1_plan(*ip.network));
    for (Index c = 0; c < ip.cols(); ++c) {
        auto y = x;
        auto& v = y.values[static_cast<std::size_t>(c)];
        v = v == ip.upper[static_cast<std::size_t>(c)] ? v - 1 : v + 1;
        const auto r = residual(ip, y);
        EXPECT_TRUE(std::any_of(r.begin(), r.end(), [](Index e) { return e != 0; })) << "column " << c;
    }
}

TEST(Objective, Values) {
    const auto ip = build_ip(toy());
    EXPECT_EQ(eval_objective(ip, Solution{std::vector<Index>(7, 0)}), 0);
    Plan p;
    p.routes.push_back({testing::route_through(*ip.network, {0, 1})});
    EXPECT_EQ(eval_objective(ip, encode(ip, p)), 5);
    EXPECT_EQ(plan_energy(toy(), *ip.network, p), 5);
    EXPECT_THROW(eval_objective(ip, Solution{std::vector<Index>(3, 0)}), Error);

    const auto zero = build_ip(toy(), ObjectiveKind::feasibility);
    for (Index c : zero.objective.coefficient)
        EXPECT_EQ(c, 0);
    EXPECT_EQ(zero.objective.tag, "feasibility");
    EXPECT_EQ(objective_from_string("energy"), ObjectiveKind::energy);
    EXPECT_THROW(objective_from_string("cost"), Error);
}

TEST(Objective, GridChargesCostTheirRate) {
    Scenario s;
    s.horizon = 3;
    s.road.add_node(NodeKind::parking);
    s.road.add_node(NodeKind::plain);
    s.road.add_arc(0, 1, 2, 1, true);
    s.grid_rate[0] = 2;
    s.evs.push_back({"a", 0, 1, 0, 4, 1});
    const auto ip = build_ip(s);
    Plan p;
    p.routes.push_back(testing::route_through(*ip.network, {0, 0, 1}));
    p.grid.push_back({0, 0, 0});
    const auto x = encode(ip, p);
    for (Index r : residual(ip, x))
        EXPECT_EQ(r, 0);
    EXPECT_EQ(eval_objective(ip, x), 4);
}

TEST(Layout, DescribeInvertsIndexing) {
    const auto s = testing::random_scenario(12345, 5, 4, 5);
    const auto ip = build_ip(s);
    const auto& L = ip.layout;
    for (Index c = 0; c < L.cols(); ++c) {
        const auto info = L.describe(c);
        Index back = -1;
        switch (info.block) {
        case Block::x:
            back = L.x(info.ev, info.arc);
            break;
        case Block::y:
            back = L.y(info.ev, info.node, info.t);
            break;
        case Block::z:
            back = L.z(info.ev, info.other, info.node, info.t);
            break;
        case Block::battery:
            back = L.battery(info.ev, info.t);
            break;
        case Block::grid_link:
            back = L.grid_link(info.ev, info.node, info.t);
            break;
        case Block::v2v_receiver:
            back = L.v2v_receiver(info.ev, info.other, info.node, info.t);
            break;
        case Block::v2v_giver:
            back = L.v2v_giver(info.ev, info.other, info.node, info.t);
            break;
        case Block::one_way:
            back = L.one_way(info.ev, info.other, info.node, info.t);
            break;
        case Block::receive_once:
            back = L.receive_once(info.ev, info.t);
            break;
        case Block::give_once:
            back = L.give_once(info.ev, info.t);
            break;
        }
        EXPECT_EQ(back, c);
        EXPECT_EQ(L.block_of(c), info.block);
    }
}

TEST(Mps, ToyHasSevenRowsAndColumns) {
    const auto ip = build_ip(toy());
    const auto path = std::filesystem::temp_directory_path() / "v2vc_toy.mps";
    export_mps(ip, path);
    const auto text = read_text_file(path);
    std::istringstream in(text);
    int e_rows = 0;
    std::set<std::string> names;
    bool in_columns = false;
    for (std::string line; std::getline(in, line);) {
        if (line.rfind(" E  ", 0) == 0)
            ++e_rows;
        if (line == "COLUMNS")
            in_columns = true;
        else if (line == "RHS")
            in_columns = false;
        else if (in_columns && line.find("MARKER") == std::string::npos)
            names.insert(line.substr(4, 8));
    }
    EXPECT_EQ(e_rows, 7);
    EXPECT_EQ(names.size(), 7u);
    EXPECT_NE(text.find("'INTORG'"), std::string::npos);
    EXPECT_NE(text.find("ENDATA"), std::string::npos);
    std::filesystem::remove(path);
}

void expect_round_trip(const IpInstance& ip) {
    std::stringstream buf;
    write_mps(ip, buf);
    const auto m = read_mps(buf);
    EXPECT_EQ(m.triplets, ip.A.triplets());
    EXPECT_EQ(m.b, ip.b);
    EXPECT_EQ(m.lower, ip.lower);
    EXPECT_EQ(m.upper, ip.upper);
    EXPECT_EQ(m.objective, ip.objective.coefficient);
    ASSERT_EQ(static_cast<Index>(m.integer.size()), ip.cols());
    for (Index c = 0; c < ip.cols(); ++c)
        EXPECT_EQ(m.integer[static_cast<std::size_t>(c)] != 0, ip.layout.is_decision(c));
}

TEST(Mps, RoundTripReproducesTheModel) {
    expect_round_trip(build_ip(reconstructed_q1()));
    expect_round_trip(build_ip(toy(), ObjectiveKind::feasibility));
    for (std::uint64_t seed = 1; seed <= 10; ++seed)
        expect_round_trip(build_ip(testing::random_scenario(seed)));
}

TEST(Mps, ReaderRejectsMalformedFiles) {
    std::istringstream missing_end("NAME X\nROWS\n N  OBJ\n");
    EXPECT_THROW(read_mps(missing_end), Error);
    std::istringstream bad_number("NAME X\nROWS\n N  OBJ\n E  R1\nCOLUMNS\n    C1  R1  abc\nENDATA\n");
    EXPECT_THROW(read_mps(bad_number), Error);
    std::istringstream bad_row("NAME X\nROWS\n N  OBJ\n L  R1\nENDATA\n");
    EXPECT_THROW(read_mps(bad_row), Error);
    std::istringstream other("NAME X\nROWS\n N  OBJ\n E  R1\nCOLUMNS\n    C1  R1  2.0  OBJ  1\nRHS\n    RHS  R1  4\n"
                             "BOUNDS\n BV BND C1\nENDATA\n");
    const auto m = read_mps(other);
    EXPECT_EQ(m.triplets, (std::vector<Triplet>{{0, 0, 2}}));
    EXPECT_EQ(m.b, std::vector<Index>{4});
    EXPECT_EQ(m.objective, std::vector<Index>{1});
    EXPECT_EQ(m.upper, std::vector<Index>{1});
}

TEST(SolutionIo, SparseRoundTrip) {
    const auto ip = build_ip(reconstructed_q1());
    const auto x = encode(ip, testing::q1_plan(*ip.network));
    auto j = solution_to_json(x);
    j["status"] = "optimal";
    EXPECT_EQ(solution_from_json(j), x);
    const auto path = std::filesystem::temp_directory_path() / "v2vc_solution.json";
    save_solution(j, path);
    EXPECT_EQ(load_solution(path), x);
    std::filesystem::remove(path);
    EXPECT_THROW(solution_from_json(nlohmann::json{{"cols", 2}, {"values", {{5, 1}}}}), Error);
    EXPECT_THROW(solution_from_json(nlohmann::json::object()), Error);
}

} // namespace
} // namespace v2vc
