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

#ifndef V2VC_SCENARIO_IO_HPP
#define V2VC_SCENARIO_IO_HPP

// Scenario files are JSON documents; see docs/scenario-format.md.

#include "v2vc/scenario.hpp"

#include <json.hpp>

#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

namespace v2vc {

inline nlohmann::json to_json(const Scenario& s) {
    using nlohmann::json;
    json nodes = json::array();
    for (const auto& n : s.road.nodes()) {
        json node{{"id", n.id}, {"kind", std::string(to_string(n.kind))}};
        if (!n.name.empty())
            node["name"] = n.name;
        nodes.push_back(std::move(node));
    }
    json arcs = json::array();
    for (const auto& a : s.road.arcs())
        arcs.push_back({{"tail", a.tail}, {"head", a.head}, {"e_a", a.energy}, {"d_a", a.duration},
                        {"directed", a.directed}});
    json evs = json::array();
    for (const auto& ev : s.evs)
        evs.push_back({{"id", ev.id},
                       {"s_i", ev.origin},
                       {"f_i", ev.destination},
                       {"SOC_i", ev.soc},
                       {"MAXSOC_i", ev.max_soc},
                       {"e_i", ev.rate}});
    json grid = json::array();
    for (const auto& [p, rate] : s.grid_rate)
        grid.push_back({{"node", p}, {"e_p", rate}});
    return json{{"nodes", nodes}, {"arcs", arcs}, {"evs", evs}, {"e_p", grid}, {"T", s.horizon}};
}

inline Scenario scenario_from_json(const nlohmann::json& j) {
    try {
        Scenario s;
        std::vector<RoadNode> nodes;
        for (const auto& n : j.at("nodes"))
            nodes.push_back({n.at("id").get<NodeId>(), node_kind_from_string(n.at("kind").get<std::string>()),
                             n.value("name", std::string{})});
        std::vector<RoadArc> arcs;
        for (const auto& a : j.at("arcs"))
            arcs.push_back({a.at("tail").get<NodeId>(), a.at("head").get<NodeId>(), a.at("e_a").get<Energy>(),
                            a.at("d_a").get<TimeStep>(), a.value("directed", true)});
        s.road = RoadNetwork(std::move(nodes), std::move(arcs));
        for (const auto& e : j.at("evs"))
            s.evs.push_back({e.at("id").get<std::string>(), e.at("s_i").get<NodeId>(), e.at("f_i").get<NodeId>(),
                             e.at("SOC_i").get<Energy>(), e.at("MAXSOC_i").get<Energy>(), e.at("e_i").get<Energy>()});
        for (const auto& g : j.at("e_p"))
            s.grid_rate[g.at("node").get<NodeId>()] = g.at("e_p").get<Energy>();
        s.horizon = j.at("T").get<TimeStep>();
        return s;
    } catch (const nlohmann::json::exception& e) {
        throw Error(std::string("malformed scenario document: ") + e.what());
    }
}

inline std::string serialize(const Scenario& s) { return to_json(s).dump(2) + "\n"; }

inline Scenario deserialize_scenario(const std::string& text) {
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(text);
    } catch (const nlohmann::json::exception& e) {
        throw Error(std::string("scenario is not valid JSON: ") + e.what());
    }
    return scenario_from_json(j);
}

inline std::string read_text_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw Error("cannot open '" + path.string() + "'");
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

inline void write_text_file(const std::filesystem::path& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    if (!out)
        throw Error("cannot write '" + path.string() + "'");
    out << text;
    if (!out)
        throw Error("write failed for '" + path.string() + "'");
}

inline Scenario load_scenario(const std::filesystem::path& path) { return deserialize_scenario(read_text_file(path)); }

inline void save_scenario(const Scenario& s, const std::filesystem::path& path) { write_text_file(path, serialize(s)); }

} // namespace v2vc

#endif // V2VC_SCENARIO_IO_HPP
