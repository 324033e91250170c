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

#ifndef V2VC_SOLUTION_IO_HPP
#define V2VC_SOLUTION_IO_HPP

#include "v2vc/plan.hpp"
#include "v2vc/scenario_io.hpp"

#include <json.hpp>

#include <string>

namespace v2vc {

/// Sparse form: {"cols": n, "values": [[col, value], ...]} listing nonzeros
/// only. Extra keys (status, objective) are carried through untouched.
inline nlohmann::json solution_to_json(const Solution& sol) {
    nlohmann::json values = nlohmann::json::array();
    for (std::size_t c = 0; c < sol.values.size(); ++c)
        if (sol.values[c] != 0)
            values.push_back({static_cast<Index>(c), sol.values[c]});
    return {{"cols", static_cast<Index>(sol.values.size())}, {"values", std::move(values)}};
}

inline Solution solution_from_json(const nlohmann::json& j) {
    try {
        const auto cols = j.at("cols").get<Index>();
        if (cols < 0)
            throw Error("solution: negative column count");
        Solution sol{std::vector<Index>(static_cast<std::size_t>(cols), 0)};
        for (const auto& entry : j.at("values")) {
            const auto c = entry.at(0).get<Index>();
            if (c < 0 || c >= cols)
                throw Error("solution: column " + std::to_string(c) + " out of range");
            sol.values[static_cast<std::size_t>(c)] = entry.at(1).get<Index>();
        }
        return sol;
    } catch (const nlohmann::json::exception& e) {
        throw Error(std::string("solution: ") + e.what());
    }
}

inline void save_solution(const nlohmann::json& j, const std::filesystem::path& path) {
    write_text_file(path, j.dump(1) + "\n");
}

inline Solution load_solution(const std::filesystem::path& path) {
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(read_text_file(path));
    } catch (const nlohmann::json::exception& e) {
        throw Error(path.string() + ": " + e.what());
    }
    return solution_from_json(j);
}

} // namespace v2vc

#endif // V2VC_SOLUTION_IO_HPP
