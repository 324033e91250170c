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


#ifndef V2VC_REDUCTION_CNF_HPP
#define V2VC_REDUCTION_CNF_HPP

#include "v2vc/road_network.hpp"

#include <cstdint>
#include <cstdlib>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

namespace v2vc {

/// Boolean formula in conjunctive normal form. Literal +i is atom x_i, -i its
/// negation; atoms are numbered from 1.
struct CnfFormula {
    int atoms = 0;
    std::vector<std::vector<int>> clauses;

    std::vector<std::string> violations() const {
        std::vector<std::string> out;
        if (atoms < 0)
            out.push_back("atom count must be >= 0");
        for (std::size_t j = 0; j < clauses.size(); ++j) {
            const auto& c = clauses[j];
            const std::string where = "clause " + std::to_string(j + 1);
            if (c.empty())
                out.push_back(where + ": empty clause");
            if (c.size() > 3)
                out.push_back(where + ": more than three literals");
            for (int lit : c)
                if (lit == 0 || std::abs(lit) > atoms)
                    out.push_back(where + ": literal " + std::to_string(lit) + " out of range");
        }
        return out;
    }

    friend bool operator==(const CnfFormula&, const CnfFormula&) = default;
};

/// Truth value per atom; entry k belongs to atom k+1.
using TruthAssignment = std::vector<bool>;

inline bool satisfies(const CnfFormula& f, const TruthAssignment& a) {
    if (a.size() != static_cast<std::size_t>(f.atoms))
        throw Error("assignment has " + std::to_string(a.size()) + " values for " + std::to_string(f.atoms) +
                    " atoms");
    for (const auto& c : f.clauses) {
        bool sat = false;
        for (int lit : c)
            sat = sat || a[static_cast<std::size_t>(std::abs(lit) - 1)] == (lit > 0);
        if (!sat)
            return false;
    }
    return true;
}

/// First satisfying assignment in truth-table order (all false first), or
/// nullopt. Exponential; meant for small formulas.
inline std::optional<TruthAssignment> truth_table_sat(const CnfFormula& f) {
    if (f.atoms > 24)
        throw Error("truth_table_sat: too many atoms for exhaustive search");
    const std::uint32_t total = 1u << f.atoms;
    TruthAssignment a(static_cast<std::size_t>(f.atoms));
    for (std::uint32_t mask = 0; mask < total; ++mask) {
        for (int i = 0; i < f.atoms; ++i)
            a[static_cast<std::size_t>(i)] = (mask >> i & 1u) != 0;
        if (satisfies(f, a))
            return a;
    }
    return std::nullopt;
}

/// DIMACS CNF reader. Comment lines start with 'c'; the header is
/// `p cnf <atoms> <clauses>`; each clause ends with 0 and may span lines.
inline CnfFormula parse_dimacs(const std::string& text) {
    CnfFormula f;
    bool header = false;
    long declared = 0;
    std::vector<int> current;
    std::istringstream lines(text);
    std::string line;
    int line_no = 0;
    const auto fail = [&](const std::string& why) { throw Error("dimacs line " + std::to_string(line_no) + ": " + why); };
    while (std::getline(lines, line)) {
        ++line_no;
        std::istringstream in(line);
        std::string first;
        if (!(in >> first) || first[0] == 'c')
            continue;
        if (first == "%")
            break;
        if (first == "p") {
            std::string fmt;
            long n = -1, m = -1;
            std::string extra;
            if (header || !(in >> fmt >> n >> m) || fmt != "cnf" || n < 0 || m < 0 || (in >> extra))
                fail("malformed header (expected 'p cnf <atoms> <clauses>')");
            header = true;
            f.atoms = static_cast<int>(n);
            declared = m;
            continue;
        }
        if (!header)
            fail("clause before the 'p cnf' header");
        std::istringstream tokens(line);
        std::string tok;
        while (tokens >> tok) {
            char* end = nullptr;
            const long lit = std::strtol(tok.c_str(), &end, 10);
            if (*end != '\0')
                fail("'" + tok + "' is not an integer literal");
            if (lit == 0) {
                if (current.empty())
                    fail("empty clause");
                if (current.size() > 3)
                    fail("clause with " + std::to_string(current.size()) + " literals (at most 3 allowed)");
                f.clauses.push_back(current);
                current.clear();
                continue;
            }
            if (std::labs(lit) > f.atoms)
                fail("literal " + tok + " out of range 1.." + std::to_string(f.atoms));
            current.push_back(static_cast<int>(lit));
        }
    }
    if (!header)
        throw Error("dimacs: missing 'p cnf' header");
    if (!current.empty())
        throw Error("dimacs: last clause is not terminated by 0");
    if (static_cast<long>(f.clauses.size()) != declared)
        throw Error("dimacs: header declares " + std::to_string(declared) + " clauses, found " +
                    std::to_string(f.clauses.size()));
    return f;
}

inline std::string write_dimacs(const CnfFormula& f) {
    std::ostringstream out;
    out << "p cnf " << f.atoms << ' ' << f.clauses.size() << '\n';
    for (const auto& c : f.clauses) {
        for (int lit : c)
            out << lit << ' ';
        out << "0\n";
    }
    return out.str();
}

} // namespace v2vc

#endif // V2VC_REDUCTION_CNF_HPP
