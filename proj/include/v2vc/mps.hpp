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

#ifndef V2VC_MPS_HPP
#define V2VC_MPS_HPP

#include "v2vc/ip_model.hpp"

#include <algorithm>
#include <charconv>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <limits>
#include <map>
#include <ostream>
#include <sstream>
#include <string>
#include <unordered_map>
#include <vector>

namespace v2vc {

/// Model as read back from an MPS file.
struct MpsModel {
    std::string name;
    std::vector<std::string> row_names;
    std::vector<std::string> col_names;
    std::vector<Triplet> triplets; // row-major
    std::vector<Index> b;
    std::vector<Index> lower;
    std::vector<Index> upper;
    std::vector<Index> objective;
    std::vector<std::uint8_t> integer;
};

namespace detail {

inline std::string mps_name(char prefix, Index k, Index count) {
    int width = 7;
    for (Index v = count; v >= 10'000'000; v /= 10)
        ++width;
    std::ostringstream out;
    out << prefix << std::setw(width) << std::setfill('0') << k + 1;
    return out.str();
}

inline void mps_field(std::ostream& out, const std::string& a, const std::string& b, Index value) {
    out << "    " << std::left << std::setw(8) << a << "  " << std::setw(8) << b << "  " << std::right << std::setw(12)
        << value << '\n';
}

inline Index parse_mps_integer(const std::string& token, std::size_t line) {
    Index v = 0;
    const auto* end = token.data() + token.size();
    auto [ptr, ec] = std::from_chars(token.data(), end, v);
    if (ec == std::errc{} && ptr == end)
        return v;
    // tolerate "3.0" or "1e+00" from other writers as long as the value is integral
    double d = 0;
    std::istringstream in(token);
    if (in >> d && in.eof() && d == static_cast<double>(static_cast<Index>(d)))
        return static_cast<Index>(d);
    throw Error("MPS line " + std::to_string(line) + ": expected an integer, got '" + token + "'");
}

} // namespace detail

/// Fixed-column MPS: one N row `OBJ`, equality rows, integer markers around
/// the X/Y/Z columns, and explicit LO/UP bounds on every column.
inline void write_mps(const IpInstance& ip, std::ostream& out, const std::string& name = "V2VC") {
    const Index rows = ip.rows();
    const Index cols = ip.cols();
    const Index decision_end = ip.layout.block_end(Block::z);
    std::vector<std::vector<std::pair<Index, Index>>> by_col(static_cast<std::size_t>(cols));
    for (const auto& t : ip.A.triplets())
        by_col[static_cast<std::size_t>(t.col)].push_back({t.row, t.value});

    out << "NAME          " << name << '\n';
    out << "ROWS\n";
    out << " N  OBJ\n";
    for (Index r = 0; r < rows; ++r)
        out << " E  " << detail::mps_name('R', r, rows) << '\n';
    out << "COLUMNS\n";
    bool in_marker = false;
    for (Index c = 0; c < cols; ++c) {
        const bool integral = c < decision_end;
        if (integral && !in_marker) {
            out << "    MARKER                 'MARKER'                 'INTORG'\n";
            in_marker = true;
        } else if (!integral && in_marker) {
            out << "    MARKER                 'MARKER'                 'INTEND'\n";
            in_marker = false;
        }
        const auto cname = detail::mps_name('C', c, cols);
        const Index obj = ip.objective.coefficient[static_cast<std::size_t>(c)];
        if (obj != 0 || by_col[static_cast<std::size_t>(c)].empty())
            detail::mps_field(out, cname, "OBJ", obj);
        for (const auto& [r, v] : by_col[static_cast<std::size_t>(c)])
            detail::mps_field(out, cname, detail::mps_name('R', r, rows), v);
    }
    if (in_marker)
        out << "    MARKER                 'MARKER'                 'INTEND'\n";
    out << "RHS\n";
    for (Index r = 0; r < rows; ++r)
        if (ip.b[static_cast<std::size_t>(r)] != 0)
            detail::mps_field(out, "RHS", detail::mps_name('R', r, rows), ip.b[static_cast<std::size_t>(r)]);
    out << "BOUNDS\n";
    for (Index c = 0; c < cols; ++c) {
        const auto cname = detail::mps_name('C', c, cols);
        out << " LO BND       " << std::left << std::setw(8) << cname << "  " << std::right << std::setw(12)
            << ip.lower[static_cast<std::size_t>(c)] << '\n';
        out << " UP BND       " << std::left << std::setw(8) << cname << "  " << std::right << std::setw(12)
            << ip.upper[static_cast<std::size_t>(c)] << '\n';
    }
    out << "ENDATA\n";
}

inline void export_mps(const IpInstance& ip, const std::filesystem::path& path) {
    std::ofstream out(path);
    if (!out)
        throw Error("cannot open " + path.string() + " for writing");
    write_mps(ip, out);
    if (!out)
        throw Error("write failed on " + path.string());
}

/// Reader for the subset written above plus the common bound types (FX, BV,
/// MI, PL); all numbers must be integral. Columns default to [0, +inf) like
/// standard MPS, with +inf stored as the largest Index.
inline MpsModel read_mps(std::istream& in) {
    MpsModel m;
    enum class Section { none, rows, columns, rhs, bounds, done } section = Section::none;
    std::unordered_map<std::string, Index> row_id;
    std::unordered_map<std::string, Index> col_id;
    std::string objective_row;
    std::string text;
    std::size_t line_no = 0;
    bool integral = false;
    const Index infinity = std::numeric_limits<Index>::max();
    std::vector<std::vector<std::pair<Index, Index>>> rows_entries;

    const auto fail = [&](const std::string& what) { throw Error("MPS line " + std::to_string(line_no) + ": " + what); };
    const auto column = [&](const std::string& name, bool create) -> Index {
        const auto it = col_id.find(name);
        if (it != col_id.end())
            return it->second;
        if (!create)
            fail("unknown column '" + name + "'");
        const auto id = static_cast<Index>(m.col_names.size());
        col_id.emplace(name, id);
        m.col_names.push_back(name);
        m.lower.push_back(0);
        m.upper.push_back(infinity);
        m.objective.push_back(0);
        m.integer.push_back(integral ? 1 : 0);
        return id;
    };

    while (std::getline(in, text)) {
        ++line_no;
        if (!text.empty() && text.back() == '\r')
            text.pop_back();
        if (text.empty() || text[0] == '*')
            continue;
        std::istringstream ls(text);
        std::vector<std::string> tok;
        for (std::string t; ls >> t;)
            tok.push_back(t);
        if (text[0] != ' ') {
            if (tok[0] == "NAME")
                m.name = tok.size() > 1 ? tok[1] : "";
            else if (tok[0] == "ROWS")
                section = Section::rows;
            else if (tok[0] == "COLUMNS")
                section = Section::columns;
            else if (tok[0] == "RHS")
                section = Section::rhs;
            else if (tok[0] == "BOUNDS")
                section = Section::bounds;
            else if (tok[0] == "ENDATA")
                section = Section::done;
            else
                fail("unknown section '" + tok[0] + "'");
            continue;
        }
        switch (section) {
        case Section::rows:
            if (tok.size() != 2)
                fail("malformed ROWS entry");
            if (tok[0] == "N") {
                if (objective_row.empty())
                    objective_row = tok[1];
            } else if (tok[0] == "E") {
                row_id.emplace(tok[1], static_cast<Index>(m.row_names.size()));
                m.row_names.push_back(tok[1]);
                m.b.push_back(0);
                rows_entries.emplace_back();
            } else {
                fail("only equality rows are supported");
            }
            break;
        case Section::columns: {
            if (tok.size() >= 3 && tok[1] == "'MARKER'") {
                if (tok[2] == "'INTORG'")
                    integral = true;
                else if (tok[2] == "'INTEND'")
                    integral = false;
                else
                    fail("unknown marker");
                break;
            }
            if (tok.size() != 3 && tok.size() != 5)
                fail("malformed COLUMNS entry");
            const Index c = column(tok[0], true);
            for (std::size_t k = 1; k + 1 < tok.size(); k += 2) {
                const Index v = detail::parse_mps_integer(tok[k + 1], line_no);
                if (tok[k] == objective_row) {
                    m.objective[static_cast<std::size_t>(c)] = v;
                } else {
                    const auto r = row_id.find(tok[k]);
                    if (r == row_id.end())
                        fail("unknown row '" + tok[k] + "'");
                    if (v != 0)
                        rows_entries[static_cast<std::size_t>(r->second)].push_back({c, v});
                }
            }
            break;
        }
        case Section::rhs:
            if (tok.size() != 3 && tok.size() != 5)
                fail("malformed RHS entry");
            for (std::size_t k = 1; k + 1 < tok.size(); k += 2) {
                const auto r = row_id.find(tok[k]);
                if (r == row_id.end())
                    fail("unknown row '" + tok[k] + "'");
                m.b[static_cast<std::size_t>(r->second)] = detail::parse_mps_integer(tok[k + 1], line_no);
            }
            break;
        case Section::bounds: {
            if (tok.size() < 3)
                fail("malformed BOUNDS entry");
            const auto c = static_cast<std::size_t>(column(tok[2], false));
            const auto value = [&] {
                if (tok.size() < 4)
                    fail("bound needs a value");
                return detail::parse_mps_integer(tok[3], line_no);
            };
            if (tok[0] == "LO")
                m.lower[c] = value();
            else if (tok[0] == "UP")
                m.upper[c] = value();
            else if (tok[0] == "FX")
                m.lower[c] = m.upper[c] = value();
            else if (tok[0] == "BV") {
                m.lower[c] = 0;
                m.upper[c] = 1;
            } else if (tok[0] == "MI")
                m.lower[c] = std::numeric_limits<Index>::min();
            else if (tok[0] == "PL")
                m.upper[c] = infinity;
            else
                fail("unsupported bound type '" + tok[0] + "'");
            break;
        }
        default:
            fail("data outside a section");
        }
    }
    if (section != Section::done)
        throw Error("MPS: missing ENDATA");
    for (std::size_t r = 0; r < rows_entries.size(); ++r) {
        auto& e = rows_entries[r];
        std::sort(e.begin(), e.end());
        for (const auto& [c, v] : e)
            m.triplets.push_back({static_cast<Index>(r), c, v});
    }
    return m;
}

inline MpsModel import_mps(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in)
        throw Error("cannot open " + path.string());
    return read_mps(in);
}

} // namespace v2vc

#endif // V2VC_MPS_HPP
