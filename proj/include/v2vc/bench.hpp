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


#ifndef V2VC_BENCH_HPP
#define V2VC_BENCH_HPP

#include "v2vc/exact/branch_and_bound.hpp"
#include "v2vc/generator.hpp"
#include "v2vc/ip_model.hpp"
#include "v2vc/rv2vc/lowering.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <condition_variable>
#include <cstdlib>
#include <functional>
#include <map>
#include <mutex>
#include <optional>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

namespace v2vc {

struct BenchCase {
    std::string id;
    std::uint64_t seed = 1;
    GeneratorConfig config;
};

struct BenchOptions {
    bool exact = true;
    bool rv2vc = true;
    bool g2vc = false;
    int runs = 5;
    Index exact_max_cols = 1'000'000;   // larger models are not attempted exactly
    std::int64_t budget_nodes = 5'000'000;
    unsigned threads = 0;               // 0: V2VC_THREADS or the hardware count
};

/// One CSV row. Missing values (skipped method, no gap) are empty optionals.
struct BenchRecord {
    std::string id;
    std::uint64_t seed = 0;
    Index rows = 0;
    Index cols = 0;
    std::size_t rv2vc_edges = 0;
    std::optional<double> build_ms;
    std::optional<double> exact_ms;
    std::optional<double> rv2vc_ms;
    std::string exact_status = "skipped";
    std::string rv2vc_status = "skipped";
    std::optional<Energy> exact_obj;
    std::optional<Energy> rv2vc_obj;
    std::optional<double> gap;
};

inline constexpr const char* kBenchHeader =
    "id,seed,rows,cols,rv2vc_edges,build_ms,exact_ms,rv2vc_ms,exact_status,rv2vc_status,exact_obj,rv2vc_obj,gap";

/// Cases of one suite ("Q", "B" or "random") for `count` seeds from `first`.
inline std::vector<BenchCase> bench_cases(const std::string& suite, std::uint64_t first, int count) {
    std::vector<Preset> presets;
    if (suite == "random") {
        presets = random_suite();
    } else if (suite == "Q" || suite == "B") {
        for (auto& p : benchmark_suite())
            if (p.id[0] == suite[0])
                presets.push_back(p);
    } else {
        throw Error("unknown suite '" + suite + "' (expected Q, B or random)");
    }
    std::vector<BenchCase> out;
    for (const auto& p : presets)
        for (int k = 0; k < count; ++k) {
            BenchCase c{p.id, first + static_cast<std::uint64_t>(k), p.config};
            c.config.seed = c.seed;
            out.push_back(std::move(c));
        }
    return out;
}

inline double median_of(std::vector<double> v) {
    if (v.empty())
        return 0;
    std::sort(v.begin(), v.end());
    const std::size_t h = v.size() / 2;
    return v.size() % 2 ? v[h] : (v[h - 1] + v[h]) / 2;
}

/// Runs both methods on one case. Timings are medians over `runs`
/// repetitions of the solve call alone; the exact search is warm started
/// with the rv2vc plan when there is one.
inline BenchRecord bench_one(const BenchCase& c, const BenchOptions& opt) {
    using clock = std::chrono::steady_clock;
    BenchRecord r;
    r.id = c.id;
    r.seed = c.seed;
    Scenario s;
    try {
        s = generate(c.config);
    } catch (const Error&) {
        r.exact_status = r.rv2vc_status = "no_scenario";
        return r;
    }
    const auto dims = predicted_dimensions(s);
    r.rows = dims.rows;
    r.cols = dims.cols;
    const TimeSpaceNetwork ts(s.road, s.horizon);
    const int runs = std::max(1, opt.runs);

    std::optional<Rv2vcResult> rv;
    if (opt.rv2vc || opt.exact) {
        std::vector<double> times;
        for (int k = 0; k < runs || !rv; ++k) {
            auto res = solve_rv2vc(s, ts, {opt.g2vc, energy_weight});
            times.push_back(res.total_ms());
            rv = std::move(res);
            if (!opt.rv2vc)
                break;
        }
        r.rv2vc_edges = rv->graph.edges.size();
        if (opt.rv2vc) {
            r.rv2vc_ms = median_of(times);
            r.rv2vc_status = rv->feasible ? "feasible" : "infeasible";
            if (rv->feasible)
                r.rv2vc_obj = rv->objective;
        }
    }

    if (opt.exact && dims.cols <= opt.exact_max_cols) {
        const auto t0 = clock::now();
        const IpInstance ip = build_ip(s);
        r.build_ms = std::chrono::duration<double, std::milli>(clock::now() - t0).count();
        BranchAndBoundOptions bo;
        bo.budget_nodes = opt.budget_nodes;
        if (rv && rv->feasible)
            bo.incumbent = rv->plan;
        std::vector<double> times;
        SolveOutcome out;
        try {
            for (int k = 0; k < runs; ++k) {
                const auto t1 = clock::now();
                out = solve_bb(s, bo);
                times.push_back(std::chrono::duration<double, std::milli>(clock::now() - t1).count());
            }
            r.exact_ms = median_of(times);
            r.exact_status = std::string(to_string(out.status));
            if (out.plan)
                r.exact_obj = out.objective;
        } catch (const Error&) {
            r.exact_status = "skipped";
        }
    }
    if (r.exact_obj && r.rv2vc_obj && r.exact_status == "optimal")
        r.gap = static_cast<double>(*r.rv2vc_obj - *r.exact_obj) / static_cast<double>(std::max<Energy>(1, *r.exact_obj));
    return r;
}

inline std::string to_csv(const BenchRecord& r) {
    std::ostringstream out;
    out.setf(std::ios::fixed);
    const auto ms = [&](const std::optional<double>& v) {
        if (v) {
            out.precision(3);
            out << *v;
        }
        out << ',';
    };
    out << r.id << ',' << r.seed << ',' << r.rows << ',' << r.cols << ',' << r.rv2vc_edges << ',';
    ms(r.build_ms);
    ms(r.exact_ms);
    ms(r.rv2vc_ms);
    out << r.exact_status << ',' << r.rv2vc_status << ',';
    if (r.exact_obj)
        out << *r.exact_obj;
    out << ',';
    if (r.rv2vc_obj)
        out << *r.rv2vc_obj;
    out << ',';
    if (r.gap) {
        out.precision(6);
        out << *r.gap;
    }
    return out.str();
}

namespace detail {

inline std::vector<std::string> split_csv_line(const std::string& line) {
    std::vector<std::string> cells;
    std::string cell;
    std::istringstream in(line);
    while (std::getline(in, cell, ','))
        cells.push_back(cell);
    if (!line.empty() && line.back() == ',')
        cells.emplace_back();
    return cells;
}

} // namespace detail

inline std::vector<BenchRecord> parse_bench_csv(const std::string& text) {
    std::istringstream in(text);
    std::string line;
    if (!std::getline(in, line) || line != kBenchHeader)
        throw Error("bench csv: unexpected header");
    std::vector<BenchRecord> out;
    std::size_t line_no = 1;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty())
            continue;
        const auto c = detail::split_csv_line(line);
        if (c.size() != 13)
            throw Error("bench csv line " + std::to_string(line_no) + ": expected 13 fields");
        try {
            BenchRecord r;
            const auto opt_d = [](const std::string& s) { return s.empty() ? std::nullopt : std::optional<double>(std::stod(s)); };
            const auto opt_e = [](const std::string& s) {
                return s.empty() ? std::nullopt : std::optional<Energy>(std::stoll(s));
            };
            r.id = c[0];
            r.seed = std::stoull(c[1]);
            r.rows = std::stoll(c[2]);
            r.cols = std::stoll(c[3]);
            r.rv2vc_edges = std::stoull(c[4]);
            r.build_ms = opt_d(c[5]);
            r.exact_ms = opt_d(c[6]);
            r.rv2vc_ms = opt_d(c[7]);
            r.exact_status = c[8];
            r.rv2vc_status = c[9];
            r.exact_obj = opt_e(c[10]);
            r.rv2vc_obj = opt_e(c[11]);
            r.gap = opt_d(c[12]);
            out.push_back(std::move(r));
        } catch (const std::exception&) {
            throw Error("bench csv line " + std::to_string(line_no) + ": malformed number");
        }
    }
    return out;
}

/// Worker count: the explicit option, else V2VC_THREADS, else the hardware
/// concurrency; at least 1.
inline unsigned bench_threads(const BenchOptions& opt) {
    unsigned n = opt.threads;
    if (n == 0)
        if (const char* env = std::getenv("V2VC_THREADS")) {
            try {
                n = static_cast<unsigned>(std::max(0L, std::stol(env)));
            } catch (const std::exception&) {
                throw Error("V2VC_THREADS must be a number");
            }
        }
    if (n == 0)
        n = std::thread::hardware_concurrency();
    return std::max(1u, n);
}

/// Runs all cases, several at a time, and hands each record to `emit` in case
/// order as soon as it and all earlier ones are done.
inline std::vector<BenchRecord> run_bench(const std::vector<BenchCase>& cases, const BenchOptions& opt,
                                          const std::function<void(const BenchRecord&)>& emit = {}) {
    std::vector<std::optional<BenchRecord>> done(cases.size());
    std::mutex mu;
    std::size_t next_emit = 0;
    std::atomic<std::size_t> next_case{0};
    std::exception_ptr failure;
    const auto work = [&] {
        for (;;) {
            const std::size_t k = next_case++;
            if (k >= cases.size())
                return;
            BenchRecord r;
            try {
                r = bench_one(cases[k], opt);
            } catch (...) {
                std::lock_guard lock(mu);
                if (!failure)
                    failure = std::current_exception();
                return;
            }
            std::lock_guard lock(mu);
            done[k] = std::move(r);
            while (next_emit < done.size() && done[next_emit]) {
                if (emit)
                    emit(*done[next_emit]);
                ++next_emit;
            }
        }
    };
    const unsigned n = std::min<unsigned>(bench_threads(opt), static_cast<unsigned>(std::max<std::size_t>(1, cases.size())));
    std::vector<std::thread> pool;
    for (unsigned k = 1; k < n; ++k)
        pool.emplace_back(work);
    work();
    for (auto& t : pool)
        t.join();
    if (failure)
        std::rethrow_exception(failure);
    std::vector<BenchRecord> out;
    for (auto& r : done)
        out.push_back(std::move(*r));
    return out;
}

/// Least-squares slope of log(y) against log(x) over the positive pairs.
inline double loglog_slope(const std::vector<double>& x, const std::vector<double>& y) {
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    std::size_t n = 0;
    for (std::size_t k = 0; k < x.size() && k < y.size(); ++k) {
        if (x[k] <= 0 || y[k] <= 0)
            continue;
        const double a = std::log(x[k]);
        const double b = std::log(y[k]);
        sx += a;
        sy += b;
        sxx += a * a;
        sxy += a * b;
        ++n;
    }
    const double den = static_cast<double>(n) * sxx - sx * sx;
    if (n < 2 || den == 0)
        throw Error("loglog_slope: need two distinct positive x values");
    return (static_cast<double>(n) * sxy - sx * sy) / den;
}

/// Plot series aggregated per scenario id, in first-appearance order.
struct PlotData {
    std::string variables; // id,rows,cols,rv2vc_edges (means over seeds)
    std::string timing;    // id,rv2vc_edges,rv2vc_ms,cols,exact_ms (medians of times)
    std::string quality;   // id,n,exact_min,exact_max,rv2vc_min,rv2vc_max,mean_gap,equal
};

inline PlotData plot_data(const std::vector<BenchRecord>& records) {
    std::vector<std::string> ids;
    std::map<std::string, std::vector<const BenchRecord*>> by_id;
    for (const auto& r : records) {
        if (!by_id.contains(r.id))
            ids.push_back(r.id);
        by_id[r.id].push_back(&r);
    }
    std::ostringstream var, tim, qual;
    for (auto* s : {&var, &tim, &qual})
        s->setf(std::ios::fixed);
    var << "id,rows,cols,rv2vc_edges\n";
    tim << "id,rv2vc_edges,rv2vc_ms,cols,exact_ms\n";
    qual << "id,n,exact_min,exact_max,rv2vc_min,rv2vc_max,mean_gap,equal\n";
    for (const auto& id : ids) {
        const auto& rs = by_id[id];
        double rows = 0, cols = 0, edges = 0;
        std::vector<double> rv_ms, ex_ms;
        std::optional<Energy> ex_lo, ex_hi, rv_lo, rv_hi;
        double gap_sum = 0;
        int gaps = 0, equal = 0;
        for (const auto* r : rs) {
            rows += static_cast<double>(r->rows);
            cols += static_cast<double>(r->cols);
            edges += static_cast<double>(r->rv2vc_edges);
            if (r->rv2vc_ms)
                rv_ms.push_back(*r->rv2vc_ms);
            if (r->exact_ms)
                ex_ms.push_back(*r->exact_ms);
            if (r->exact_obj && r->exact_status == "optimal") {
                ex_lo = std::min(ex_lo.value_or(*r->exact_obj), *r->exact_obj);
                ex_hi = std::max(ex_hi.value_or(*r->exact_obj), *r->exact_obj);
            }
            if (r->rv2vc_obj) {
                rv_lo = std::min(rv_lo.value_or(*r->rv2vc_obj), *r->rv2vc_obj);
                rv_hi = std::max(rv_hi.value_or(*r->rv2vc_obj), *r->rv2vc_obj);
            }
            if (r->gap) {
                gap_sum += *r->gap;
                ++gaps;
                equal += *r->gap == 0 ? 1 : 0;
            }
        }
        const double n = static_cast<double>(rs.size());
        var.precision(1);
        var << id << ',' << rows / n << ',' << cols / n << ',' << edges / n << '\n';
        tim.precision(3);
        tim << id << ',' << edges / n << ',';
        if (!rv_ms.empty())
            tim << median_of(rv_ms);
        tim << ',' << cols / n << ',';
        if (!ex_ms.empty())
            tim << median_of(ex_ms);
        tim << '\n';
        const auto put = [&](const std::optional<Energy>& v) {
            if (v)
                qual << *v;
            qual << ',';
        };
        qual << id << ',' << rs.size() << ',';
        put(ex_lo);
        put(ex_hi);
        put(rv_lo);
        put(rv_hi);
        qual.precision(6);
        if (gaps)
            qual << gap_sum / gaps;
        qual << ',' << equal << '\n';
    }
    return {var.str(), tim.str(), qual.str()};
}

} // namespace v2vc

#endif // V2VC_BENCH_HPP
