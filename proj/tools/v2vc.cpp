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


#include "v2vc.hpp"

#include <CLI11.hpp>

#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>

namespace {

using namespace v2vc;

constexpr Index kMaxSolutionCols = 20'000'000;

struct Flags {
    std::string scenario;
    std::string cnf;
    std::string out;
    std::string solution;
    std::string input;
    std::string preset = "Q1";
    std::string methods = "exact,rv2vc";
    std::string suite = "Q,random";
    std::string g2vc = "off";
    std::string objective = "energy";
    std::string trajectory;
    std::string actions;
    std::uint64_t seed = 1;
    int seeds = 5;
    int runs = 5;
    std::int64_t budget_nodes = 5'000'000;
    Index exact_max_cols = 1'000'000;
    unsigned threads = 0;
};

std::vector<std::string> split_list(const std::string& s) {
    std::vector<std::string> out;
    std::stringstream in(s);
    std::string item;
    while (std::getline(in, item, ','))
        if (!item.empty())
            out.push_back(item);
    return out;
}

void write_or_print(const std::string& path, const std::string& text) {
    if (path.empty() || path == "-")
        std::cout << text;
    else
        write_text_file(path, text);
}

Scenario need_scenario(const Flags& f) {
    if (f.scenario.empty())
        throw Error("--scenario is required");
    return load_scenario(f.scenario);
}

// Writes the plan as a sparse solution vector plus status fields.
void write_solution(const Scenario& s, const TimeSpaceNetwork& ts, const std::optional<Plan>& plan,
                    std::string_view status, Energy objective, const std::string& path) {
    nlohmann::json j;
    if (plan) {
        if (predicted_dimensions(s).cols > kMaxSolutionCols)
            throw Error("model too large to write a solution vector");
        const VariableLayout layout(s, ts.arc_count());
        j = solution_to_json(encode(s, ts, layout, *plan));
        j["objective"] = objective;
    } else {
        j = {{"cols", predicted_dimensions(s).cols}, {"values", nlohmann::json::array()}};
    }
    j["status"] = std::string(status);
    save_solution(j, path);
}

int cmd_gen(const Flags& f) {
    if (f.preset == "Q1-fixed") {
        write_or_print(f.out, serialize(reconstructed_q1()));
        return 0;
    }
    auto config = find_preset(f.preset);
    if (!config)
        for (const auto& p : random_suite())
            if (p.id == f.preset)
                config = p.config;
    if (!config)
        throw Error("unknown preset '" + f.preset + "'");
    config->seed = f.seed;
    write_or_print(f.out, serialize(generate(*config)));
    return 0;
}

int cmd_build(const Flags& f) {
    const Scenario s = need_scenario(f);
    const auto predicted = predicted_dimensions(s);
    std::ostringstream out;
    out << "rows " << predicted.rows << "\ncols " << predicted.cols << '\n';
    if (predicted.cols <= kMaxSolutionCols) {
        const IpInstance ip = build_ip(s, objective_from_string(f.objective));
        out << "nonzeros " << ip.A.nonzeros() << '\n';
    }
    write_or_print(f.out, out.str());
    return 0;
}

int cmd_export(const Flags& f) {
    const Scenario s = need_scenario(f);
    if (f.out.empty())
        throw Error("--out is required");
    export_mps(build_ip(s, objective_from_string(f.objective)), f.out);
    return 0;
}

int cmd_solve_exact(const Flags& f) {
    const Scenario s = need_scenario(f);
    const TimeSpaceNetwork ts(s.road, s.horizon);
    BranchAndBoundOptions opt;
    opt.budget_nodes = f.budget_nodes;
    opt.objective = objective_from_string(f.objective);
    const SolveOutcome res = solve_bb(s, opt);
    std::cout << to_string(res.status);
    if (res.plan)
        std::cout << " objective " << res.objective;
    std::cout << " nodes " << res.stats.nodes << '\n';
    if (!f.out.empty())
        write_solution(s, ts, res.plan, to_string(res.status), res.objective, f.out);
    if (!f.trajectory.empty() && res.plan)
        write_text_file(f.trajectory, trajectory_csv(s, ts, *res.plan));
    return 0;
}

int cmd_solve_rv2vc(const Flags& f) {
    const Scenario s = need_scenario(f);
    const TimeSpaceNetwork ts(s.road, s.horizon);
    const auto res = solve_rv2vc(s, ts, {f.g2vc == "on", energy_weight});
    std::cout << (res.feasible ? "feasible" : "infeasible");
    if (res.feasible)
        std::cout << " objective " << res.objective;
    std::cout << " edges " << res.graph.edges.size() << '\n';
    if (!f.out.empty())
        write_solution(s, ts, res.plan, res.feasible ? "feasible" : "infeasible", res.objective, f.out);
    if (!f.actions.empty())
        write_text_file(f.actions, action_csv(s, res.graph));
    if (!f.trajectory.empty() && res.plan)
        write_text_file(f.trajectory, trajectory_csv(s, ts, *res.plan));
    return 0;
}

int cmd_verify(const Flags& f) {
    const Scenario s = need_scenario(f);
    if (f.solution.empty())
        throw Error("--solution is required");
    const Solution sol = load_solution(f.solution);
    const IpInstance ip = build_ip(s);
    if (static_cast<Index>(sol.values.size()) != ip.cols())
        throw Error("solution has " + std::to_string(sol.values.size()) + " columns, model has " +
                    std::to_string(ip.cols()));
    const auto algebraic = verify_algebraic(ip, sol);
    const auto semantic = verify_semantic(s, *ip.network, ip.layout, sol);
    std::cout << "algebraic " << algebraic.summary() << "\nsemantic " << semantic.summary() << '\n';
    return algebraic.accepted() && semantic.accepted() ? 0 : 1;
}

int cmd_reduce(const Flags& f) {
    if (f.cnf.empty())
        throw Error("--cnf is required");
    const auto ri = reduce_to_v2vc(parse_dimacs(read_text_file(f.cnf)));
    write_or_print(f.out, serialize(ri.scenario));
    std::cerr << "nodes " << ri.scenario.road.node_count() << " evs " << ri.scenario.evs.size() << " T "
              << ri.scenario.horizon << '\n';
    return 0;
}

int cmd_bench(const Flags& f) {
    BenchOptions opt;
    opt.exact = opt.rv2vc = false;
    for (const auto& m : split_list(f.methods)) {
        if (m == "exact")
            opt.exact = true;
        else if (m == "rv2vc")
            opt.rv2vc = true;
        else
            throw Error("unknown method '" + m + "' (expected exact, rv2vc)");
    }
    opt.g2vc = f.g2vc == "on";
    opt.runs = f.runs;
    opt.budget_nodes = f.budget_nodes;
    opt.exact_max_cols = f.exact_max_cols;
    opt.threads = f.threads;
    std::vector<BenchCase> cases;
    for (const auto& suite : split_list(f.suite)) {
        auto more = bench_cases(suite, f.seed, f.seeds);
        cases.insert(cases.end(), more.begin(), more.end());
    }
    std::ofstream file;
    if (!f.out.empty() && f.out != "-") {
        file.open(f.out);
        if (!file)
            throw Error("cannot write " + f.out);
    }
    std::ostream& out = file.is_open() ? file : std::cout;
    out << kBenchHeader << '\n' << std::flush;
    run_bench(cases, opt, [&](const BenchRecord& r) { out << to_csv(r) << '\n' << std::flush; });
    return 0;
}

int cmd_plotdata(const Flags& f) {
    if (f.input.empty())
        throw Error("--in is required");
    const auto data = plot_data(parse_bench_csv(read_text_file(f.input)));
    const std::filesystem::path dir = f.out.empty() ? "." : f.out;
    std::filesystem::create_directories(dir);
    write_text_file(dir / "variables.csv", data.variables);
    write_text_file(dir / "timing.csv", data.timing);
    write_text_file(dir / "quality.csv", data.quality);
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Vehicle-to-vehicle charging planner"};
    app.require_subcommand(1);
    Flags f;
    const auto on_off = CLI::IsMember({"on", "off"});
    const auto objective = CLI::IsMember({"energy", "feasibility"});

    auto* gen = app.add_subcommand("gen", "Generate a preset scenario");
    gen->add_option("--preset", f.preset, "Preset id (B1..B11, Q1..Q6, R15..R120, Q1-fixed)");
    gen->add_option("--seed", f.seed, "Random seed");
    gen->add_option("--out", f.out, "Output scenario file");

    auto* build = app.add_subcommand("build", "Print the model dimensions");
    auto* exp = app.add_subcommand("export", "Write the model as MPS");
    auto* exact = app.add_subcommand("solve-exact", "Solve with branch and bound");
    auto* rv = app.add_subcommand("solve-rv2vc", "Solve with the one-action heuristic");
    auto* verify = app.add_subcommand("verify", "Check a solution against a scenario");
    for (auto* sub : {build, exp, exact, rv, verify})
        sub->add_option("--scenario", f.scenario, "Scenario file")->required();
    for (auto* sub : {build, exp, exact})
        sub->add_option("--objective", f.objective, "energy or feasibility")->check(objective);
    build->add_option("--out", f.out, "Output text file");
    exp->add_option("--out", f.out, "Output MPS file")->required();
    exact->add_option("--out", f.out, "Output solution file");
    exact->add_option("--budget-nodes", f.budget_nodes, "Search node budget");
    exact->add_option("--trajectory", f.trajectory, "Write SOC trajectories as CSV");
    rv->add_option("--out", f.out, "Output solution file");
    rv->add_option("--g2vc-edges", f.g2vc, "Include grid charging actions")->check(on_off);
    rv->add_option("--actions", f.actions, "Write the action graph as CSV");
    rv->add_option("--trajectory", f.trajectory, "Write SOC trajectories as CSV");
    verify->add_option("--solution", f.solution, "Solution file")->required();

    auto* reduce = app.add_subcommand("reduce", "Reduce a 3-CNF formula to a scenario");
    reduce->add_option("--cnf", f.cnf, "DIMACS CNF file")->required();
    reduce->add_option("--out", f.out, "Output scenario file");

    auto* bench = app.add_subcommand("bench", "Run a benchmark suite and write CSV");
    bench->add_option("--suite", f.suite, "Comma-separated suites: B, Q, random");
    bench->add_option("--methods", f.methods, "Comma-separated methods: exact, rv2vc");
    bench->add_option("--seed", f.seed, "First seed");
    bench->add_option("--seeds", f.seeds, "Seeds per preset")->check(CLI::PositiveNumber);
    bench->add_option("--runs", f.runs, "Timing runs per method")->check(CLI::PositiveNumber);
    bench->add_option("--budget-nodes", f.budget_nodes, "Exact search node budget");
    bench->add_option("--exact-max-cols", f.exact_max_cols, "Skip the exact solver above this column count");
    bench->add_option("--threads", f.threads, "Worker count (default: V2VC_THREADS or all cores)");
    bench->add_option("--g2vc-edges", f.g2vc, "Include grid charging actions")->check(on_off);
    bench->add_option("--out", f.out, "Output CSV file");

    auto* plot = app.add_subcommand("plotdata", "Aggregate bench CSV into plot series");
    plot->add_option("--in", f.input, "Bench CSV file")->required();
    plot->add_option("--out", f.out, "Output directory");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e);
    }
    try {
        if (*gen)
            return cmd_gen(f);
        if (*build)
            return cmd_build(f);
        if (*exp)
            return cmd_export(f);
        if (*exact)
            return cmd_solve_exact(f);
        if (*rv)
            return cmd_solve_rv2vc(f);
        if (*verify)
            return cmd_verify(f);
        if (*reduce)
            return cmd_reduce(f);
        if (*bench)
            return cmd_bench(f);
        return cmd_plotdata(f);
    } catch (const std::exception& e) {
        std::cout.flush();
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    }
}
