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


#include "v2vc/bench.hpp"
#include "v2vc/scenario_io.hpp"
#include "v2vc/solution_io.hpp"

#include <gtest/gtest.h>

#include <sys/wait.h>

#include <cstdio>
#include <filesystem>

namespace v2vc {
namespace {

struct Run {
    int status;
    std::string out;
};

Run cli(const std::string& args) {
    const std::string cmd = std::string(V2VC_CLI) + " " + args + " 2>&1";
    FILE* pipe = ::popen(cmd.c_str(), "r");
    if (!pipe)
        throw std::runtime_error("popen failed");
    std::string out;
    char buf[4096];
    while (std::size_t n = std::fread(buf, 1, sizeof buf, pipe))
        out.append(buf, n);
    const int raw = ::pclose(pipe);
    return {WIFEXITED(raw) ? WEXITSTATUS(raw) : -1, out};
}

class Cli : public ::testing::Test {
  protected:
    void SetUp() override {
        dir_ = std::filesystem::temp_directory_path() /
               ("v2vc_cli_" + std::string(::testing::UnitTest::GetInstance()->current_test_info()->name()));
        std::filesystem::create_directories(dir_);
    }
    void TearDown() override { std::filesystem::remove_all(dir_); }

    std::string path(const std::string& name) const { return (dir_ / name).string(); }
    static std::string data(const std::string& name) { return std::string(V2VC_DATA_DIR) + "/" + name; }

    std::filesystem::path dir_;
};

TEST_F(Cli, LimitationFixtureSplitsTheSolvers) {
    const auto rv = cli("solve-rv2vc --scenario " + data("limitation.json"));
    EXPECT_EQ(rv.status, 0);
    EXPECT_EQ(rv.out.rfind("infeasible", 0), 0u) << rv.out;
    const auto ex = cli("solve-exact --scenario " + data("limitation.json") + " --out " + path("sol.json") +
                        " --trajectory " + path("soc.csv"));
    EXPECT_EQ(ex.status, 0);
    EXPECT_EQ(ex.out.rfind("optimal objective 4", 0), 0u) << ex.out;
    const auto v = cli("verify --scenario " + data("limitation.json") + " --solution " + path("sol.json"));
    EXPECT_EQ(v.status, 0) << v.out;
    EXPECT_EQ(read_text_file(path("soc.csv")).rfind("ev,t,soc\n", 0), 0u);
}

TEST_F(Cli, ReducedSampleIsFeasible) {
    ASSERT_EQ(cli("reduce --cnf " + data("sample.cnf") + " --out " + path("sample.json")).status, 0);
    EXPECT_EQ(load_scenario(path("sample.json")).horizon, 15);
    const auto ex = cli("solve-exact --objective feasibility --scenario " + path("sample.json") + " --out " + path("x.json"));
    EXPECT_EQ(ex.status, 0);
    EXPECT_EQ(ex.out.rfind("optimal", 0), 0u) << ex.out;
    EXPECT_EQ(cli("verify --scenario " + path("sample.json") + " --solution " + path("x.json")).status, 0);
}

TEST_F(Cli, VerifyRejectsATamperedSolution) {
    ASSERT_EQ(cli("gen --preset Q1-fixed --out " + path("q1.json")).status, 0);
    ASSERT_EQ(cli("solve-rv2vc --scenario " + path("q1.json") + " --out " + path("s.json")).status, 0);
    auto j = nlohmann::json::parse(read_text_file(path("s.json")));
    EXPECT_EQ(j["status"], "feasible");
    j["values"].erase(0);
    write_text_file(path("bad.json"), j.dump());
    const auto v = cli("verify --scenario " + path("q1.json") + " --solution " + path("bad.json"));
    EXPECT_EQ(v.status, 1);
    EXPECT_NE(v.out.find("rejected"), std::string::npos);
}

TEST_F(Cli, BuildAndExport) {
    ASSERT_EQ(cli("gen --preset Q1-fixed --out " + path("q1.json")).status, 0);
    const auto b = cli("build --scenario " + path("q1.json"));
    EXPECT_EQ(b.status, 0);
    EXPECT_NE(b.out.find("cols 252"), std::string::npos) << b.out;
    ASSERT_EQ(cli("export --scenario " + path("q1.json") + " --out " + path("q1.mps")).status, 0);
    EXPECT_NE(read_text_file(path("q1.mps")).find("ENDATA"), std::string::npos);
}

TEST_F(Cli, GenIsDeterministic) {
    ASSERT_EQ(cli("gen --preset Q3 --seed 9 --out " + path("a.json")).status, 0);
    ASSERT_EQ(cli("gen --preset Q3 --seed 9 --out " + path("b.json")).status, 0);
    EXPECT_EQ(read_text_file(path("a.json")), read_text_file(path("b.json")));
}

TEST_F(Cli, BenchQWritesSixRowsPerSeed) {
    const auto r = cli("bench --suite Q --methods exact,rv2vc --seeds 2 --runs 1 --out " + path("q.csv"));
    ASSERT_EQ(r.status, 0) << r.out;
    const auto records = parse_bench_csv(read_text_file(path("q.csv")));
    EXPECT_EQ(records.size(), 12u);
    for (const auto& rec : records)
        if (rec.gap) {
            EXPECT_GE(*rec.gap, 0);
        }
    ASSERT_EQ(cli("plotdata --in " + path("q.csv") + " --out " + path("plots")).status, 0);
    for (const char* f : {"variables.csv", "timing.csv", "quality.csv"})
        EXPECT_TRUE(std::filesystem::exists(path("plots/" + std::string(f)))) << f;
}

TEST_F(Cli, ErrorsExitNonzeroWithOneLine) {
    for (const std::string args : {"solve-exact --scenario /nonexistent.json", "reduce --cnf /nonexistent.cnf",
                                   "bench --suite X", "bench --methods gurobi --suite Q", "gen --preset Z9"}) {
        const auto r = cli(args);
        EXPECT_NE(r.status, 0) << args;
        EXPECT_EQ(std::count(r.out.begin(), r.out.end(), '\n'), 1) << args << ": " << r.out;
        EXPECT_EQ(r.out.rfind("error: ", 0), 0u) << r.out;
    }
    EXPECT_NE(cli("").status, 0);
    EXPECT_NE(cli("solve-rv2vc --scenario x --g2vc-edges maybe").status, 0);
}

} // namespace
} // namespace v2vc
