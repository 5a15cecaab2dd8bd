// Copyright 2026 The relaxplace Authors
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
#include <gtest/gtest.h>
#include <sys/wait.h>
#include <unistd.h>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "json.hpp"

namespace {

namespace fs = std::filesystem;
using Json = nlohmann::json;

struct Result {
    int code;
    std::string out;
};

Result run(const std::string& args) {
    std::string cmd = std::string(RELAXPLACE_CLI) + " " + args + " 2>/dev/null";
    FILE* p = ::popen(cmd.c_str(), "r");
    std::string out;
    char buf[4096];
    std::size_t n;
    while ((n = std::fread(buf, 1, sizeof buf, p)) > 0) out.append(buf, n);
    int status = ::pclose(p);
    return {WIFEXITED(status) ? WEXITSTATUS(status) : -1, out};
}

class Cli : public ::testing::Test {
protected:
    void SetUp() override {
        dir_ = fs::temp_directory_path() / ("relaxplace-cli-" + std::to_string(::getpid()));
        fs::remove_all(dir_);
        fs::create_directories(dir_);
    }
    void TearDown() override { fs::remove_all(dir_); }

    std::string path(const std::string& name) const { return (dir_ / name).string(); }
    std::string write(const std::string& name, const std::string& text) const {
        std::ofstream(dir_ / name) << text;
        return path(name);
    }

    fs::path dir_;
    const std::string lighting_ = RELAXPLACE_DATA_DIR "/street_lighting.lp";
};

TEST_F(Cli, SolveJsonListsCarbonLifts) {
    Result r = run("solve " + lighting_ + " --format json");
    ASSERT_EQ(r.code, 0);
    Json j = Json::parse(r.out);
    EXPECT_EQ(j["status"], "optimal");
    ASSERT_EQ(j["lifted"].size(), 2u);
    for (const auto& l : j["lifted"]) EXPECT_EQ(l[1]["key"], "carbon_intensity");
    EXPECT_EQ(j["cost"], Json::parse(R"({"1":2})"));
}

TEST_F(Cli, SolveHuman) {
    Result r = run("solve " + lighting_ + " --strategy core");
    EXPECT_EQ(r.code, 0);
    EXPECT_NE(r.out.find("deploy(\"ml_opt\",\"prvt_cloud\")"), std::string::npos);
    EXPECT_NE(r.out.find("lift(\"lights_driver\",lte(\"carbon_intensity\",150))"), std::string::npos);
}

TEST_F(Cli, InfeasibleExitCode) {
    auto f = write("u.lp", R"(node("a"). node_attr("a","gpu",false). service("s"). hreq("s",eq("gpu",true)).)");
    Result r = run("solve " + f);
    EXPECT_EQ(r.code, 3);
    EXPECT_NE(r.out.find("hard requirements unsatisfiable"), std::string::npos);
}

TEST_F(Cli, ParseErrorExitCode) {
    EXPECT_EQ(run("solve " + write("e.lp", "node(\"a\"")).code, 1);
    EXPECT_EQ(run("solve " + path("missing.lp")).code, 1);
    EXPECT_EQ(run("solve " + lighting_ + " --strategy fast").code, 1);
    EXPECT_EQ(run("solve " + lighting_ + " --timeout 0").code, 1);
}

TEST_F(Cli, TimeoutOnLargeInstance) {
    ASSERT_EQ(run("generate --out " + path("g") + " --infra-sizes 100 --app-sizes 25 --count 1 --seed 4").code, 0);
    Result r = run("solve " + path("g/i100_a25_0.lp") + " --timeout 1 --format json");
    EXPECT_TRUE(r.code == 0 || r.code == 2 || r.code == 4) << r.code;
    Json j = Json::parse(r.out);
    EXPECT_LE(j["elapsed_s"].get<double>(), 2.0);
    if (r.code == 2) EXPECT_FALSE(j["incumbents"].empty());
}

TEST_F(Cli, ValidateRoundTrip) {
    Result s = run("solve " + lighting_ + " --format json");
    auto sol = write("s.json", s.out);
    Result v = run("validate " + lighting_ + " " + sol);
    EXPECT_EQ(v.code, 0);
    EXPECT_NE(v.out.find("valid"), std::string::npos);

    Result streamed = run("solve " + lighting_ + " --format json --emit-intermediate");
    EXPECT_EQ(run("validate " + lighting_ + " " + write("t.json", streamed.out)).code, 0);
}

TEST_F(Cli, ValidateTamperedAssignment) {
    Json j = Json::parse(run("solve " + lighting_ + " --format json").out);
    for (auto& pair : j["assignment"])
        if (pair[0] == "ml_opt") pair[1] = "edge_node";
    Result v = run("validate " + lighting_ + " " + write("bad.json", j.dump()));
    EXPECT_EQ(v.code, 2);
    EXPECT_NE(v.out.find("violation:"), std::string::npos);
}

TEST_F(Cli, ValidateCostMismatch) {
    Json j = Json::parse(run("solve " + lighting_ + " --format json").out);
    j["cost"] = Json::parse(R"({"1":1})");
    Result v = run("validate " + lighting_ + " " + write("c.json", j.dump()));
    EXPECT_EQ(v.code, 2);
    EXPECT_NE(v.out.find("recomputed {L1:2}"), std::string::npos);
}

TEST_F(Cli, ValidateMalformed) {
    EXPECT_EQ(run("validate " + lighting_ + " " + write("m.json", "{")).code, 1);
    EXPECT_EQ(run("validate " + write("e.lp", "x(") + " " + write("m2.json", "{}")).code, 1);
}

TEST_F(Cli, GenerateManifestAndDeterminism) {
    std::string grid = " --infra-sizes 50 --app-sizes 5 --count 2 --seed 9";
    ASSERT_EQ(run("generate --out " + path("a") + grid).code, 0);
    ASSERT_EQ(run("generate --out " + path("b") + grid + " --jobs 1").code, 0);
    std::ifstream in(path("a/manifest.json"));
    Json m = Json::parse(in);
    EXPECT_EQ(m["seed"], 9);
    ASSERT_EQ(m["files"].size(), 2u);
    for (const auto& f : m["files"]) {
        EXPECT_EQ(f["sha256"].get<std::string>().size(), 64u);
        auto read = [](const std::string& p) {
            std::ifstream s(p);
            std::stringstream b;
            b << s.rdbuf();
            return b.str();
        };
        std::string name = f["name"];
        EXPECT_EQ(read(path("a/" + name)), read(path("b/" + name)));
    }
    EXPECT_FALSE(fs::exists(path("a/i50_a5_2.lp")));
}

TEST_F(Cli, GenerateRejectsBadConfig) {
    EXPECT_EQ(run("generate --out " + path("x") + " --er-probability 3/2").code, 1);
    EXPECT_EQ(run("generate --out " + path("x") + " --infra-sizes 0").code, 1);
    EXPECT_EQ(run("generate --out " + path("x") + " --templates " + write("t.json", "[]")).code, 1);
}

TEST_F(Cli, BenchWritesCsv) {
    ASSERT_EQ(run("generate --out " + path("g") + " --infra-sizes 50 --app-sizes 5 --count 3").code, 0);
    ASSERT_EQ(run("bench " + path("g") + " --timeout 10 --jobs 2 --csv " + path("out.csv")).code, 0);
    std::ifstream in(path("out.csv"));
    std::vector<std::string> rows;
    for (std::string l; std::getline(in, l);) rows.push_back(l);
    ASSERT_EQ(rows.size(), 7u);
    EXPECT_EQ(rows[0], "instance,n,k,strategy,status,cost,ttfs_s,tto_s,incumbents_json");
}

TEST_F(Cli, CrosscheckSkipsWithoutSolver) {
    Result r = run("crosscheck " + lighting_ + " --asp-solver /nonexistent/solver");
    EXPECT_EQ(r.code, 0);
    EXPECT_NE(r.out.find("skipped"), std::string::npos);
}

}  // namespace
