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

#include <fstream>

#include "random_instance.hpp"
#include "relaxplace/facts.hpp"
#include "relaxplace/report.hpp"

namespace relaxplace {
namespace {

SolveOutcome street_lighting_outcome(Instance& inst) {
    std::ifstream in(RELAXPLACE_DATA_DIR "/street_lighting.lp");
    inst = parse_facts(in);
    SolveConfig c;
    c.timeout_s = 30;
    return solve(inst.infra, inst.app, c);
}

TEST(SolutionJson, StreetLightingFields) {
    Instance inst;
    auto out = street_lighting_outcome(inst);
    Json j = solution_json(out);
    EXPECT_EQ(j["status"], "optimal");
    EXPECT_EQ(j["assignment"], Json::parse(R"([["lights_driver","access_point"],["ml_opt","prvt_cloud"]])"));
    ASSERT_EQ(j["lifted"].size(), 2u);
    for (const auto& l : j["lifted"]) EXPECT_EQ(l[1]["key"], "carbon_intensity");
    EXPECT_EQ(j["cost"], Json::parse(R"({"1":2})"));
    EXPECT_FALSE(j["incumbents"].empty());
    EXPECT_TRUE(j["elapsed_s"].is_number());
}

TEST(SolutionJson, RoundTrip) {
    Instance inst;
    auto out = street_lighting_outcome(inst);
    auto back = parse_solution_json(solution_json(out).dump());
    EXPECT_EQ(back.status, SolveStatus::Optimal);
    ASSERT_TRUE(back.solution);
    EXPECT_EQ(*back.solution, *out.best);
}

TEST(SolutionJson, RoundTripRandomSolutions) {
    for (std::uint64_t seed = 0; seed < 50; ++seed) {
        Instance inst = testing::random_instance(seed);
        SolveConfig c;
        c.timeout_s = 30;
        auto out = solve(inst.infra, inst.app, c);
        auto back = parse_solution_json(solution_json(out).dump());
        EXPECT_EQ(back.status, out.status);
        ASSERT_EQ(back.solution.has_value(), out.best.has_value());
        if (out.best) {
            EXPECT_EQ(*back.solution, *out.best) << "seed " << seed;
            EXPECT_TRUE(certify(inst.infra, inst.app, *back.solution));
        }
    }
}

TEST(SolutionJson, LinkTargetAndBooleanThreshold) {
    SolveOutcome out;
    out.status = SolveStatus::Feasible;
    Solution s;
    s.assignment = {{"a", "x"}, {"b", "y"}};
    s.lifted = {Requirement{ServicePair{"a", "b"}, {ReqKind::Lte, "latency", AttrValue(50)}},
                Requirement{ServiceId("a"), {ReqKind::Eq, "gpu", AttrValue(true)}}};
    s.cost = CostVector{{1, 10}, {3, 1}};
    out.best = s;
    Json j = solution_json(out);
    EXPECT_EQ(j["cost"], Json::parse(R"({"1":10,"3":1})"));
    auto back = parse_solution_json(j.dump());
    EXPECT_EQ(back.status, SolveStatus::Feasible);
    EXPECT_EQ(back.solution->lifted, s.lifted);
    EXPECT_EQ(back.solution->cost, s.cost);
    EXPECT_FALSE(back.solution->optimal);
}

TEST(SolutionJson, NoSolution) {
    SolveOutcome out;
    out.status = SolveStatus::Infeasible;
    Json j = solution_json(out);
    EXPECT_TRUE(j["cost"].is_null());
    EXPECT_TRUE(j["assignment"].empty());
    auto back = parse_solution_json(j.dump());
    EXPECT_EQ(back.status, SolveStatus::Infeasible);
    EXPECT_FALSE(back.solution);
}

TEST(SolutionJson, RejectsMalformed) {
    const char* bad[] = {
        "not json",
        R"({"assignment":[],"lifted":[],"cost":null})",
        R"({"status":"great","assignment":[],"lifted":[],"cost":null})",
        R"({"status":"optimal","assignment":[["a"]],"lifted":[],"cost":{}})",
        R"({"status":"optimal","assignment":[["a","x"],["a","y"]],"lifted":[],"cost":{}})",
        R"({"status":"optimal","assignment":[],"lifted":[["a",{"kind":"approx","key":"k","threshold":1}]],"cost":{}})",
        R"({"status":"optimal","assignment":[],"lifted":[["a",{"kind":"lte","key":"k","threshold":true}]],"cost":{}})",
        R"({"status":"optimal","assignment":[],"lifted":[],"cost":{"one":1}})",
        R"({"status":"optimal","assignment":[],"lifted":[],"cost":{"1":-1}})",
        R"({"status":"optimal","assignment":[["a","x"]],"lifted":[],"cost":null})",
    };
    for (const char* text : bad) EXPECT_THROW(parse_solution_json(std::string(text)), ReportError) << text;
}

}  // namespace
}  // namespace relaxplace
