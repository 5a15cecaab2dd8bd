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
#include "relaxplace/oracle.hpp"
#include "relaxplace/solver.hpp"

namespace relaxplace {
namespace {

Instance street_lighting() {
    std::ifstream in(RELAXPLACE_DATA_DIR "/street_lighting.lp");
    return parse_facts(in);
}

Requirement req(const std::string& s, ReqKind k, const std::string& key, AttrValue v) {
    return {ServiceId(s), RequirementExpr{k, key, v}};
}

SolveConfig config(Strategy s, std::uint64_t seed = 0) {
    SolveConfig c;
    c.strategy = s;
    c.timeout_s = 60;
    c.seed = seed;
    return c;
}

class BothStrategies : public ::testing::TestWithParam<Strategy> {};

TEST_P(BothStrategies, StreetLighting) {
    Instance inst = street_lighting();
    auto out = solve(inst.infra, inst.app, config(GetParam()));
    ASSERT_EQ(out.status, SolveStatus::Optimal);
    ASSERT_TRUE(out.best);
    const Solution& s = *out.best;
    EXPECT_EQ(s.assignment, (Assignment{{"ml_opt", "prvt_cloud"}, {"lights_driver", "access_point"}}));
    EXPECT_EQ(s.lifted, (std::set<Requirement>{req("ml_opt", ReqKind::Lte, "carbon_intensity", AttrValue(300)),
                                               req("lights_driver", ReqKind::Lte, "carbon_intensity",
                                                   AttrValue(150))}));
    EXPECT_EQ(s.cost, (CostVector{{1, 2}}));
    EXPECT_TRUE(s.optimal);
    EXPECT_TRUE(certify(inst.infra, inst.app, s));
}

TEST_P(BothStrategies, NoGpuAnywhereIsInfeasible) {
    Instance inst = parse_facts(R"(node("a"). node("b"). node_attr("a","gpu",false).
                                   service("s"). hreq("s",eq("gpu",true)). sreq("s",lte("pue",1)).)");
    auto out = solve(inst.infra, inst.app, config(GetParam()));
    EXPECT_EQ(out.status, SolveStatus::Infeasible);
    EXPECT_FALSE(out.best);
    EXPECT_TRUE(out.incumbents.empty());
}

TEST_P(BothStrategies, NoRequirements) {
    Instance inst = parse_facts(R"(node("a"). node("b"). service("x"). service("y"). service("z").)");
    auto out = solve(inst.infra, inst.app, config(GetParam()));
    ASSERT_EQ(out.status, SolveStatus::Optimal);
    EXPECT_EQ(out.best->cost, CostVector{});
    EXPECT_EQ(out.best->assignment.size(), 3u);
}

TEST_P(BothStrategies, EmptyApplication) {
    Instance inst = parse_facts(R"(node("a").)");
    auto out = solve(inst.infra, inst.app, config(GetParam()));
    ASSERT_EQ(out.status, SolveStatus::Optimal);
    EXPECT_TRUE(out.best->assignment.empty());
}

TEST_P(BothStrategies, NegativeSharedCapacityIsInfeasible) {
    Instance inst = parse_facts(R"(node("a"). node_attr("a","ram",-1). service("s"). sreq("s",reserve("ram",1)).)");
    EXPECT_EQ(solve(inst.infra, inst.app, config(GetParam())).status, SolveStatus::Infeasible);
}

TEST_P(BothStrategies, MatchesOracleOnRandomInstances) {
    for (std::uint64_t seed = 0; seed < 20; ++seed) {
        Instance inst = testing::random_instance(1000 + seed);
        auto truth = brute_force(inst.infra, inst.app, 50'000'000);
        auto out = solve(inst.infra, inst.app, config(GetParam(), seed));
        if (!truth.feasible) {
            ASSERT_EQ(out.status, SolveStatus::Infeasible) << "seed " << seed;
            continue;
        }
        ASSERT_EQ(out.status, SolveStatus::Optimal) << "seed " << seed;
        ASSERT_EQ(out.best->cost, truth.cost) << "seed " << seed << "\n" << serialize_facts(inst);
        ASSERT_TRUE(certify(inst.infra, inst.app, *out.best));
    }
}

TEST_P(BothStrategies, Deterministic) {
    for (std::uint64_t seed = 0; seed < 10; ++seed) {
        Instance inst = testing::random_instance(2000 + seed, {.max_nodes = 8, .max_services = 6, .max_soft = 14});
        auto a = solve(inst.infra, inst.app, config(GetParam(), seed));
        auto b = solve(inst.infra, inst.app, config(GetParam(), seed));
        ASSERT_EQ(a.status, b.status);
        ASSERT_EQ(a.best, b.best);
    }
}

INSTANTIATE_TEST_SUITE_P(Strategies, BothStrategies, ::testing::Values(Strategy::BB, Strategy::CoreGuided),
                         [](const auto& info) { return std::string(strategy_name(info.param)); });

TEST(SolveCoreGuided, SatisfiableNeedsOneCheck) {
    Instance inst = parse_facts(R"(node("a"). node_attr("a","pue",10). service("s"). sreq("s",lte("pue",15)).)");
    auto out = solve_core_guided(inst.infra, inst.app, config(Strategy::CoreGuided));
    ASSERT_EQ(out.status, SolveStatus::Optimal);
    EXPECT_EQ(out.best->cost, CostVector{});
    EXPECT_EQ(out.incumbents.size(), 1u);
}

TEST(SolveCoreGuided, AgreesWithBranchAndBound) {
    for (std::uint64_t seed = 0; seed < 20; ++seed) {
        Instance inst = testing::random_instance(3000 + seed, {.max_nodes = 8, .max_services = 6, .max_soft = 14});
        auto bb = solve_bb(inst.infra, inst.app, config(Strategy::BB, seed));
        auto core = solve_core_guided(inst.infra, inst.app, config(Strategy::CoreGuided, seed));
        ASSERT_EQ(bb.status, core.status) << "seed " << seed;
        if (bb.best) ASSERT_EQ(bb.best->cost, core.best->cost) << "seed " << seed;
    }
}

TEST(SolveBB, IncumbentsStrictlyDecrease) {
    for (std::uint64_t seed = 0; seed < 30; ++seed) {
        Instance inst = testing::random_instance(4000 + seed, {.max_nodes = 8, .max_services = 6, .max_soft = 14});
        std::vector<Solution> streamed;
        SolveConfig c = config(Strategy::BB, seed);
        c.emit_intermediate = true;
        auto out = solve_bb(inst.infra, inst.app, c,
                            [&](const Incumbent&, const Solution& s) { streamed.push_back(s); });
        ASSERT_EQ(streamed.size(), out.incumbents.size());
        for (std::size_t i = 1; i < out.incumbents.size(); ++i)
            ASSERT_TRUE(compare_costs(out.incumbents[i].cost, out.incumbents[i - 1].cost) < 0);
        for (const auto& s : streamed) ASSERT_TRUE(certify(inst.infra, inst.app, s));
        if (out.best) ASSERT_EQ(out.incumbents.back().cost, out.best->cost);
    }
}

TEST(SolveBB, NoCallbackWithoutEmitIntermediate) {
    Instance inst = street_lighting();
    int calls = 0;
    auto out = solve_bb(inst.infra, inst.app, config(Strategy::BB), [&](const auto&, const auto&) { ++calls; });
    EXPECT_EQ(calls, 0);
    EXPECT_FALSE(out.incumbents.empty());
}

TEST(Certify, Examples) {
    Instance inst = street_lighting();
    auto out = solve_bb(inst.infra, inst.app, config(Strategy::BB));
    Solution s = *out.best;
    EXPECT_TRUE(certify(inst.infra, inst.app, s));

    Solution fewer = s;
    fewer.lifted.erase(fewer.lifted.begin());
    EXPECT_FALSE(certify(inst.infra, inst.app, fewer));

    Solution wrong_cost = s;
    wrong_cost.cost = CostVector{{1, 1}};
    EXPECT_FALSE(certify(inst.infra, inst.app, wrong_cost));

    Solution partial = s;
    partial.assignment.erase("ml_opt");
    EXPECT_FALSE(certify(inst.infra, inst.app, partial));
}

TEST(SolveConfig, RejectsNonPositiveTimeout) {
    Instance inst = street_lighting();
    SolveConfig c;
    c.timeout_s = 0;
    EXPECT_THROW(solve(inst.infra, inst.app, c), std::invalid_argument);
}

TEST(SolveBB, TimeoutYieldsFeasibleOrUnknown) {
    Instance inst = testing::random_instance(77, {.max_nodes = 6, .max_services = 4});
    SolveConfig c = config(Strategy::BB);
    c.timeout_s = 1e-9;
    auto out = solve_bb(inst.infra, inst.app, c);
    if (out.status == SolveStatus::Optimal) EXPECT_TRUE(out.best && out.best->optimal);
    if (out.status == SolveStatus::Feasible) EXPECT_TRUE(out.best && !out.best->optimal);
    if (out.status == SolveStatus::Unknown) EXPECT_FALSE(out.best);
}

}  // namespace
}  // namespace relaxplace
