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
// Runs only when RELAXPLACE_ASP_SOLVER names a working solver.

#include <gtest/gtest.h>

#include <fstream>

#include "random_instance.hpp"
#include "relaxplace/asp.hpp"
#include "relaxplace/facts.hpp"
#include "relaxplace/oracle.hpp"
#include "relaxplace/solver.hpp"

namespace relaxplace {
namespace {

class External : public ::testing::Test {
protected:
    void SetUp() override {
        auto cmd = asp_solver_from_env();
        if (!cmd || !asp_solver_available(*cmd)) GTEST_SKIP() << "no external ASP solver configured";
        command_ = *cmd;
    }
    std::string command_;
};

TEST(AspFacts, AddsSelfLatencyUnlessPresent) {
    Instance inst = parse_facts(R"(node("a"). node("b"). link_attr("b","b","latency",4).)");
    std::string facts = asp_facts(inst);
    EXPECT_NE(facts.find(R"(link_attr("a","a","latency",0).)"), std::string::npos);
    EXPECT_EQ(facts.find(R"(link_attr("b","b","latency",0).)"), std::string::npos);
}

TEST_F(External, StreetLighting) {
    std::ifstream in(RELAXPLACE_DATA_DIR "/street_lighting.lp");
    Instance inst = parse_facts(in);
    AspResult r = run_asp_solver(command_, inst);
    ASSERT_TRUE(r.satisfiable);
    EXPECT_EQ(r.cost, (CostVector{{1, 2}}));
    EXPECT_EQ(r.assignment, (Assignment{{"ml_opt", "prvt_cloud"}, {"lights_driver", "access_point"}}));
}

TEST_F(External, Unsatisfiable) {
    Instance inst = parse_facts(R"(node("a"). node_attr("a","gpu",false). service("s"). hreq("s",eq("gpu",true)).)");
    EXPECT_FALSE(run_asp_solver(command_, inst).satisfiable);
}

TEST_F(External, CoLocatedLinkUsesZeroLatency) {
    Instance inst = parse_facts(R"(node("a"). service("s"). service("t"). hreq(("s","t"),lte("latency",5)).)");
    EXPECT_TRUE(run_asp_solver(command_, inst).satisfiable);
}

// The external optimum must be a placement our semantics accepts, at the
// cost our oracle finds.
TEST_F(External, AgreesWithSemanticsOnRandomInstances) {
    for (std::uint64_t seed = 0; seed < 100; ++seed) {
        Instance inst = testing::random_instance(9000 + seed, {.max_nodes = 3, .max_services = 3, .max_soft = 6});
        AspResult r = run_asp_solver(command_, inst);
        auto truth = brute_force(inst.infra, inst.app, 10'000'000);
        ASSERT_EQ(r.satisfiable, truth.feasible) << "seed " << seed << "\n" << serialize_facts(inst);
        if (!r.satisfiable) continue;
        EXPECT_TRUE(check_placement(inst.infra, inst.app, r.assignment, r.lifted).empty()) << "seed " << seed;
        EXPECT_EQ(r.cost, truth.cost) << "seed " << seed << "\n" << serialize_facts(inst);
    }
}

}  // namespace
}  // namespace relaxplace
