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
#include <sstream>

#include "random_instance.hpp"
#include "relaxplace/facts.hpp"

namespace relaxplace {
namespace {

Requirement node_req(const std::string& s, ReqKind k, const std::string& key, AttrValue v) {
    return Requirement{ServiceId(s), RequirementExpr{k, key, v}};
}

TEST(ParseFacts, NodeAttribute) {
    Instance inst = parse_facts(R"(node("n1"). node_attr("n1","gpu",true).)");
    EXPECT_EQ(inst.infra.nodes, std::set<NodeId>{"n1"});
    ASSERT_NE(inst.infra.node_attr("n1", "gpu"), nullptr);
    EXPECT_EQ(*inst.infra.node_attr("n1", "gpu"), AttrValue(true));
}

TEST(ParseFacts, SoftWithPriority) {
    Instance inst = parse_facts(R"(service("ml_opt"). sreq("ml_opt",gte("availability",99),2).)");
    ASSERT_EQ(inst.app.soft_reqs.size(), 1u);
    const auto& [r, p] = *inst.app.soft_reqs.begin();
    EXPECT_EQ(r, node_req("ml_opt", ReqKind::Gte, "availability", AttrValue(99)));
    EXPECT_EQ(p.weight, 1);
    EXPECT_EQ(p.level, 2);
}

TEST(ParseFacts, EmptyInput) {
    EXPECT_EQ(parse_facts(""), Instance{});
    EXPECT_EQ(parse_facts("  % only a comment\n"), Instance{});
}

TEST(ParseFacts, ViolationCostOnLink) {
    Instance inst = parse_facts(
        R"(service("a"). service("b").
           sreq(("a","b"),lte("latency",50)). violation_cost(("a","b"),lte("latency",50),(10,1)).)");
    ASSERT_EQ(inst.app.soft_reqs.size(), 1u);
    const auto& [r, p] = *inst.app.soft_reqs.begin();
    EXPECT_EQ(r.target, ReqTarget(ServicePair{"a", "b"}));
    EXPECT_EQ(r.expr.kind, ReqKind::Lte);
    EXPECT_EQ(p.weight, 10);
    EXPECT_EQ(p.level, 1);
}

TEST(ParseFacts, DefaultWeightAndStrictMode) {
    const char* text = R"(service("s"). sreq("s",lte("pue",15)).)";
    EXPECT_EQ(parse_facts(text).app.soft_reqs.begin()->second, (SoftParams{1, 1}));
    EXPECT_EQ(parse_facts(text, {.strict = true}).app.soft_reqs.begin()->second, (SoftParams{0, 1}));
}

TEST(ParseFacts, ViolationCostOverridesLevel) {
    Instance inst = parse_facts(
        R"(service("s"). sreq("s",lte("pue",15),3). violation_cost("s",lte("pue",15),(4,2)).)");
    EXPECT_EQ(inst.app.soft_reqs.begin()->second, (SoftParams{4, 2}));
}

TEST(ParseFacts, CommentsAndSeveralFactsPerLine) {
    Instance inst = parse_facts("node(\"a\"). node(\"b\"). % two nodes\n%* block\ncomment *% node(\"c\").");
    EXPECT_EQ(inst.infra.nodes.size(), 3u);
}

TEST(ParseFacts, NegativeIntegersAndEscapes) {
    Instance inst = parse_facts(R"(node("a\"b"). node_attr("a\"b","t",-5).)");
    EXPECT_EQ(*inst.infra.node_attr("a\"b", "t"), AttrValue(-5));
}

void expect_error(const std::string& text, const std::string& fragment) {
    try {
        parse_facts(text);
        ADD_FAILURE() << "no error for: " << text;
    } catch (const ParseError& e) {
        EXPECT_NE(std::string(e.what()).find(fragment), std::string::npos) << e.what();
    }
}

TEST(ParseFacts, SyntaxErrorHasPosition) {
    try {
        parse_facts("node(\"a\").\nnode(\"b\"");
        FAIL();
    } catch (const ParseError& e) {
        EXPECT_EQ(e.line(), 2);
        EXPECT_GT(e.column(), 1);
    }
}

TEST(ParseFacts, Errors) {
    expect_error(R"(nodes("a").)", "unknown predicate");
    expect_error(R"(node("a","b").)", "arity");
    expect_error(R"(node("a"). node_attr("a","k",1). node_attr("a","k",2).)", "conflicting");
    expect_error(R"(hreq("ghost",eq("gpu",true)).)", "undeclared");
    expect_error(R"(service("s"). violation_cost("s",lte("pue",1),(1,1)).)", "violation_cost");
    expect_error(R"(service("s"). sreq(("s","s"),lte("latency",1)).)", "itself");
    expect_error(R"(service("s"). hreq("s",reserve("ram",-1)).)", "non-negative");
    expect_error(R"(service("s"). hreq("s",lte("pue",true)).)", "integer");
    expect_error(R"(service("s"). hreq("s",eq("gpu",yes)).)", "yes");
}

TEST(SerializeFacts, EmptyModel) { EXPECT_EQ(serialize_facts(Instance{}), ""); }

TEST(SerializeFacts, SoftEmitsLevelAndViolationCost) {
    Instance inst;
    inst.app.services = {"s"};
    inst.app.soft_reqs[node_req("s", ReqKind::Lte, "pue", AttrValue(15))] = {3, 2};
    std::string text = serialize_facts(inst);
    EXPECT_NE(text.find(R"(sreq("s",lte("pue",15),2).)"), std::string::npos) << text;
    EXPECT_NE(text.find(R"(violation_cost("s",lte("pue",15),(3,2)).)"), std::string::npos) << text;
    EXPECT_EQ(parse_facts(text), inst);
}

TEST(SerializeFacts, StreetLightingRoundTrip) {
    std::ifstream in(RELAXPLACE_DATA_DIR "/street_lighting.lp");
    ASSERT_TRUE(in);
    Instance inst = parse_facts(in);
    EXPECT_EQ(inst.infra.nodes.size(), 3u);
    EXPECT_EQ(*inst.infra.node_attr("prvt_cloud", "pue"), AttrValue(19));
    std::string once = serialize_facts(inst);
    EXPECT_EQ(parse_facts(once), inst);
    EXPECT_EQ(serialize_facts(parse_facts(once)), once);
}

TEST(SerializeFacts, RandomRoundTripIsIdentity) {
    for (std::uint64_t seed = 0; seed < 300; ++seed) {
        Instance inst = testing::random_instance(seed, {.max_nodes = 5, .max_services = 5, .max_soft = 12,
                                                        .max_weight = 20, .max_level = 4});
        std::string text = serialize_facts(inst);
        Instance back = parse_facts(text);
        ASSERT_EQ(back, inst) << "seed " << seed << "\n" << text;
        ASSERT_EQ(serialize_facts(back), text) << "seed " << seed;
    }
}

TEST(SerializeFacts, DeterministicOrder) {
    Instance inst;
    inst.infra.nodes = {"b", "a"};
    inst.infra.node_attrs[{"b", "x"}] = AttrValue(1);
    inst.infra.node_attrs[{"a", "x"}] = AttrValue(2);
    EXPECT_EQ(serialize_facts(inst),
              "node(\"a\").\nnode(\"b\").\nnode_attr(\"a\",\"x\",2).\nnode_attr(\"b\",\"x\",1).\n");
}

}  // namespace
}  // namespace relaxplace
