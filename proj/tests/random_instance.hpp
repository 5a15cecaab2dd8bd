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

// Small random instances for property tests.

#ifndef RELAXPLACE_TESTS_RANDOM_INSTANCE_HPP
#define RELAXPLACE_TESTS_RANDOM_INSTANCE_HPP

#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "relaxplace/model.hpp"

namespace relaxplace::testing {

struct RandomShape {
    int max_nodes = 6;
    int max_services = 4;
    int max_hard = 4;
    int max_soft = 10;
    int max_weight = 5;
    int max_level = 2;
};

inline Instance random_instance(std::uint64_t seed, const RandomShape& shape = {}) {
    std::mt19937_64 rng(seed);
    auto uniform = [&](int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng); };
    auto coin = [&](int percent) { return uniform(0, 99) < percent; };

    const std::vector<std::string> int_keys = {"ram", "cpu", "avail", "carbon"};
    const std::vector<std::string> bool_keys = {"gpu", "secure"};
    const std::vector<std::string> reserve_keys = {"ram", "cpu"};

    Instance inst;
    Infrastructure& infra = inst.infra;
    Application& app = inst.app;

    const int n = uniform(1, shape.max_nodes);
    const int k = uniform(1, shape.max_services);
    std::vector<NodeId> nodes;
    std::vector<ServiceId> services;
    for (int i = 0; i < n; ++i) nodes.push_back("n" + std::to_string(i));
    for (int i = 0; i < k; ++i) services.push_back("s" + std::to_string(i));
    infra.nodes.insert(nodes.begin(), nodes.end());
    app.services.insert(services.begin(), services.end());

    for (const auto& x : nodes) {
        for (const auto& key : int_keys)
            if (coin(85)) infra.node_attrs[{x, key}] = AttrValue(std::int64_t{uniform(0, 8)});
        for (const auto& key : bool_keys)
            if (coin(80)) infra.node_attrs[{x, key}] = AttrValue(coin(50));
    }
    for (const auto& x : nodes)
        for (const auto& y : nodes) {
            if (x == y && !coin(20)) continue;
            if (x != y && !coin(80)) continue;
            infra.links.insert({x, y});
            infra.link_attrs[{x, y, "latency"}] = AttrValue(std::int64_t{uniform(0, 9)});
        }

    for (const auto& a : services)
        for (const auto& b : services)
            if (a != b && coin(35)) app.dependencies.insert({a, b});

    auto random_expr = [&](bool link) {
        RequirementExpr e;
        if (link) {
            e.kind = static_cast<ReqKind>(uniform(0, 5));
            e.key = "latency";
            e.threshold = (e.kind == ReqKind::Eq || e.kind == ReqKind::Neq) && coin(20)
                              ? AttrValue(coin(50))
                              : AttrValue(std::int64_t{uniform(0, 9)});
            return e;
        }
        int pick = uniform(0, 9);
        if (pick < 3) {
            e.kind = ReqKind::Reserve;
            e.key = reserve_keys[uniform(0, 1)];
            e.threshold = AttrValue(std::int64_t{uniform(0, 5)});
        } else if (pick < 6) {
            e.kind = static_cast<ReqKind>(uniform(0, 3));
            e.key = int_keys[uniform(0, 3)];
            e.threshold = AttrValue(std::int64_t{uniform(0, 8)});
        } else {
            e.kind = coin(70) ? ReqKind::Eq : ReqKind::Neq;
            if (coin(75)) {
                e.key = bool_keys[uniform(0, 1)];
                e.threshold = AttrValue(coin(50));
            } else {
                e.key = int_keys[uniform(0, 3)];
                e.threshold = AttrValue(std::int64_t{uniform(0, 8)});
            }
        }
        return e;
    };
    auto random_requirement = [&]() {
        const bool link = k >= 2 && coin(25);
        Requirement r;
        if (link) {
            int a = uniform(0, k - 1), b = uniform(0, k - 2);
            if (b >= a) ++b;
            r.target = ServicePair{services[a], services[b]};
        } else {
            r.target = services[uniform(0, k - 1)];
        }
        r.expr = random_expr(link);
        return r;
    };

    const int hard = uniform(0, shape.max_hard);
    for (int i = 0; i < hard; ++i) app.hard_reqs.insert(random_requirement());
    const int soft = uniform(0, shape.max_soft);
    for (int i = 0; i < soft; ++i) {
        Requirement r = random_requirement();
        if (app.hard_reqs.count(r)) continue;
        app.soft_reqs[r] = SoftParams{uniform(1, shape.max_weight), uniform(1, shape.max_level)};
    }
    return inst;
}

}  // namespace relaxplace::testing

#endif  // RELAXPLACE_TESTS_RANDOM_INSTANCE_HPP
