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

// Exhaustive ground truth for small instances.  Works only through the
// reference semantics (check_placement / lift_cost); it shares nothing with
// the search code.

#ifndef RELAXPLACE_ORACLE_HPP
#define RELAXPLACE_ORACLE_HPP

#include <cstdint>
#include <optional>
#include <set>
#include <stdexcept>
#include <vector>

#include "relaxplace/model.hpp"
#include "relaxplace/semantics.hpp"

namespace relaxplace {

class OracleLimitExceeded : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

struct OracleResult {
    bool feasible = false;
    CostVector cost;
    std::optional<Solution> witness;
    std::uint64_t candidates = 0;  // (assignment, lift subset) pairs examined
};

/// Every assignment is enumerated.  Soft requirements other than node
/// reservations are lifted exactly when violated (lifting a satisfied one
/// can only add cost, and their outcome does not depend on other lifts);
/// the node reservations that are not violated on their own are
/// enumerated over all subsets, since they interact through capacity sums.
inline OracleResult brute_force(const Infrastructure& infra, const Application& app, std::uint64_t limit) {
    std::vector<NodeId> nodes(infra.nodes.begin(), infra.nodes.end());
    std::vector<ServiceId> services(app.services.begin(), app.services.end());

    std::vector<Requirement> reserve_softs, plain_softs;
    for (const auto& [r, p] : app.soft_reqs) {
        if (r.expr.kind == ReqKind::Reserve && !is_link(r.target)) reserve_softs.push_back(r);
        else if (r.expr.kind != ReqKind::Reserve) plain_softs.push_back(r);
    }

    // |nodes|^|services| * 2^|reserve softs| without overflow
    long double space = 1;
    for (std::size_t i = 0; i < services.size(); ++i) space *= static_cast<long double>(nodes.size());
    for (std::size_t i = 0; i < reserve_softs.size(); ++i) space *= 2;
    if (space > static_cast<long double>(limit))
        throw OracleLimitExceeded("enumeration space exceeds the limit of " + std::to_string(limit));

    OracleResult out;
    if (nodes.empty() && !services.empty()) return out;

    std::vector<std::size_t> digit(services.size(), 0);
    for (;;) {
        Assignment a;
        for (std::size_t i = 0; i < services.size(); ++i) a[services[i]] = nodes[digit[i]];

        std::set<Requirement> forced;
        for (const auto& r : plain_softs) {
            bool ok;
            if (const auto* p = std::get_if<ServicePair>(&r.target))
                ok = eval_link_requirement(r.expr, a.at(p->first), a.at(p->second), infra);
            else
                ok = eval_node_requirement(r.expr, a.at(std::get<ServiceId>(r.target)), infra);
            if (!ok) forced.insert(r);
        }
        std::vector<Requirement> optional;
        for (const auto& r : reserve_softs) {
            const auto* v = infra.node_attr(a.at(std::get<ServiceId>(r.target)), r.expr.key);
            if (v && *v < r.expr.threshold) forced.insert(r);
            else optional.push_back(r);
        }

        const std::uint64_t subsets = std::uint64_t{1} << optional.size();
        for (std::uint64_t mask = 0; mask < subsets; ++mask) {
            ++out.candidates;
            std::set<Requirement> lifted = forced;
            for (std::size_t i = 0; i < optional.size(); ++i)
                if (mask >> i & 1) lifted.insert(optional[i]);
            if (!check_placement(infra, app, a, lifted).empty()) continue;
            CostVector cost = lift_cost(app, lifted);
            if (!out.feasible || compare_costs(cost, out.cost) < 0) {
                out.feasible = true;
                out.cost = cost;
                out.witness = Solution{a, lifted, cost, true};
            }
        }

        std::size_t i = 0;
        while (i < digit.size() && ++digit[i] == nodes.size()) digit[i++] = 0;
        if (i == digit.size()) break;
    }
    return out;
}

}  // namespace relaxplace

#endif  // RELAXPLACE_ORACLE_HPP
