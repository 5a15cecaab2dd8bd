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

// Reference feasibility and cost semantics, evaluated directly on the model.
//
// Missing attributes: an ordered comparison (lt/gt/lte/gte) or a capacity
// check on a node that lacks the attribute is satisfied.  eq requires the
// attribute to be present with exactly the threshold value; neq is
// satisfied when the attribute is absent.  Two services placed on the same
// node communicate over an implicit self-link with latency 0 and no other
// attributes, unless the infrastructure declares that self-link itself.

#ifndef RELAXPLACE_SEMANTICS_HPP
#define RELAXPLACE_SEMANTICS_HPP

#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "relaxplace/cost.hpp"
#include "relaxplace/model.hpp"

namespace relaxplace {

inline constexpr const char* kLatencyKey = "latency";

using Assignment = std::map<ServiceId, NodeId>;

enum class ViolationReason {
    MissingAttributeEq,
    ValueMismatch,
    ComparisonFailed,
    CapacityExceeded,
    PerServiceCapacity,
};

inline const char* reason_name(ViolationReason r) {
    switch (r) {
    case ViolationReason::MissingAttributeEq: return "missing-attribute-eq";
    case ViolationReason::ValueMismatch: return "value-mismatch";
    case ViolationReason::ComparisonFailed: return "comparison-failed";
    case ViolationReason::CapacityExceeded: return "capacity-exceeded";
    case ViolationReason::PerServiceCapacity: return "per-service-capacity";
    }
    return "?";
}

/// One failed requirement.  For CapacityExceeded, `requirements` lists every
/// active reservation on the node for `resource` (possibly none when the
/// node's capacity is negative), and `demand`/`capacity` hold the totals.
/// Every other reason carries exactly one requirement.
struct Violation {
    ViolationReason reason;
    std::vector<Requirement> requirements;
    NodeId node;
    std::optional<NodeId> peer;  // destination node of a link requirement
    AttrKey resource;
    std::int64_t demand = 0;
    std::int64_t capacity = 0;

    std::string describe() const {
        std::string where = quote_id(node);
        if (peer) where += "->" + quote_id(*peer);
        if (reason == ViolationReason::CapacityExceeded)
            return std::string(reason_name(reason)) + " on " + where + ": " + quote_id(resource) + " demand " +
                   std::to_string(demand) + " > capacity " + std::to_string(capacity);
        return std::string(reason_name(reason)) + " on " + where + ": " + to_string(requirements.front());
    }
};

namespace detail {

// nullopt means satisfied; otherwise the reason it fails.
inline std::optional<ViolationReason> compare_attr(const RequirementExpr& e, const AttrValue* v) {
    switch (e.kind) {
    case ReqKind::Eq:
        if (!v) return ViolationReason::MissingAttributeEq;
        return *v == e.threshold ? std::nullopt : std::optional(ViolationReason::ValueMismatch);
    case ReqKind::Neq:
        return v && *v == e.threshold ? std::optional(ViolationReason::ValueMismatch) : std::nullopt;
    case ReqKind::Reserve:
        throw std::invalid_argument("reserve requirements are evaluated by check_capacities");
    default: break;
    }
    if (!v) return std::nullopt;
    bool ok = false;
    switch (e.kind) {
    case ReqKind::Lt: ok = *v < e.threshold; break;
    case ReqKind::Gt: ok = *v > e.threshold; break;
    case ReqKind::Lte: ok = *v <= e.threshold; break;
    case ReqKind::Gte: ok = *v >= e.threshold; break;
    default: break;
    }
    return ok ? std::nullopt : std::optional(ViolationReason::ComparisonFailed);
}

}  // namespace detail

/// Link attribute lookup including the implicit zero-latency self-link.
inline std::optional<AttrValue> effective_link_attr(const Infrastructure& infra, const NodeId& src,
                                                    const NodeId& dst, const AttrKey& key) {
    if (const auto* v = infra.link_attr(src, dst, key)) return *v;
    if (src == dst && key == kLatencyKey) return AttrValue(std::int64_t{0});
    return std::nullopt;
}

inline bool eval_node_requirement(const RequirementExpr& expr, const NodeId& node, const Infrastructure& infra) {
    return !detail::compare_attr(expr, infra.node_attr(node, expr.key));
}

inline bool eval_link_requirement(const RequirementExpr& expr, const NodeId& src, const NodeId& dst,
                                  const Infrastructure& infra) {
    auto v = effective_link_attr(infra, src, dst, expr.key);
    return !detail::compare_attr(expr, v ? &*v : nullptr);
}

/// Capacity checks for the given active reservations.  `shared` names the
/// resources subject to the aggregate rule; when empty it defaults to the
/// resources of `active_reserves`.  Link-targeted reservations only mark
/// their resource as shared.
inline std::vector<Violation> check_capacities(const Assignment& assignment,
                                               const std::vector<Requirement>& active_reserves,
                                               const Infrastructure& infra,
                                               std::set<AttrKey> shared = {}) {
    if (shared.empty())
        for (const auto& r : active_reserves) shared.insert(r.expr.key);

    std::vector<Violation> out;
    // (node, resource) -> reservations hosted there
    std::map<std::pair<NodeId, AttrKey>, std::vector<const Requirement*>> hosted;
    for (const auto& r : active_reserves) {
        if (r.expr.kind != ReqKind::Reserve) throw std::invalid_argument("not a reserve requirement");
        const auto* s = std::get_if<ServiceId>(&r.target);
        if (!s) continue;
        auto it = assignment.find(*s);
        if (it == assignment.end()) throw std::invalid_argument("service " + quote_id(*s) + " is not assigned");
        const NodeId& x = it->second;
        hosted[{x, r.expr.key}].push_back(&r);
        const auto* v = infra.node_attr(x, r.expr.key);
        if (v && *v < r.expr.threshold)
            out.push_back({ViolationReason::PerServiceCapacity, {r}, x, std::nullopt, r.expr.key,
                           r.expr.threshold.as_int(), v->is_int() ? v->as_int() : 0});
    }
    for (const auto& [key, capacity] : infra.node_attrs) {
        const auto& [x, resource] = key;
        if (!shared.count(resource)) continue;
        std::int64_t demand = 0;
        std::vector<Requirement> reqs;
        if (auto it = hosted.find(key); it != hosted.end())
            for (const auto* r : it->second) {
                demand += r->expr.threshold.as_int();
                reqs.push_back(*r);
            }
        if (AttrValue(demand) > capacity)
            out.push_back({ViolationReason::CapacityExceeded, std::move(reqs), x, std::nullopt, resource, demand,
                           capacity.as_int()});
    }
    return out;
}

/// Resources that some declared reservation (hard or soft, any target) mentions.
inline std::set<AttrKey> shared_resources(const Application& app) {
    std::set<AttrKey> out;
    for (const auto& r : app.hard_reqs)
        if (r.expr.kind == ReqKind::Reserve) out.insert(r.expr.key);
    for (const auto& [r, p] : app.soft_reqs)
        if (r.expr.kind == ReqKind::Reserve) out.insert(r.expr.key);
    return out;
}

/// Every violation of the active requirements (hard ones plus soft ones
/// not in `lifted`).  An empty result means (assignment, lifted) is feasible.
inline std::vector<Violation> check_placement(const Infrastructure& infra, const Application& app,
                                              const Assignment& assignment, const std::set<Requirement>& lifted) {
    for (const auto& s : app.services)
        if (!assignment.count(s)) throw std::invalid_argument("partial assignment: service " + quote_id(s) + " unplaced");
    for (const auto& [s, x] : assignment) {
        if (!app.services.count(s)) throw std::invalid_argument("assignment names unknown service " + quote_id(s));
        if (!infra.nodes.count(x)) throw std::invalid_argument("assignment names unknown node " + quote_id(x));
    }
    for (const auto& r : lifted)
        if (!app.soft_reqs.count(r)) throw std::invalid_argument("lifted requirement is not soft: " + to_string(r));

    std::vector<Violation> out;
    std::vector<Requirement> reserves;
    auto check = [&](const Requirement& r) {
        if (r.expr.kind == ReqKind::Reserve) {
            reserves.push_back(r);
            return;
        }
        if (const auto* p = std::get_if<ServicePair>(&r.target)) {
            const NodeId& x = assignment.at(p->first);
            const NodeId& y = assignment.at(p->second);
            auto v = effective_link_attr(infra, x, y, r.expr.key);
            if (auto why = detail::compare_attr(r.expr, v ? &*v : nullptr)) out.push_back({*why, {r}, x, y});
        } else {
            const NodeId& x = assignment.at(std::get<ServiceId>(r.target));
            if (auto why = detail::compare_attr(r.expr, infra.node_attr(x, r.expr.key)))
                out.push_back({*why, {r}, x, std::nullopt});
        }
    };
    for (const auto& r : app.hard_reqs) check(r);
    for (const auto& [r, p] : app.soft_reqs)
        if (!lifted.count(r)) check(r);

    auto shared = shared_resources(app);
    if (!shared.empty()) {
        auto cap = check_capacities(assignment, reserves, infra, shared);
        out.insert(out.end(), cap.begin(), cap.end());
    }
    return out;
}

/// Per level, the summed weights of the lifted soft requirements.
inline CostVector lift_cost(const Application& app, const std::set<Requirement>& lifted) {
    CostVector cost;
    for (const auto& r : lifted) {
        auto it = app.soft_reqs.find(r);
        if (it == app.soft_reqs.end()) throw std::invalid_argument("lifted requirement is not soft: " + to_string(r));
        cost.add(it->second.level, it->second.weight);
    }
    return cost;
}

}  // namespace relaxplace

#endif  // RELAXPLACE_SEMANTICS_HPP
