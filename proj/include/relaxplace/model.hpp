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

// Domain types: infrastructures, applications, requirements, solutions.

#ifndef RELAXPLACE_MODEL_HPP
#define RELAXPLACE_MODEL_HPP

#include <compare>
#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <tuple>
#include <utility>
#include <variant>
#include <vector>

#include "relaxplace/cost.hpp"

namespace relaxplace {

using NodeId = std::string;
using ServiceId = std::string;
using AttrKey = std::string;

/// Attribute value: a boolean or a (pre-scaled) signed integer.
///
/// Values are totally ordered the way an ASP system orders ground terms:
/// every integer precedes `false`, which precedes `true`.  Ordered
/// requirements therefore behave identically here and under clingo when a
/// boolean attribute meets an integer threshold.
class AttrValue {
public:
    AttrValue() : value_(std::int64_t{0}) {}
    AttrValue(bool b) : value_(b) {}
    AttrValue(std::int64_t i) : value_(i) {}
    AttrValue(int i) : value_(static_cast<std::int64_t>(i)) {}

    bool is_bool() const { return std::holds_alternative<bool>(value_); }
    bool is_int() const { return std::holds_alternative<std::int64_t>(value_); }
    bool as_bool() const { return std::get<bool>(value_); }
    std::int64_t as_int() const { return std::get<std::int64_t>(value_); }

    friend bool operator==(const AttrValue&, const AttrValue&) = default;
    friend std::strong_ordering operator<=>(const AttrValue& a, const AttrValue& b) {
        if (a.is_int() && b.is_int()) return a.as_int() <=> b.as_int();
        if (a.is_int()) return std::strong_ordering::less;
        if (b.is_int()) return std::strong_ordering::greater;
        return static_cast<int>(a.as_bool()) <=> static_cast<int>(b.as_bool());
    }

    std::string to_string() const {
        if (is_bool()) return as_bool() ? "true" : "false";
        return std::to_string(as_int());
    }

private:
    std::variant<bool, std::int64_t> value_;
};

enum class ReqKind { Lt, Gt, Lte, Gte, Eq, Neq, Reserve };

inline const char* kind_name(ReqKind k) {
    switch (k) {
    case ReqKind::Lt: return "lt";
    case ReqKind::Gt: return "gt";
    case ReqKind::Lte: return "lte";
    case ReqKind::Gte: return "gte";
    case ReqKind::Eq: return "eq";
    case ReqKind::Neq: return "neq";
    case ReqKind::Reserve: return "reserve";
    }
    return "?";
}

inline std::optional<ReqKind> kind_from_name(std::string_view name) {
    static constexpr std::pair<std::string_view, ReqKind> table[] = {
        {"lt", ReqKind::Lt},   {"gt", ReqKind::Gt},   {"lte", ReqKind::Lte},
        {"gte", ReqKind::Gte}, {"eq", ReqKind::Eq},   {"neq", ReqKind::Neq},
        {"reserve", ReqKind::Reserve}};
    for (const auto& [n, k] : table)
        if (n == name) return k;
    return std::nullopt;
}

inline bool is_ordered(ReqKind k) {
    return k == ReqKind::Lt || k == ReqKind::Gt || k == ReqKind::Lte || k == ReqKind::Gte;
}

/// One comparison or reservation over a named attribute.
struct RequirementExpr {
    ReqKind kind = ReqKind::Eq;
    AttrKey key;
    AttrValue threshold;

    friend bool operator==(const RequirementExpr&, const RequirementExpr&) = default;
    friend auto operator<=>(const RequirementExpr&, const RequirementExpr&) = default;

    /// Throws std::invalid_argument when the threshold type does not fit the kind.
    void validate() const {
        if (kind == ReqKind::Reserve && (!threshold.is_int() || threshold.as_int() < 0))
            throw std::invalid_argument("reserve(\"" + key + "\",...) needs a non-negative integer amount");
        if (is_ordered(kind) && !threshold.is_int())
            throw std::invalid_argument(std::string(kind_name(kind)) + "(\"" + key +
                                        "\",...) needs an integer threshold");
    }
};

using ServicePair = std::pair<ServiceId, ServiceId>;

/// A single service (node requirement) or an ordered service pair (link requirement).
using ReqTarget = std::variant<ServiceId, ServicePair>;

inline bool is_link(const ReqTarget& t) { return std::holds_alternative<ServicePair>(t); }

struct Requirement {
    ReqTarget target;
    RequirementExpr expr;

    friend bool operator==(const Requirement&, const Requirement&) = default;
    friend auto operator<=>(const Requirement&, const Requirement&) = default;
};

/// Relaxation price of a soft requirement: `weight` paid at priority `level`.
struct SoftParams {
    std::int64_t weight = 1;
    std::int64_t level = 1;

    friend bool operator==(const SoftParams&, const SoftParams&) = default;
};

/// Attributed graph of compute nodes and links.
///
/// `links` holds the declared topology edges (link/2 facts); link attributes
/// may exist on pairs that are not declared links, e.g. metric-closure edges.
struct Infrastructure {
    std::set<NodeId> nodes;
    std::set<std::pair<NodeId, NodeId>> links;
    std::map<std::pair<NodeId, AttrKey>, AttrValue> node_attrs;
    std::map<std::tuple<NodeId, NodeId, AttrKey>, AttrValue> link_attrs;

    friend bool operator==(const Infrastructure&, const Infrastructure&) = default;

    const AttrValue* node_attr(const NodeId& n, const AttrKey& k) const {
        auto it = node_attrs.find({n, k});
        return it == node_attrs.end() ? nullptr : &it->second;
    }
    const AttrValue* link_attr(const NodeId& a, const NodeId& b, const AttrKey& k) const {
        auto it = link_attrs.find({a, b, k});
        return it == link_attrs.end() ? nullptr : &it->second;
    }
};

/// Attributed graph of services with hard and soft requirements.
struct Application {
    std::set<ServiceId> services;
    std::set<ServicePair> dependencies;
    std::set<Requirement> hard_reqs;
    std::map<Requirement, SoftParams> soft_reqs;

    friend bool operator==(const Application&, const Application&) = default;
};

/// A full problem instance.
struct Instance {
    Infrastructure infra;
    Application app;

    friend bool operator==(const Instance&, const Instance&) = default;
};

/// Service -> node mapping plus the soft requirements given up to obtain it.
struct Solution {
    std::map<ServiceId, NodeId> assignment;
    std::set<Requirement> lifted;
    CostVector cost;
    bool optimal = false;

    friend bool operator==(const Solution&, const Solution&) = default;
};

class ModelError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

inline std::string quote_id(const std::string& s) {
    std::string out;
    out.reserve(s.size() + 2);
    out += '"';
    for (char c : s) {
        if (c == '"' || c == '\\') out += '\\';
        out += c;
    }
    out += '"';
    return out;
}

/// Fact-syntax rendering, e.g. `lte("latency",50)`.
inline std::string to_string(const RequirementExpr& e) {
    return std::string(kind_name(e.kind)) + "(" + quote_id(e.key) + "," + e.threshold.to_string() + ")";
}

inline std::string to_string(const ReqTarget& t) {
    if (const auto* p = std::get_if<ServicePair>(&t))
        return "(" + quote_id(p->first) + "," + quote_id(p->second) + ")";
    return quote_id(std::get<ServiceId>(t));
}

inline std::string to_string(const Requirement& r) {
    return to_string(r.target) + "," + to_string(r.expr);
}

/// Checks the structural invariants of an instance; throws ModelError on the first breach.
inline void validate(const Instance& inst) {
    const auto& infra = inst.infra;
    const auto& app = inst.app;
    auto need_node = [&](const NodeId& n, const char* what) {
        if (!infra.nodes.count(n))
            throw ModelError(std::string(what) + " references undeclared node " + quote_id(n));
    };
    for (const auto& [a, b] : infra.links) {
        need_node(a, "link");
        need_node(b, "link");
    }
    for (const auto& [k, v] : infra.node_attrs) need_node(k.first, "node_attr");
    for (const auto& [k, v] : infra.link_attrs) {
        need_node(std::get<0>(k), "link_attr");
        need_node(std::get<1>(k), "link_attr");
    }
    auto need_service = [&](const ServiceId& s, const char* what) {
        if (!app.services.count(s))
            throw ModelError(std::string(what) + " references undeclared service " + quote_id(s));
    };
    auto check_req = [&](const Requirement& r, const char* what) {
        if (const auto* p = std::get_if<ServicePair>(&r.target)) {
            need_service(p->first, what);
            need_service(p->second, what);
            if (p->first == p->second)
                throw ModelError(std::string(what) + " pairs service " + quote_id(p->first) + " with itself");
        } else {
            need_service(std::get<ServiceId>(r.target), what);
        }
        try {
            r.expr.validate();
        } catch (const std::invalid_argument& e) {
            throw ModelError(std::string(what) + ": " + e.what());
        }
    };
    for (const auto& [a, b] : app.dependencies) {
        need_service(a, "dependency");
        need_service(b, "dependency");
    }
    for (const auto& r : app.hard_reqs) check_req(r, "hreq");
    for (const auto& [r, p] : app.soft_reqs) {
        check_req(r, "sreq");
        if (app.hard_reqs.count(r))
            throw ModelError("requirement " + to_string(r) + " is both hard and soft");
        if (p.weight < 0 || p.level < 0)
            throw ModelError("requirement " + to_string(r) + " has a negative weight or level");
    }
}

}  // namespace relaxplace

#endif  // RELAXPLACE_MODEL_HPP
