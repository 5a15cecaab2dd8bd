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

// JSON rendering of solve outcomes and the matching reader.
//
//   {
//     "status": "optimal",
//     "assignment": [["lights_driver", "access_point"], ["ml_opt", "prvt_cloud"]],
//     "lifted": [["ml_opt", {"kind": "lte", "key": "carbon_intensity", "threshold": 300}],
//                [["a", "b"], {"kind": "lte", "key": "latency", "threshold": 50}]],
//     "cost": {"1": 2},
//     "incumbents": [[0.0012, {"1": 2}]],
//     "elapsed_s": 0.0015
//   }
//
// Without a solution, assignment and lifted are empty and cost is null.

#ifndef RELAXPLACE_REPORT_HPP
#define RELAXPLACE_REPORT_HPP

#include <optional>
#include <stdexcept>
#include <string>

#include "json.hpp"
#include "relaxplace/model.hpp"
#include "relaxplace/solver.hpp"

namespace relaxplace {

using Json = nlohmann::ordered_json;

/// Raised for solution documents that do not follow the schema.
class ReportError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

inline Json cost_to_json(const CostVector& c) {
    Json out = Json::object();
    for (const auto& [level, total] : c.levels()) out[std::to_string(level)] = total;
    return out;
}

inline Json value_to_json(const AttrValue& v) {
    if (v.is_bool()) return v.as_bool();
    return v.as_int();
}

inline Json expr_to_json(const RequirementExpr& e) {
    return Json{{"kind", kind_name(e.kind)}, {"key", e.key}, {"threshold", value_to_json(e.threshold)}};
}

inline Json target_to_json(const ReqTarget& t) {
    if (const auto* p = std::get_if<ServicePair>(&t)) return Json::array({p->first, p->second});
    return std::get<ServiceId>(t);
}

inline Json solution_json(const SolveOutcome& outcome) {
    Json out;
    out["status"] = status_name(outcome.status);
    out["assignment"] = Json::array();
    out["lifted"] = Json::array();
    out["cost"] = nullptr;
    if (outcome.best) {
        for (const auto& [s, x] : outcome.best->assignment) out["assignment"].push_back({s, x});
        for (const auto& r : outcome.best->lifted)
            out["lifted"].push_back({target_to_json(r.target), expr_to_json(r.expr)});
        out["cost"] = cost_to_json(outcome.best->cost);
    }
    out["incumbents"] = Json::array();
    for (const auto& inc : outcome.incumbents) out["incumbents"].push_back({inc.elapsed_s, cost_to_json(inc.cost)});
    out["elapsed_s"] = outcome.elapsed_s;
    return out;
}

namespace detail {

[[noreturn]] inline void report_error(const std::string& what) { throw ReportError(what); }

inline const Json& field(const Json& j, const char* name) {
    if (!j.is_object() || !j.contains(name)) report_error(std::string("missing field \"") + name + "\"");
    return j.at(name);
}

inline std::string text(const Json& j, const char* what) {
    if (!j.is_string()) report_error(std::string(what) + " must be a string");
    return j.get<std::string>();
}

inline std::int64_t integer(const Json& j, const char* what) {
    if (!j.is_number_integer()) report_error(std::string(what) + " must be an integer");
    return j.get<std::int64_t>();
}

inline CostVector cost_from_json(const Json& j) {
    if (!j.is_object()) report_error("cost must be an object");
    CostVector c;
    for (const auto& [level, total] : j.items()) {
        std::int64_t l;
        try {
            std::size_t used = 0;
            l = std::stoll(level, &used);
            if (used != level.size()) throw std::invalid_argument(level);
        } catch (const std::exception&) {
            report_error("cost level \"" + level + "\" is not an integer");
        }
        std::int64_t t = integer(total, "cost total");
        if (l < 0 || t < 0) report_error("cost entries must be non-negative");
        c.add(l, t);
    }
    return c;
}

inline RequirementExpr expr_from_json(const Json& j) {
    auto kind = kind_from_name(text(field(j, "kind"), "kind"));
    if (!kind) report_error("unknown requirement kind " + field(j, "kind").dump());
    const Json& t = field(j, "threshold");
    AttrValue v;
    if (t.is_boolean()) v = AttrValue(t.get<bool>());
    else v = AttrValue(integer(t, "threshold"));
    RequirementExpr e{*kind, text(field(j, "key"), "key"), v};
    try {
        e.validate();
    } catch (const std::exception& ex) {
        report_error(ex.what());
    }
    return e;
}

inline ReqTarget target_from_json(const Json& j) {
    if (j.is_string()) return j.get<std::string>();
    if (j.is_array() && j.size() == 2) return ServicePair{text(j[0], "service"), text(j[1], "service")};
    report_error("requirement target must be a service or a pair of services");
}

}  // namespace detail

/// What a solution document claims.
struct SolutionReport {
    SolveStatus status = SolveStatus::Unknown;
    std::optional<Solution> solution;
};

inline SolutionReport parse_solution_json(const Json& j) {
    using namespace detail;
    SolutionReport r;
    std::string status = text(field(j, "status"), "status");
    bool known = false;
    for (auto s : {SolveStatus::Optimal, SolveStatus::Feasible, SolveStatus::Infeasible, SolveStatus::Unknown})
        if (status == status_name(s)) {
            r.status = s;
            known = true;
        }
    if (!known) report_error("unknown status \"" + status + "\"");
    const Json& cost = field(j, "cost");
    const Json& assignment = field(j, "assignment");
    const Json& lifted = field(j, "lifted");
    if (!assignment.is_array() || !lifted.is_array()) report_error("assignment and lifted must be arrays");
    if (cost.is_null()) {
        if (!assignment.empty() || !lifted.empty()) report_error("placement given without a cost");
        return r;
    }
    Solution s;
    for (const auto& pair : assignment) {
        if (!pair.is_array() || pair.size() != 2) report_error("assignment entries must be [service, node]");
        auto [it, fresh] = s.assignment.emplace(text(pair[0], "service"), text(pair[1], "node"));
        if (!fresh) report_error("service \"" + it->first + "\" assigned twice");
    }
    for (const auto& entry : lifted) {
        if (!entry.is_array() || entry.size() != 2) report_error("lifted entries must be [target, expr]");
        s.lifted.insert(Requirement{target_from_json(entry[0]), expr_from_json(entry[1])});
    }
    s.cost = cost_from_json(cost);
    s.optimal = r.status == SolveStatus::Optimal;
    r.solution = std::move(s);
    return r;
}

inline SolutionReport parse_solution_json(const std::string& text) {
    Json j;
    try {
        j = Json::parse(text);
    } catch (const Json::parse_error& e) {
        throw ReportError(e.what());
    }
    return parse_solution_json(j);
}

}  // namespace relaxplace

#endif  // RELAXPLACE_REPORT_HPP
