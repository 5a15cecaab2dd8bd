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

// Cross-check against an external ASP solver.  The solver command (for
// example `clingo` or `python3 -m clingo`) is taken from the environment
// variable RELAXPLACE_ASP_SOLVER.  It must accept clingo's options
// `--outf=2 --opt-mode=opt --quiet=1 --time-limit=N` and print clingo's
// JSON report.

#ifndef RELAXPLACE_ASP_HPP
#define RELAXPLACE_ASP_HPP

#include <unistd.h>

#include <array>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>

#include "json.hpp"
#include "relaxplace/facts.hpp"
#include "relaxplace/semantics.hpp"

namespace relaxplace {

inline constexpr const char* kAspSolverEnv = "RELAXPLACE_ASP_SOLVER";

/// Placement encoding with soft-requirement relaxation.  Shared resources
/// come from every declared reservation, lifted or not.
inline constexpr const char* kAspEncoding = R"(
{ deploy(S,X) : node(X) } = 1 :- service(S).

req(S,E) :- hreq(S,E).
{ req(S,E) } :- sreq(S,E,_).
lift(S,E) :- sreq(S,E,_), not req(S,E).
:~ violation_cost(S,E,(C,L)), lift(S,E). [C@L,S,E]

shared_resource(R) :- hreq(_,reserve(R,_)).
shared_resource(R) :- sreq(_,reserve(R,_),_).

:- node_attr(X,R,T), shared_resource(R), #sum{ Q,S : deploy(S,X), req(S,reserve(R,Q)) } > T.
:- req(S,reserve(R,Q)), deploy(S,X), node_attr(X,R,V), V < Q.

:- req(S,eq(R,V)),  deploy(S,X), not node_attr(X,R,V).
:- req(S,neq(R,V)), deploy(S,X), node_attr(X,R,V).
:- req(S,lt(R,T)),  deploy(S,X), node_attr(X,R,V), V >= T.
:- req(S,gt(R,T)),  deploy(S,X), node_attr(X,R,V), V <= T.
:- req(S,gte(R,T)), deploy(S,X), node_attr(X,R,V), V < T.
:- req(S,lte(R,T)), deploy(S,X), node_attr(X,R,V), V > T.

:- req((S1,S2),eq(R,V)),  deploy(S1,X), deploy(S2,Y), not link_attr(X,Y,R,V).
:- req((S1,S2),neq(R,V)), deploy(S1,X), deploy(S2,Y), link_attr(X,Y,R,V).
:- req((S1,S2),lt(R,T)),  deploy(S1,X), deploy(S2,Y), link_attr(X,Y,R,V), V >= T.
:- req((S1,S2),gt(R,T)),  deploy(S1,X), deploy(S2,Y), link_attr(X,Y,R,V), V <= T.
:- req((S1,S2),gte(R,T)), deploy(S1,X), deploy(S2,Y), link_attr(X,Y,R,V), V < T.
:- req((S1,S2),lte(R,T)), deploy(S1,X), deploy(S2,Y), link_attr(X,Y,R,V), V > T.

#show deploy/2.
#show lift/2.
)";

/// Raised when the external solver cannot be run or its output is unusable.
class AspError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

struct AspResult {
    bool satisfiable = false;
    Assignment assignment;
    std::set<Requirement> lifted;
    CostVector cost;
};

/// The configured solver command, if any.
inline std::optional<std::string> asp_solver_from_env() {
    const char* v = std::getenv(kAspSolverEnv);
    if (!v || !*v) return std::nullopt;
    return std::string(v);
}

namespace detail {

inline std::string shell_quote(const std::string& s) {
    std::string out = "'";
    for (char c : s) {
        if (c == '\'') out += "'\\''";
        else out += c;
    }
    return out + "'";
}

// Runs `command`, returning its exit status and standard output.
inline std::pair<int, std::string> run_capture(const std::string& command) {
    FILE* pipe = ::popen(command.c_str(), "r");
    if (!pipe) throw AspError("cannot start: " + command);
    std::string out;
    std::array<char, 4096> buf;
    std::size_t n;
    while ((n = std::fread(buf.data(), 1, buf.size(), pipe)) > 0) out.append(buf.data(), n);
    int status = ::pclose(pipe);
    return {status, out};
}

class TempDir {
public:
    TempDir() {
        static std::atomic<unsigned> counter{0};
        auto base = std::filesystem::temp_directory_path();
        for (;;) {
            path_ = base / ("relaxplace-asp-" + std::to_string(::getpid()) + "-" + std::to_string(counter++));
            if (std::filesystem::create_directory(path_)) break;
        }
    }
    ~TempDir() {
        std::error_code ec;
        std::filesystem::remove_all(path_, ec);
    }
    TempDir(const TempDir&) = delete;
    TempDir& operator=(const TempDir&) = delete;
    const std::filesystem::path& path() const { return path_; }

private:
    std::filesystem::path path_;
};

}  // namespace detail

/// True if `command --version` runs successfully.
inline bool asp_solver_available(const std::string& command) {
    return std::system((command + " --version >/dev/null 2>&1").c_str()) == 0;
}

/// Instance facts as handed to the external solver: the serialized instance
/// plus the implicit zero self-latency of every node, unless overridden.
inline std::string asp_facts(const Instance& inst) {
    std::string out = serialize_facts(inst);
    for (const auto& x : inst.infra.nodes)
        if (!inst.infra.link_attr(x, x, kLatencyKey))
            out += "link_attr(" + quote_id(x) + "," + quote_id(x) + "," + quote_id(kLatencyKey) + ",0).\n";
    return out;
}

/// Solves `inst` to optimality with the external solver.
inline AspResult run_asp_solver(const std::string& command, const Instance& inst, double timeout_s = 60) {
    detail::TempDir dir;
    auto facts = dir.path() / "instance.lp";
    auto encoding = dir.path() / "encoding.lp";
    std::ofstream(facts) << asp_facts(inst);
    std::ofstream(encoding) << kAspEncoding;
    int limit = std::max(1, static_cast<int>(std::ceil(timeout_s)));
    std::string cmd = command + " --outf=2 --opt-mode=opt --quiet=1 --time-limit=" + std::to_string(limit) + " " +
                      detail::shell_quote(encoding.string()) + " " + detail::shell_quote(facts.string()) +
                      " 2>/dev/null";
    auto [status, output] = detail::run_capture(cmd);

    nlohmann::json report;
    try {
        report = nlohmann::json::parse(output);
    } catch (const nlohmann::json::parse_error&) {
        throw AspError("unreadable solver output (exit status " + std::to_string(status) + ")");
    }
    std::string result = report.value("Result", "");
    AspResult out;
    if (result == "UNSATISFIABLE") return out;
    if (result != "OPTIMUM FOUND" && result != "SATISFIABLE") throw AspError("solver result " + result);
    bool proven = result == "SATISFIABLE" || report.at("Models").value("Optimum", "no") == "yes";
    if (!proven) throw AspError("solver stopped before proving optimality");

    const auto& witnesses = report.at("Call").back().at("Witnesses");
    if (witnesses.empty()) throw AspError("solver reported no model");
    std::map<std::string, Requirement> softs;
    for (const auto& [r, p] : inst.app.soft_reqs) softs.emplace("lift(" + to_string(r) + ")", r);
    std::map<std::string, ServiceId> services;
    std::map<std::string, NodeId> nodes;
    for (const auto& s : inst.app.services) services.emplace(quote_id(s), s);
    for (const auto& x : inst.infra.nodes) nodes.emplace(quote_id(x), x);

    out.satisfiable = true;
    for (const auto& atom : witnesses.back().at("Value")) {
        std::string a = atom.get<std::string>();
        if (a.rfind("lift(", 0) == 0) {
            auto it = softs.find(a);
            if (it == softs.end()) throw AspError("unexpected atom " + a);
            out.lifted.insert(it->second);
        } else if (a.rfind("deploy(", 0) == 0) {
            // deploy("s","x"): split at the comma between two quoted strings
            std::string body = a.substr(7, a.size() - 8);
            bool found = false;
            for (std::size_t i = body.find("\",\""); i != std::string::npos; i = body.find("\",\"", i + 1)) {
                auto s = services.find(body.substr(0, i + 1));
                auto x = nodes.find(body.substr(i + 2));
                if (s != services.end() && x != nodes.end()) {
                    out.assignment[s->second] = x->second;
                    found = true;
                    break;
                }
            }
            if (!found) throw AspError("unexpected atom " + a);
        }
    }
    out.cost = lift_cost(inst.app, out.lifted);
    return out;
}

}  // namespace relaxplace

#endif  // RELAXPLACE_ASP_HPP
