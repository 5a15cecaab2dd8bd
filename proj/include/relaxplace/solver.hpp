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

#ifndef RELAXPLACE_SOLVER_HPP
#define RELAXPLACE_SOLVER_HPP

#include <chrono>
#include <cstdint>
#include <functional>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "relaxplace/compiled.hpp"
#include "relaxplace/model.hpp"
#include "relaxplace/search.hpp"
#include "relaxplace/semantics.hpp"

namespace relaxplace {

enum class Strategy { BB, CoreGuided };

inline const char* strategy_name(Strategy s) { return s == Strategy::BB ? "bb" : "core"; }

inline std::optional<Strategy> strategy_from_name(std::string_view name) {
    if (name == "bb") return Strategy::BB;
    if (name == "core" || name == "usc" || name == "core-guided") return Strategy::CoreGuided;
    return std::nullopt;
}

struct SolveConfig {
    Strategy strategy = Strategy::BB;
    double timeout_s = 180.0;
    std::uint64_t seed = 0;
    bool emit_intermediate = false;

    void validate() const {
        if (!(timeout_s > 0)) throw std::invalid_argument("timeout must be positive");
    }
};

enum class SolveStatus { Optimal, Feasible, Infeasible, Unknown };

inline const char* status_name(SolveStatus s) {
    switch (s) {
    case SolveStatus::Optimal: return "optimal";
    case SolveStatus::Feasible: return "feasible";
    case SolveStatus::Infeasible: return "infeasible";
    case SolveStatus::Unknown: return "unknown";
    }
    return "?";
}

struct Incumbent {
    double elapsed_s = 0;
    CostVector cost;
};

struct SolveOutcome {
    SolveStatus status = SolveStatus::Unknown;
    std::optional<Solution> best;
    /// Every improving solution in discovery order.
    std::vector<Incumbent> incumbents;
    double elapsed_s = 0;
    std::uint64_t search_nodes = 0;
};

/// Invoked from the solving thread for every improving solution.
using IncumbentCallback = std::function<void(const Incumbent&, const Solution&)>;

/// True iff the solution is a total feasible placement whose recorded cost
/// matches its lift set.
inline bool certify(const Infrastructure& infra, const Application& app, const Solution& solution) {
    try {
        if (!check_placement(infra, app, solution.assignment, solution.lifted).empty()) return false;
        return lift_cost(app, solution.lifted) == solution.cost;
    } catch (const std::invalid_argument&) {
        return false;
    }
}

namespace detail {

class Stopwatch {
public:
    explicit Stopwatch(double timeout_s) : start_(Clock::now()) {
        auto budget = std::chrono::duration_cast<Clock::duration>(std::chrono::duration<double>(timeout_s));
        deadline_ = start_ + budget;
    }
    double elapsed() const { return std::chrono::duration<double>(Clock::now() - start_).count(); }
    Clock::time_point deadline() const { return deadline_; }
    bool expired() const { return Clock::now() >= deadline_; }

private:
    Clock::time_point start_;
    Clock::time_point deadline_;
};

inline Solution finalize(const Infrastructure& infra, const Application& app, const CompiledInstance& compiled,
                         const std::vector<int>& assignment, const std::vector<int>& lifted, bool optimal) {
    Solution sol = compiled.to_solution(assignment, lifted);
    sol.optimal = optimal;
    if (!certify(infra, app, sol)) throw std::logic_error("internal error: solver produced an uncertified solution");
    return sol;
}

/// Minimum-cost set meeting every core; exact branch-and-bound.
class HittingSet {
public:
    HittingSet(const std::vector<PackedCost>& costs, const std::vector<std::vector<int>>& cores,
               Clock::time_point deadline)
        : costs_(costs), cores_(cores), deadline_(deadline), chosen_(costs.size(), 0), banned_(costs.size(), 0) {}

    /// Returns false on timeout.
    bool solve(std::vector<int>& out) {
        best_ = kInfiniteCost;
        go(0);
        if (timed_out_) return false;
        out = best_set_;
        return true;
    }

private:
    bool hit(const std::vector<int>& core) const {
        for (int e : core)
            if (chosen_[e]) return true;
        return false;
    }

    void go(PackedCost cost) {
        if (timed_out_ || ((++steps_ & 255) == 0 && Clock::now() >= deadline_)) {
            timed_out_ = true;
            return;
        }
        // disjoint uncovered cores give an additive lower bound
        std::vector<char> used(costs_.size(), 0);
        PackedCost bound = cost;
        const std::vector<int>* branch = nullptr;
        std::size_t branch_width = 0;
        for (const auto& core : cores_) {
            if (hit(core)) continue;
            std::size_t width = 0;
            bool disjoint = true;
            PackedCost cheapest = kInfiniteCost;
            for (int e : core) {
                if (banned_[e]) continue;
                ++width;
                if (used[e]) disjoint = false;
                cheapest = std::min(cheapest, costs_[e]);
            }
            if (width == 0) return;
            if (!branch || width < branch_width) {
                branch = &core;
                branch_width = width;
            }
            if (disjoint) {
                bound += cheapest;
                for (int e : core) used[e] = 1;
            }
        }
        if (bound >= best_) return;
        if (!branch) {
            best_ = cost;
            best_set_.clear();
            for (std::size_t e = 0; e < chosen_.size(); ++e)
                if (chosen_[e]) best_set_.push_back(static_cast<int>(e));
            return;
        }
        std::vector<int> options;
        for (int e : *branch)
            if (!banned_[e]) options.push_back(e);
        std::sort(options.begin(), options.end(), [&](int a, int b) { return costs_[a] < costs_[b]; });
        std::vector<int> newly_banned;
        for (int e : options) {
            chosen_[e] = 1;
            go(cost + costs_[e]);
            chosen_[e] = 0;
            if (timed_out_) break;
            // later branches exclude e; the branch above covered it
            banned_[e] = 1;
            newly_banned.push_back(e);
        }
        for (int e : newly_banned) banned_[e] = 0;
    }

    const std::vector<PackedCost>& costs_;
    const std::vector<std::vector<int>>& cores_;
    Clock::time_point deadline_;
    std::vector<char> chosen_;
    std::vector<char> banned_;
    PackedCost best_ = kInfiniteCost;
    std::vector<int> best_set_;
    std::uint64_t steps_ = 0;
    bool timed_out_ = false;
};

}  // namespace detail

/// Model-guided branch-and-bound.  Anytime: each improving solution is
/// recorded and, with emit_intermediate, passed to `on_incumbent`.
inline SolveOutcome solve_bb(const Infrastructure& infra, const Application& app, const SolveConfig& config,
                             const IncumbentCallback& on_incumbent = {}) {
    config.validate();
    detail::Stopwatch clock(config.timeout_s);
    CompiledInstance compiled(infra, app);
    SolveOutcome out;

    SearchOptions opt;
    opt.seed = config.seed;
    opt.deadline = clock.deadline();
    opt.on_incumbent = [&](const std::vector<int>& a, const std::vector<int>& lifted, PackedCost) {
        Incumbent inc{clock.elapsed(), compiled.unpack(lifted)};
        out.incumbents.push_back(inc);
        if (config.emit_intermediate && on_incumbent)
            on_incumbent(inc, detail::finalize(infra, app, compiled, a, lifted, false));
    };
    PlacementSearch search(compiled, std::vector<SoftMode>(compiled.num_softs(), SoftMode::Soft), opt);
    SearchResult res = search.run();

    out.search_nodes = res.nodes;
    if (res.found) {
        out.best = detail::finalize(infra, app, compiled, res.assignment, res.lifted, !res.timed_out);
        out.status = res.timed_out ? SolveStatus::Feasible : SolveStatus::Optimal;
    } else {
        out.status = res.timed_out ? SolveStatus::Unknown : SolveStatus::Infeasible;
    }
    out.elapsed_s = clock.elapsed();
    return out;
}

/// Core-guided relaxation.  Every soft requirement starts out hard; each
/// refutation yields a core (a set of softs of which at least one must be
/// lifted), which is shrunk by deletion.  The next candidate lift set is a
/// minimum-cost hitting set of all cores found so far, so the first
/// feasible check that succeeds is optimal.  No sub-optimal solutions are
/// produced.
inline SolveOutcome solve_core_guided(const Infrastructure& infra, const Application& app,
                                      const SolveConfig& config, const IncumbentCallback& on_incumbent = {}) {
    config.validate();
    detail::Stopwatch clock(config.timeout_s);
    CompiledInstance compiled(infra, app);
    SolveOutcome out;
    const int softs = compiled.num_softs();

    auto check = [&](const std::vector<char>& hard) {
        std::vector<SoftMode> modes(softs, SoftMode::Off);
        for (int i = 0; i < softs; ++i)
            if (hard[i]) modes[i] = SoftMode::Hard;
        SearchOptions opt;
        opt.seed = config.seed;
        opt.deadline = clock.deadline();
        opt.collect_conflict = true;
        PlacementSearch search(compiled, std::move(modes), opt);
        SearchResult res = search.run();
        out.search_nodes += res.nodes;
        return res;
    };

    std::vector<PackedCost> costs(softs);
    for (int i = 0; i < softs; ++i) costs[i] = compiled.softs()[i].packed;
    std::vector<std::vector<int>> cores;
    std::vector<int> relaxed;  // current hitting set

    for (;;) {
        std::vector<char> hard(softs, 1);
        for (int i : relaxed) hard[i] = 0;
        SearchResult res = check(hard);
        if (res.timed_out) break;
        if (res.found) {
            std::vector<int> lifted;
            PackedCost cost;
            PlacementSearch::best_lifts(compiled, res.assignment, lifted, cost);
            out.best = detail::finalize(infra, app, compiled, res.assignment, lifted, true);
            out.status = SolveStatus::Optimal;
            Incumbent inc{clock.elapsed(), out.best->cost};
            out.incumbents.push_back(inc);
            if (config.emit_intermediate && on_incumbent) on_incumbent(inc, *out.best);
            out.elapsed_s = clock.elapsed();
            return out;
        }
        std::vector<int> core = res.conflict;
        if (core.empty()) {
            out.status = SolveStatus::Infeasible;
            out.elapsed_s = clock.elapsed();
            return out;
        }
        // deletion-based shrinking, most expensive members first
        std::vector<int> order = core;
        std::sort(order.begin(), order.end(), [&](int a, int b) { return costs[a] > costs[b]; });
        bool timed_out = false;
        for (int candidate : order) {
            if (std::find(core.begin(), core.end(), candidate) == core.end()) continue;
            std::vector<char> trial(softs, 0);
            for (int i : core)
                if (i != candidate) trial[i] = 1;
            SearchResult t = check(trial);
            if (t.timed_out) {
                timed_out = true;
                break;
            }
            if (!t.found) core = t.conflict;
        }
        if (timed_out) break;
        if (core.empty()) {
            out.status = SolveStatus::Infeasible;
            out.elapsed_s = clock.elapsed();
            return out;
        }
        cores.push_back(core);
        detail::HittingSet hs(costs, cores, clock.deadline());
        if (!hs.solve(relaxed)) break;
    }
    out.status = SolveStatus::Unknown;
    out.elapsed_s = clock.elapsed();
    return out;
}

inline SolveOutcome solve(const Infrastructure& infra, const Application& app, const SolveConfig& config,
                          const IncumbentCallback& on_incumbent = {}) {
    return config.strategy == Strategy::BB ? solve_bb(infra, app, config, on_incumbent)
                                           : solve_core_guided(infra, app, config, on_incumbent);
}

}  // namespace relaxplace

#endif  // RELAXPLACE_SOLVER_HPP
