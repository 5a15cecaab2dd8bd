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

// Depth-first branch-and-bound over service -> node assignments.
//
// Each soft requirement is given a mode for one run: Soft (may be lifted at
// its cost), Hard (must hold) or Off (ignored).  All-Soft gives the
// optimization search; Hard/Off only gives a plain feasibility check, which
// can additionally report the Hard-mode softs its refutation relied on.
//
// Propagation is forward checking: assigning a service removes values from
// the domains of its link neighbours (hard link requirements), charges soft
// link costs to those values, and consumes hard reservations on the host.
// The bound is the cost already forced by the partial assignment plus, for
// each unassigned service, the cheapest value left in its domain.  Soft
// reservations are settled at the leaves by an exact subset search per
// (node, resource) group.

#ifndef RELAXPLACE_SEARCH_HPP
#define RELAXPLACE_SEARCH_HPP

#include <algorithm>
#include <chrono>
#include <cstdint>
#include <functional>
#include <map>
#include <numeric>
#include <vector>

#include "relaxplace/compiled.hpp"

namespace relaxplace {

enum class SoftMode : std::uint8_t { Soft, Hard, Off };

using Clock = std::chrono::steady_clock;

inline std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

struct SearchOptions {
    std::uint64_t seed = 0;
    Clock::time_point deadline = Clock::time_point::max();
    bool collect_conflict = false;
    /// Only solutions strictly cheaper than this are accepted.
    PackedCost upper_bound = kInfiniteCost;
    std::function<void(const std::vector<int>& assignment, const std::vector<int>& lifted, PackedCost)> on_incumbent;
};

struct SearchResult {
    bool timed_out = false;
    bool found = false;
    std::vector<int> assignment;
    std::vector<int> lifted;  // soft indices, ascending
    PackedCost cost = kInfiniteCost;
    /// Hard-mode softs a refutation depended on; meaningful when the search
    /// was exhaustive, found nothing and collect_conflict was set.
    std::vector<int> conflict;
    std::uint64_t nodes = 0;
};

class PlacementSearch {
public:
    PlacementSearch(const CompiledInstance& inst, std::vector<SoftMode> modes, SearchOptions options)
        : inst_(inst), modes_(std::move(modes)), opt_(std::move(options)), S_(inst.num_services()),
          N_(inst.num_nodes()) {
        if (static_cast<int>(modes_.size()) != inst.num_softs())
            throw std::invalid_argument("one mode per soft requirement expected");
        prepare();
    }

    SearchResult run() {
        result_ = SearchResult{};
        best_ = opt_.upper_bound;
        blamed_.assign(inst_.num_softs(), 0);
        if (inst_.negative_capacity()) return finish();
        if (S_ == 0) {
            leaf();
            return finish();
        }
        if (N_ == 0) return finish();
        auto& root = bounds_[0];
        for (int u = 0; u < S_; ++u) {
            refresh_bound(u, root);
            if (root.arg[u] < 0) {
                blame_all(u);
                return finish();
            }
        }
        dfs(0);
        return finish();
    }

    /// Cheapest lift set for a complete assignment under all-Soft modes, or
    /// false when some hard requirement fails.
    static bool best_lifts(const CompiledInstance& inst, const std::vector<int>& assignment,
                           std::vector<int>& lifted, PackedCost& cost) {
        PlacementSearch probe(inst, std::vector<SoftMode>(inst.num_softs(), SoftMode::Soft), {});
        return probe.evaluate(assignment, lifted, cost);
    }

private:
    // Binding reservations of one service on one resource, summed.
    struct Hosted {
        int resource;
        std::int64_t amount;
        std::vector<int> softs;  // Hard-mode softs among them
    };
    struct Adjacent {
        int link;
        int other;
        bool outgoing;  // this service is the link source
    };
    struct Bounds {
        std::vector<PackedCost> min;
        std::vector<int> arg;
    };

    bool hard_like(int soft) const { return soft < 0 || modes_[soft] == SoftMode::Hard; }
    bool active(int soft) const { return soft < 0 || modes_[soft] != SoftMode::Off; }
    std::size_t cell(int t, int x) const { return static_cast<std::size_t>(t) * N_ + x; }

    void prepare() {
        const std::size_t cells = static_cast<std::size_t>(S_) * N_;
        static_ok_.assign(cells, 1);
        static_cost_.assign(cells, 0);
        static_blame_.assign(cells, CompiledInstance::kHard);
        std::vector<char> hard_fail(cells, 0);
        auto note_static = [&](int t, int x, int soft) {
            std::size_t c = cell(t, x);
            if (!active(soft)) return;
            if (hard_like(soft)) {
                static_ok_[c] = 0;
                if (soft < 0) hard_fail[c] = 1;
                else if (static_blame_[c] < 0) static_blame_[c] = soft;
            } else {
                static_cost_[c] += inst_.softs()[soft].packed;
            }
        };
        for (const auto& r : inst_.node_reqs())
            for (int x = 0; x < N_; ++x)
                if (!r.ok[x]) note_static(r.service, x, r.soft);
        hosted_.assign(S_, {});
        for (int i = 0; i < static_cast<int>(inst_.reserves().size()); ++i) {
            const auto& r = inst_.reserves()[i];
            if (!active(r.soft)) continue;
            for (int x = 0; x < N_; ++x)
                if (!r.fits_alone[x]) note_static(r.service, x, r.soft);
            if (!hard_like(r.soft)) continue;
            auto& list = hosted_[r.service];
            auto it = std::find_if(list.begin(), list.end(), [&](const Hosted& h) { return h.resource == r.resource; });
            if (it == list.end()) it = list.insert(list.end(), Hosted{r.resource, 0, {}});
            it->amount += r.amount;
            if (r.soft >= 0) it->softs.push_back(r.soft);
        }
        for (std::size_t c = 0; c < cells; ++c)
            if (hard_fail[c]) static_blame_[c] = CompiledInstance::kHard;

        adjacent_.assign(S_, {});
        for (int i = 0; i < static_cast<int>(inst_.link_reqs().size()); ++i) {
            const auto& l = inst_.link_reqs()[i];
            if (!active(l.soft)) continue;
            adjacent_[l.from].push_back({i, l.to, true});
            adjacent_[l.to].push_back({i, l.from, false});
        }

        order_services();

        assign_.assign(S_, -1);
        blocked_.assign(cells, 0);
        extra_.assign(cells, 0);
        rem_.clear();
        for (int r = 0; r < inst_.num_resources(); ++r) rem_.push_back(inst_.capacity(r));
        bounds_.assign(S_ + 1, Bounds{std::vector<PackedCost>(S_, 0), std::vector<int>(S_, -1)});
        tie_.resize(cells);
        for (int t = 0; t < S_; ++t)
            for (int x = 0; x < N_; ++x)
                tie_[cell(t, x)] = splitmix64(opt_.seed ^ (static_cast<std::uint64_t>(t) << 32 | x));
    }

    // Most hard requirements first; ties go to the service with the most
    // links into the already ordered prefix, then the smallest static
    // domain, then a seeded hash.
    void order_services() {
        std::vector<int> hard_count(S_, 0), domain(S_, 0), placed(S_, 0), linked(S_, 0);
        for (const auto& r : inst_.node_reqs())
            if (active(r.soft) && hard_like(r.soft)) ++hard_count[r.service];
        for (const auto& r : inst_.reserves())
            if (active(r.soft) && hard_like(r.soft)) ++hard_count[r.service];
        for (const auto& l : inst_.link_reqs())
            if (active(l.soft) && hard_like(l.soft)) {
                ++hard_count[l.from];
                ++hard_count[l.to];
            }
        for (int t = 0; t < S_; ++t)
            for (int x = 0; x < N_; ++x) domain[t] += static_ok_[cell(t, x)];
        order_.clear();
        for (int step = 0; step < S_; ++step) {
            int pick = -1;
            auto better = [&](int a, int b) {
                if (hard_count[a] != hard_count[b]) return hard_count[a] > hard_count[b];
                if (linked[a] != linked[b]) return linked[a] > linked[b];
                if (domain[a] != domain[b]) return domain[a] < domain[b];
                return splitmix64(opt_.seed + a) < splitmix64(opt_.seed + b);
            };
            for (int t = 0; t < S_; ++t)
                if (!placed[t] && (pick < 0 || better(t, pick))) pick = t;
            placed[pick] = 1;
            order_.push_back(pick);
            for (const auto& a : adjacent_[pick]) ++linked[a.other];
        }
    }

    bool fits(int t, int x) const {
        for (const auto& h : hosted_[t]) {
            std::int64_t left = rem_[h.resource][x];
            if (left != CompiledInstance::kUnbounded && left < h.amount) return false;
        }
        return true;
    }

    bool candidate(int t, int x) const {
        std::size_t c = cell(t, x);
        return static_ok_[c] && blocked_[c] == 0 && fits(t, x);
    }

    PackedCost value_cost(int t, int x) const {
        std::size_t c = cell(t, x);
        return static_cost_[c] + extra_[c];
    }

    void refresh_bound(int u, Bounds& b) const {
        PackedCost m = kInfiniteCost;
        int arg = -1;
        for (int x = 0; x < N_; ++x) {
            if (!candidate(u, x)) continue;
            PackedCost v = value_cost(u, x);
            if (arg < 0 || v < m) {
                m = v;
                arg = x;
            }
        }
        b.min[u] = arg < 0 ? kInfiniteCost : m;
        b.arg[u] = arg;
    }

    bool link_ok(const Adjacent& a, int x, int y) const {
        const auto& l = inst_.link_reqs()[a.link];
        return a.outgoing ? inst_.link_ok(l, x, y) : inst_.link_ok(l, y, x);
    }

    // Blocks (hard) or surcharges (soft) the partner's nodes that would
    // violate link `a` given this side on x; sign -1 undoes it.
    void propagate(const Adjacent& a, int x, int sign) {
        const auto& l = inst_.link_reqs()[a.link];
        const bool hard = hard_like(l.soft);
        const PackedCost price = hard ? 0 : inst_.softs()[l.soft].packed;
        int* blocked = blocked_.data() + cell(a.other, 0);
        PackedCost* extra = extra_.data() + cell(a.other, 0);
        const char* row = inst_.link_row(l, x, a.outgoing);
        for (int y = 0; y < N_; ++y) {
            if (row ? row[y] : link_ok(a, x, y)) continue;
            if (hard) blocked[y] += sign;
            else if (sign > 0) extra[y] += price;
            else extra[y] -= price;
        }
    }

    void assign(int t, int x) {
        assign_[t] = x;
        cost_ += value_cost(t, x);
        for (const auto& h : hosted_[t])
            if (rem_[h.resource][x] != CompiledInstance::kUnbounded) rem_[h.resource][x] -= h.amount;
        for (const auto& a : adjacent_[t]) {
            if (assign_[a.other] >= 0) continue;
            propagate(a, x, +1);
        }
    }

    void unassign(int t, int x) {
        for (const auto& a : adjacent_[t]) {
            if (assign_[a.other] >= 0) continue;
            propagate(a, x, -1);
        }
        for (const auto& h : hosted_[t])
            if (rem_[h.resource][x] != CompiledInstance::kUnbounded) rem_[h.resource][x] += h.amount;
        cost_ -= value_cost(t, x);
        assign_[t] = -1;
    }

    bool out_of_time() {
        if ((++result_.nodes & 63) == 0 && Clock::now() >= opt_.deadline) timed_out_ = true;
        return timed_out_;
    }

    void dfs(int depth) {
        if (out_of_time()) return;
        if (depth == S_) {
            leaf();
            return;
        }
        const int t = order_[depth];
        const Bounds& here = bounds_[depth];
        PackedCost rest = 0;
        for (int d = depth + 1; d < S_; ++d) rest += here.min[order_[d]];

        struct Choice {
            PackedCost cost;
            std::uint64_t tie;
            int node;
        };
        std::vector<Choice> choices;
        for (int x = 0; x < N_; ++x)
            if (candidate(t, x)) choices.push_back({value_cost(t, x), tie_[cell(t, x)], x});
        std::sort(choices.begin(), choices.end(), [](const Choice& a, const Choice& b) {
            return a.cost != b.cost ? a.cost < b.cost : a.tie < b.tie;
        });

        Bounds& next = bounds_[depth + 1];
        for (const auto& ch : choices) {
            // costs of the other services can only grow below this node
            if (cost_ + ch.cost + rest >= best_) break;
            assign(t, ch.node);
            bool viable = true;
            PackedCost lb = cost_;
            for (int d = depth + 1; d < S_ && viable; ++d) {
                int u = order_[d];
                bool touched = here.arg[u] == ch.node || linked_to(u, t);
                if (touched) {
                    refresh_bound(u, next);
                } else {
                    next.min[u] = here.min[u];
                    next.arg[u] = here.arg[u];
                }
                if (next.arg[u] < 0) {
                    if (opt_.collect_conflict) blame_all(u);
                    viable = false;
                } else {
                    lb += next.min[u];
                }
            }
            if (viable && lb < best_) dfs(depth + 1);
            unassign(t, ch.node);
            if (timed_out_) return;
        }
        if (opt_.collect_conflict && !result_.found)
            for (int x = 0; x < N_; ++x)
                if (!candidate(t, x)) blame_value(t, x);
    }

    bool linked_to(int u, int t) const {
        for (const auto& a : adjacent_[u])
            if (a.other == t) return true;
        return false;
    }

    void leaf() {
        std::vector<int> lifted;
        PackedCost cost;
        if (!evaluate(assign_, lifted, cost)) return;
        if (cost >= best_) return;
        best_ = cost;
        result_.found = true;
        result_.assignment = assign_;
        result_.lifted = lifted;
        result_.cost = cost;
        if (opt_.on_incumbent) opt_.on_incumbent(assign_, lifted, cost);
    }

    // Full evaluation of a complete assignment under the current modes.
    bool evaluate(const std::vector<int>& a, std::vector<int>& lifted, PackedCost& cost) const {
        lifted.clear();
        cost = 0;
        for (const auto& r : inst_.node_reqs()) {
            if (!active(r.soft) || r.ok[a[r.service]]) continue;
            if (hard_like(r.soft)) return false;
            lifted.push_back(r.soft);
        }
        for (const auto& l : inst_.link_reqs()) {
            if (!active(l.soft) || inst_.link_ok(l, a[l.from], a[l.to])) continue;
            if (hard_like(l.soft)) return false;
            lifted.push_back(l.soft);
        }
        // (resource, node) -> demand of binding reservations, and soft candidates
        std::map<std::pair<int, int>, std::int64_t> demand;
        std::map<std::pair<int, int>, std::vector<int>> optional;
        for (int i = 0; i < static_cast<int>(inst_.reserves().size()); ++i) {
            const auto& r = inst_.reserves()[i];
            if (!active(r.soft)) continue;
            int x = a[r.service];
            if (!r.fits_alone[x]) {
                if (hard_like(r.soft)) return false;
                lifted.push_back(r.soft);
                continue;
            }
            if (inst_.capacity(r.resource)[x] == CompiledInstance::kUnbounded) continue;
            if (hard_like(r.soft)) demand[{r.resource, x}] += r.amount;
            else optional[{r.resource, x}].push_back(i);
        }
        for (const auto& [key, d] : demand)
            if (d > inst_.capacity(key.first)[key.second]) return false;
        for (const auto& [key, items] : optional) {
            std::int64_t room = inst_.capacity(key.first)[key.second];
            if (auto it = demand.find(key); it != demand.end()) room -= it->second;
            std::int64_t total = 0;
            for (int i : items) total += inst_.reserves()[i].amount;
            if (total <= room) continue;
            settle_group(items, total - room, lifted);
        }
        std::sort(lifted.begin(), lifted.end());
        cost = inst_.packed_cost(lifted);
        return true;
    }

    // Cheapest subset of `items` whose amounts sum to at least `deficit`.
    void settle_group(const std::vector<int>& items, std::int64_t deficit, std::vector<int>& lifted) const {
        std::vector<int> order(items);
        const auto& res = inst_.reserves();
        const auto& softs = inst_.softs();
        std::sort(order.begin(), order.end(), [&](int a, int b) { return res[a].amount > res[b].amount; });
        std::vector<std::int64_t> suffix(order.size() + 1, 0);
        for (std::size_t i = order.size(); i-- > 0;) suffix[i] = suffix[i + 1] + res[order[i]].amount;
        PackedCost best = kInfiniteCost;
        std::vector<int> pick, best_pick;
        std::function<void(std::size_t, std::int64_t, PackedCost)> go = [&](std::size_t i, std::int64_t need,
                                                                           PackedCost cost) {
            if (cost >= best) return;
            if (need <= 0) {
                best = cost;
                best_pick = pick;
                return;
            }
            if (i == order.size() || suffix[i] < need) return;
            int item = order[i];
            pick.push_back(item);
            go(i + 1, need - res[item].amount, cost + softs[res[item].soft].packed);
            pick.pop_back();
            go(i + 1, need, cost);
        };
        go(0, deficit, 0);
        for (int item : best_pick) lifted.push_back(res[item].soft);
    }

    void blame(int soft) {
        if (soft >= 0) blamed_[soft] = 1;
    }

    void blame_all(int t) {
        for (int x = 0; x < N_; ++x) blame_value(t, x);
    }

    // Records one reason why value x is not available to service t,
    // preferring reasons that involve no soft requirement.
    void blame_value(int t, int x) {
        std::size_t c = cell(t, x);
        if (!static_ok_[c]) {
            blame(static_blame_[c]);
            return;
        }
        if (blocked_[c] > 0) {
            int chosen = CompiledInstance::kHard - 1;
            for (const auto& a : adjacent_[t]) {
                int y = assign_[a.other];
                if (y < 0) continue;
                int soft = inst_.link_reqs()[a.link].soft;
                if (!hard_like(soft) || link_ok(a, x, y)) continue;
                if (soft < 0) return;
                if (chosen < CompiledInstance::kHard || (blamed_[soft] && !blamed_[chosen])) chosen = soft;
            }
            if (chosen >= 0) blame(chosen);
            return;
        }
        // capacity: pick the exhausted resource with the fewest soft contributors
        std::vector<int> best;
        bool have = false;
        for (const auto& h : hosted_[t]) {
            std::int64_t left = rem_[h.resource][x];
            if (left == CompiledInstance::kUnbounded || left >= h.amount) continue;
            std::vector<int> why = h.softs;
            for (int u = 0; u < S_; ++u) {
                if (assign_[u] != x) continue;
                for (const auto& g : hosted_[u])
                    if (g.resource == h.resource) why.insert(why.end(), g.softs.begin(), g.softs.end());
            }
            if (!have || why.size() < best.size()) {
                best = std::move(why);
                have = true;
            }
        }
        for (int s : best) blame(s);
    }

    SearchResult finish() {
        result_.timed_out = timed_out_;
        if (opt_.collect_conflict)
            for (int i = 0; i < inst_.num_softs(); ++i)
                if (blamed_[i]) result_.conflict.push_back(i);
        return result_;
    }

    const CompiledInstance& inst_;
    std::vector<SoftMode> modes_;
    SearchOptions opt_;
    const int S_;
    const int N_;

    std::vector<char> static_ok_;
    std::vector<PackedCost> static_cost_;
    std::vector<int> static_blame_;
    std::vector<std::vector<Hosted>> hosted_;
    std::vector<std::vector<Adjacent>> adjacent_;
    std::vector<int> order_;
    std::vector<std::uint64_t> tie_;

    std::vector<int> assign_;
    std::vector<int> blocked_;
    std::vector<PackedCost> extra_;
    std::vector<std::vector<std::int64_t>> rem_;
    std::vector<Bounds> bounds_;
    PackedCost cost_ = 0;
    PackedCost best_ = kInfiniteCost;
    bool timed_out_ = false;
    std::vector<char> blamed_;
    SearchResult result_;
};

}  // namespace relaxplace

#endif  // RELAXPLACE_SEARCH_HPP
