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

// Index-based view of an instance used by the search procedures: services
// and nodes become dense integers, requirement outcomes per node are
// tabulated, and priority-levelled costs are packed into one integer.

#ifndef RELAXPLACE_COMPILED_HPP
#define RELAXPLACE_COMPILED_HPP

#include <algorithm>
#include <cstdint>
#include <limits>
#include <map>
#include <optional>
#include <set>
#include <stdexcept>
#include <unordered_map>
#include <vector>

#include "relaxplace/model.hpp"
#include "relaxplace/semantics.hpp"

namespace relaxplace {

/// Lexicographic cost packed into a single integer.
using PackedCost = unsigned __int128;

inline constexpr PackedCost kInfiniteCost = ~PackedCost{0};

namespace detail {

/// Dense per-key link attribute lookup; falls back to a hash map for very
/// large infrastructures.
class LinkTable {
public:
    LinkTable(int n, bool dense) : n_(n), dense_(dense) {
        if (dense_) values_.resize(static_cast<std::size_t>(n) * n);
    }

    void set(int x, int y, const AttrValue& v) {
        if (dense_) values_[index(x, y)] = v;
        else sparse_[index(x, y)] = v;
    }

    std::optional<AttrValue> get(int x, int y) const {
        if (dense_) return values_[index(x, y)];
        auto it = sparse_.find(index(x, y));
        if (it == sparse_.end()) return std::nullopt;
        return it->second;
    }

private:
    std::size_t index(int x, int y) const { return static_cast<std::size_t>(x) * n_ + y; }

    int n_;
    bool dense_;
    std::vector<std::optional<AttrValue>> values_;
    std::unordered_map<std::size_t, AttrValue> sparse_;
};

}  // namespace detail

class CompiledInstance {
public:
    static constexpr int kHard = -1;
    static constexpr std::int64_t kUnbounded = std::numeric_limits<std::int64_t>::max();

    struct NodeReq {
        int service;
        int soft;                // soft index or kHard
        std::vector<char> ok;    // per node
    };
    struct LinkReq {
        int from, to;            // services
        int soft;
        RequirementExpr expr;
        const detail::LinkTable* table;  // nullptr when no link carries the key
        const std::vector<char>* ok;     // ok[x*N+y] for source x, target y; may be null
        const std::vector<char>* ok_t;   // transposed
    };
    struct Reserve {
        int service;
        int resource;
        std::int64_t amount;
        int soft;
        std::vector<char> fits_alone;  // per node: host value is absent or >= amount
    };
    struct Soft {
        Requirement req;
        SoftParams params;
        PackedCost packed;
    };

    CompiledInstance(const Infrastructure& infra, const Application& app) : infra_(&infra), app_(&app) {
        for (const auto& n : infra.nodes) node_names_.push_back(n);
        for (const auto& s : app.services) service_names_.push_back(s);
        std::map<NodeId, int> node_index;
        std::map<ServiceId, int> service_index;
        for (int i = 0; i < num_nodes(); ++i) node_index[node_names_[i]] = i;
        for (int i = 0; i < num_services(); ++i) service_index[service_names_[i]] = i;

        pack_levels(app);

        // shared resources and their per-node capacities
        std::map<AttrKey, int> resource_index;
        for (const auto& key : shared_resources(app)) {
            int r = static_cast<int>(resource_names_.size());
            resource_index[key] = r;
            resource_names_.push_back(key);
            std::vector<std::int64_t> cap(num_nodes(), kUnbounded);
            for (int x = 0; x < num_nodes(); ++x) {
                const auto* v = infra.node_attr(node_names_[x], key);
                if (v && v->is_int()) {
                    cap[x] = v->as_int();
                    // the aggregate rule fires on an empty sum
                    if (cap[x] < 0) negative_capacity_ = true;
                }
            }
            capacity_.push_back(std::move(cap));
        }

        std::set<AttrKey> link_keys;
        for (const auto& r : app.hard_reqs)
            if (is_link(r.target)) link_keys.insert(r.expr.key);
        for (const auto& [r, p] : app.soft_reqs)
            if (is_link(r.target)) link_keys.insert(r.expr.key);
        bool dense = num_nodes() <= 3000;
        for (const auto& key : link_keys) {
            auto [it, fresh] = link_tables_.try_emplace(key, num_nodes(), dense);
            auto& table = it->second;
            if (key == kLatencyKey)
                for (int x = 0; x < num_nodes(); ++x) table.set(x, x, AttrValue(std::int64_t{0}));
        }
        for (const auto& [k, v] : infra.link_attrs) {
            auto it = link_tables_.find(std::get<2>(k));
            if (it == link_tables_.end()) continue;
            it->second.set(node_index.at(std::get<0>(k)), node_index.at(std::get<1>(k)), v);
        }

        auto add = [&](const Requirement& r, int soft) {
            if (const auto* p = std::get_if<ServicePair>(&r.target)) {
                if (r.expr.kind == ReqKind::Reserve) return;  // never violated; only marks a shared resource
                auto it = link_tables_.find(r.expr.key);
                LinkReq l{service_index.at(p->first), service_index.at(p->second), soft, r.expr,
                          it == link_tables_.end() ? nullptr : &it->second, nullptr, nullptr};
                if (dense) {
                    auto [m, fresh] = link_matrices_.try_emplace(r.expr);
                    if (fresh) {
                        const std::size_t n = num_nodes();
                        m->second.first.resize(n * n);
                        m->second.second.resize(n * n);
                        for (std::size_t x = 0; x < n; ++x)
                            for (std::size_t y = 0; y < n; ++y) {
                                char ok = link_ok(l, static_cast<int>(x), static_cast<int>(y));
                                m->second.first[x * n + y] = ok;
                                m->second.second[y * n + x] = ok;
                            }
                    }
                    l.ok = &m->second.first;
                    l.ok_t = &m->second.second;
                }
                links_.push_back(std::move(l));
                return;
            }
            int s = service_index.at(std::get<ServiceId>(r.target));
            if (r.expr.kind == ReqKind::Reserve) {
                Reserve res{s, resource_index.at(r.expr.key), r.expr.threshold.as_int(), soft, {}};
                res.fits_alone.resize(num_nodes());
                for (int x = 0; x < num_nodes(); ++x) {
                    const auto* v = infra.node_attr(node_names_[x], r.expr.key);
                    res.fits_alone[x] = !(v && *v < r.expr.threshold);
                }
                reserves_.push_back(std::move(res));
                return;
            }
            NodeReq nr{s, soft, std::vector<char>(num_nodes())};
            for (int x = 0; x < num_nodes(); ++x) nr.ok[x] = eval_node_requirement(r.expr, node_names_[x], infra);
            node_reqs_.push_back(std::move(nr));
        };
        for (const auto& r : app.hard_reqs) add(r, kHard);
        for (int i = 0; i < num_softs(); ++i) add(softs_[i].req, i);
    }

    CompiledInstance(const CompiledInstance&) = delete;
    CompiledInstance& operator=(const CompiledInstance&) = delete;

    int num_nodes() const { return static_cast<int>(node_names_.size()); }
    int num_services() const { return static_cast<int>(service_names_.size()); }
    int num_softs() const { return static_cast<int>(softs_.size()); }
    int num_resources() const { return static_cast<int>(resource_names_.size()); }

    const std::vector<NodeId>& node_names() const { return node_names_; }
    const std::vector<ServiceId>& service_names() const { return service_names_; }
    const std::vector<Soft>& softs() const { return softs_; }
    const std::vector<NodeReq>& node_reqs() const { return node_reqs_; }
    const std::vector<LinkReq>& link_reqs() const { return links_; }
    const std::vector<Reserve>& reserves() const { return reserves_; }
    const std::vector<std::int64_t>& capacity(int resource) const { return capacity_[resource]; }
    bool negative_capacity() const { return negative_capacity_; }

    /// Outcome for every partner node y, given this side of the link on x:
    /// row[y] = ok(x, y) when `source`, ok(y, x) otherwise.  Null when no
    /// matrix was built.
    const char* link_row(const LinkReq& l, int x, bool source) const {
        if (!l.ok) return nullptr;
        const auto& m = source ? *l.ok : *l.ok_t;
        return m.data() + static_cast<std::size_t>(x) * num_nodes();
    }

    bool link_ok(const LinkReq& l, int x, int y) const {
        if (l.ok) return (*l.ok)[static_cast<std::size_t>(x) * num_nodes() + y];
        std::optional<AttrValue> v;
        if (l.table) v = l.table->get(x, y);
        return !detail::compare_attr(l.expr, v ? &*v : nullptr);
    }

    PackedCost packed_cost(const std::vector<int>& lifted) const {
        PackedCost c = 0;
        for (int i : lifted) c += softs_[i].packed;
        return c;
    }

    CostVector unpack(const std::vector<int>& lifted) const {
        CostVector c;
        for (int i : lifted) c.add(softs_[i].params.level, softs_[i].params.weight);
        return c;
    }

    Solution to_solution(const std::vector<int>& assignment, const std::vector<int>& lifted) const {
        Solution sol;
        for (int s = 0; s < num_services(); ++s) sol.assignment[service_names_[s]] = node_names_[assignment[s]];
        for (int i : lifted) sol.lifted.insert(softs_[i].req);
        sol.cost = unpack(lifted);
        return sol;
    }

    const Infrastructure& infra() const { return *infra_; }
    const Application& app() const { return *app_; }

private:
    // Weight w at level index i packs to w * M_i with M_0 = 1 and
    // M_{i+1} = M_i * (total weight at level i + 1), so integer order on the
    // packed sums equals the lexicographic order on cost vectors.
    void pack_levels(const Application& app) {
        std::map<std::int64_t, unsigned __int128> totals;
        for (const auto& [r, p] : app.soft_reqs) totals[p.level] += static_cast<unsigned __int128>(p.weight);
        const PackedCost limit = PackedCost{1} << 126;
        std::map<std::int64_t, PackedCost> multiplier;
        PackedCost m = 1;
        for (const auto& [level, total] : totals) {
            multiplier[level] = m;
            if (total + 1 > limit / m) throw std::overflow_error("soft requirement weights too large to pack");
            m *= total + 1;
        }
        for (const auto& [r, p] : app.soft_reqs)
            softs_.push_back({r, p, static_cast<PackedCost>(p.weight) * multiplier[p.level]});
    }

    const Infrastructure* infra_;
    const Application* app_;
    std::vector<NodeId> node_names_;
    std::vector<ServiceId> service_names_;
    std::vector<Soft> softs_;
    std::vector<AttrKey> resource_names_;
    std::vector<std::vector<std::int64_t>> capacity_;
    bool negative_capacity_ = false;
    std::map<AttrKey, detail::LinkTable> link_tables_;
    std::map<RequirementExpr, std::pair<std::vector<char>, std::vector<char>>> link_matrices_;
    std::vector<NodeReq> node_reqs_;
    std::vector<LinkReq> links_;
    std::vector<Reserve> reserves_;
};

}  // namespace relaxplace

#endif  // RELAXPLACE_COMPILED_HPP
