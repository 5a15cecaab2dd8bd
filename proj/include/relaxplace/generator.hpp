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

// Random instance families: Barabasi-Albert infrastructures with templated
// nodes and metric-closed latencies, Erdos-Renyi applications with templated
// requirements.
//
// All randomness comes from std::mt19937_64, whose output sequence is fixed
// by the standard, through the sampling helpers below (the std::
// distributions are implementation-defined and are not used).  Files are
// therefore byte-identical across platforms for a given seed.

#ifndef RELAXPLACE_GENERATOR_HPP
#define RELAXPLACE_GENERATOR_HPP

#include <algorithm>
#include <cstdint>
#include <fstream>
#include <functional>
#include <limits>
#include <map>
#include <queue>
#include <random>
#include <stdexcept>
#include <string>
#include <tuple>
#include <vector>

#include "json.hpp"

#include "relaxplace/model.hpp"
#include "relaxplace/search.hpp"
#include "relaxplace/semantics.hpp"

namespace relaxplace {

struct NodeTemplate {
    std::string name;
    std::map<AttrKey, AttrValue> attributes;

    friend bool operator==(const NodeTemplate&, const NodeTemplate&) = default;
};

struct RequirementTemplate {
    ReqKind kind = ReqKind::Eq;
    AttrValue threshold;
    bool hard = false;

    friend bool operator==(const RequirementTemplate&, const RequirementTemplate&) = default;
};

/// One entry per attribute; the `latency` entry, if any, becomes the link
/// requirement on the service's outgoing dependencies.
struct ServiceTemplate {
    std::string name;
    std::map<AttrKey, RequirementTemplate> requirements;

    friend bool operator==(const ServiceTemplate&, const ServiceTemplate&) = default;
};

struct Templates {
    std::vector<NodeTemplate> nodes;
    std::vector<ServiceTemplate> services;

    friend bool operator==(const Templates&, const Templates&) = default;
};

/// Probability num/den.
struct Rational {
    std::uint64_t num = 0;
    std::uint64_t den = 1;

    friend bool operator==(const Rational&, const Rational&) = default;
};

namespace detail {

inline const char* const kDefaultTemplates = R"json({
  "node_templates": [
    {"name": "cloud", "attributes": {
      "access_control": true, "anti_tampering": true, "availability": 9999, "bandwidth_in": 10000,
      "bandwidth_out": 10000, "carbon_intensity": 350, "cost": 50, "cpu": 64, "encryption": true,
      "gpu": true, "pue": 19, "ram": 256, "storage": 4000}},
    {"name": "fog", "attributes": {
      "access_control": true, "anti_tampering": true, "availability": 9950, "bandwidth_in": 1000,
      "bandwidth_out": 1000, "carbon_intensity": 200, "cost": 20, "cpu": 16, "encryption": true,
      "gpu": false, "pue": 15, "ram": 32, "storage": 500}},
    {"name": "edge", "attributes": {
      "access_control": false, "anti_tampering": true, "availability": 9000, "bandwidth_in": 100,
      "bandwidth_out": 100, "carbon_intensity": 100, "cost": 5, "cpu": 4, "encryption": false,
      "gpu": false, "pue": 12, "ram": 8, "storage": 64}}
  ],
  "service_templates": [
    {"name": "heavy", "requirements": {
      "access_control": {"kind": "eq", "threshold": true, "hard": true},
      "anti_tampering": {"kind": "eq", "threshold": true, "hard": true},
      "availability": {"kind": "gte", "threshold": 9990, "hard": false},
      "bandwidth_in": {"kind": "reserve", "threshold": 100, "hard": true},
      "bandwidth_out": {"kind": "reserve", "threshold": 100, "hard": true},
      "carbon_intensity": {"kind": "lte", "threshold": 250, "hard": false},
      "cost": {"kind": "lte", "threshold": 30, "hard": false},
      "cpu": {"kind": "reserve", "threshold": 8, "hard": true},
      "encryption": {"kind": "eq", "threshold": true, "hard": true},
      "gpu": {"kind": "eq", "threshold": true, "hard": true},
      "latency": {"kind": "lte", "threshold": 60, "hard": false},
      "pue": {"kind": "lte", "threshold": 15, "hard": false},
      "ram": {"kind": "reserve", "threshold": 32, "hard": true},
      "storage": {"kind": "reserve", "threshold": 200, "hard": true}}},
    {"name": "medium", "requirements": {
      "access_control": {"kind": "eq", "threshold": true, "hard": true},
      "anti_tampering": {"kind": "eq", "threshold": true, "hard": true},
      "availability": {"kind": "gte", "threshold": 9950, "hard": false},
      "bandwidth_in": {"kind": "reserve", "threshold": 50, "hard": true},
      "bandwidth_out": {"kind": "reserve", "threshold": 50, "hard": true},
      "carbon_intensity": {"kind": "lte", "threshold": 150, "hard": false},
      "cost": {"kind": "lte", "threshold": 15, "hard": false},
      "cpu": {"kind": "reserve", "threshold": 4, "hard": true},
      "encryption": {"kind": "eq", "threshold": true, "hard": true},
      "gpu": {"kind": "eq", "threshold": false, "hard": true},
      "latency": {"kind": "lte", "threshold": 80, "hard": false},
      "pue": {"kind": "lte", "threshold": 14, "hard": false},
      "ram": {"kind": "reserve", "threshold": 8, "hard": true},
      "storage": {"kind": "reserve", "threshold": 50, "hard": true}}},
    {"name": "light", "requirements": {
      "access_control": {"kind": "eq", "threshold": false, "hard": true},
      "anti_tampering": {"kind": "eq", "threshold": true, "hard": true},
      "availability": {"kind": "gte", "threshold": 9500, "hard": false},
      "bandwidth_in": {"kind": "reserve", "threshold": 10, "hard": true},
      "bandwidth_out": {"kind": "reserve", "threshold": 10, "hard": true},
      "carbon_intensity": {"kind": "lte", "threshold": 120, "hard": false},
      "cost": {"kind": "lte", "threshold": 10, "hard": false},
      "cpu": {"kind": "reserve", "threshold": 1, "hard": true},
      "encryption": {"kind": "eq", "threshold": false, "hard": true},
      "gpu": {"kind": "eq", "threshold": false, "hard": true},
      "latency": {"kind": "lte", "threshold": 40, "hard": false},
      "pue": {"kind": "lte", "threshold": 13, "hard": false},
      "ram": {"kind": "reserve", "threshold": 2, "hard": true},
      "storage": {"kind": "reserve", "threshold": 8, "hard": true}}}
  ]
})json";

inline AttrValue json_value(const nlohmann::json& j, const std::string& where) {
    if (j.is_boolean()) return AttrValue(j.get<bool>());
    if (j.is_number_integer()) return AttrValue(j.get<std::int64_t>());
    throw std::invalid_argument(where + ": value must be an integer or a boolean");
}

}  // namespace detail

/// Reads the template schema:
///   {"node_templates": [{"name": str, "attributes": {key: int|bool}}],
///    "service_templates": [{"name": str,
///        "requirements": {key: {"kind": str, "threshold": int|bool, "hard": bool}}}]}
inline Templates parse_templates(const std::string& text) {
    nlohmann::json doc;
    try {
        doc = nlohmann::json::parse(text);
    } catch (const nlohmann::json::parse_error& e) {
        throw std::invalid_argument(std::string("template file: ") + e.what());
    }
    Templates out;
    try {
        for (const auto& n : doc.at("node_templates")) {
            NodeTemplate t;
            t.name = n.at("name").get<std::string>();
            for (const auto& [key, value] : n.at("attributes").items())
                t.attributes[key] = detail::json_value(value, "node template " + t.name + ", " + key);
            out.nodes.push_back(std::move(t));
        }
        for (const auto& s : doc.at("service_templates")) {
            ServiceTemplate t;
            t.name = s.at("name").get<std::string>();
            for (const auto& [key, spec] : s.at("requirements").items()) {
                std::string where = "service template " + t.name + ", " + key;
                auto kind = kind_from_name(spec.at("kind").get<std::string>());
                if (!kind) throw std::invalid_argument(where + ": unknown kind");
                RequirementTemplate r{*kind, detail::json_value(spec.at("threshold"), where),
                                      spec.at("hard").get<bool>()};
                RequirementExpr{r.kind, key, r.threshold}.validate();
                t.requirements[key] = r;
            }
            out.services.push_back(std::move(t));
        }
    } catch (const nlohmann::json::exception& e) {
        throw std::invalid_argument(std::string("template file: ") + e.what());
    }
    return out;
}

inline Templates load_templates(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open template file " + path);
    std::string text{std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
    return parse_templates(text);
}

/// The shipped defaults (identical to data/templates.json).
inline const Templates& default_templates() {
    static const Templates t = parse_templates(detail::kDefaultTemplates);
    return t;
}

struct GeneratorConfig {
    int infra_size = 50;
    int app_size = 5;
    std::uint64_t seed = 0;
    int ba_attachment = 2;
    Rational er_probability{3, 10};
    std::int64_t latency_min = 10;
    std::int64_t latency_max = 50;
    Templates templates = default_templates();

    void validate() const;
};

inline void GeneratorConfig::validate() const {
    if (infra_size < 1) throw std::invalid_argument("infrastructure size must be at least 1");
    if (app_size < 1) throw std::invalid_argument("application size must be at least 1");
    if (ba_attachment < 1) throw std::invalid_argument("attachment count must be at least 1");
    if (er_probability.den == 0 || er_probability.num > er_probability.den)
        throw std::invalid_argument("edge probability must be a fraction in [0,1]");
    if (latency_min < 1 || latency_max < latency_min)
        throw std::invalid_argument("latency range must be a non-empty interval of positive integers");
    if (templates.nodes.empty() || templates.services.empty())
        throw std::invalid_argument("template lists must be non-empty");
}

/// Unbiased integer sampling on top of a 64-bit engine.
class Sampler {
public:
    explicit Sampler(std::uint64_t seed) : engine_(seed) {}

    /// Uniform in [0, bound).
    std::uint64_t below(std::uint64_t bound) {
        if (bound == 0) throw std::invalid_argument("empty range");
        const std::uint64_t limit = std::numeric_limits<std::uint64_t>::max() -
                                    std::numeric_limits<std::uint64_t>::max() % bound;
        std::uint64_t x;
        do x = engine_();
        while (x >= limit);
        return x % bound;
    }

    std::int64_t between(std::int64_t lo, std::int64_t hi) {
        return lo + static_cast<std::int64_t>(below(static_cast<std::uint64_t>(hi - lo) + 1));
    }

    bool chance(const Rational& p) { return below(p.den) < p.num; }

private:
    std::mt19937_64 engine_;
};

namespace detail {

inline std::string node_name(int i) { return "n" + std::to_string(i); }
inline std::string service_name(int i) { return "s" + std::to_string(i); }

inline std::uint64_t mix(std::uint64_t a, std::uint64_t b) { return splitmix64(a ^ splitmix64(b)); }

}  // namespace detail

/// Undirected Barabasi-Albert edge list on n vertices: a complete graph on
/// the first min(n, m+1) vertices, then each new vertex attaches to m
/// distinct earlier vertices chosen with probability proportional to degree.
inline std::vector<std::pair<int, int>> barabasi_albert(int n, int m, Sampler& rng) {
    std::vector<std::pair<int, int>> edges;
    std::vector<int> pool;  // vertex repeated once per incident edge end
    const int core = std::min(n, m + 1);
    for (int a = 0; a < core; ++a)
        for (int b = a + 1; b < core; ++b) {
            edges.emplace_back(a, b);
            pool.push_back(a);
            pool.push_back(b);
        }
    for (int v = core; v < n; ++v) {
        std::vector<int> targets;
        while (static_cast<int>(targets.size()) < m) {
            int u = pool[rng.below(pool.size())];
            if (std::find(targets.begin(), targets.end(), u) == targets.end()) targets.push_back(u);
        }
        for (int u : targets) {
            edges.emplace_back(u, v);
            pool.push_back(u);
            pool.push_back(v);
        }
    }
    return edges;
}

/// Adds, for every ordered pair of distinct nodes without a latency entry,
/// a latency equal to the shortest-path distance over the existing latency
/// entries.  Existing entries are never changed.  Throws std::runtime_error
/// naming the first pair with no connecting path.
inline Infrastructure metric_closure(Infrastructure infra) {
    std::vector<NodeId> nodes(infra.nodes.begin(), infra.nodes.end());
    std::map<NodeId, int> index;
    for (int i = 0; i < static_cast<int>(nodes.size()); ++i) index[nodes[i]] = i;
    const int n = static_cast<int>(nodes.size());

    std::vector<std::vector<std::pair<int, std::int64_t>>> out(n);
    for (const auto& [key, value] : infra.link_attrs) {
        const auto& [a, b, k] = key;
        if (k != kLatencyKey || a == b) continue;
        if (!value.is_int() || value.as_int() < 0)
            throw std::invalid_argument("latency on " + quote_id(a) + "->" + quote_id(b) + " must be a non-negative integer");
        out[index.at(a)].emplace_back(index.at(b), value.as_int());
    }

    constexpr std::int64_t kUnreached = std::numeric_limits<std::int64_t>::max();
    std::vector<std::int64_t> dist(n);
    for (int s = 0; s < n; ++s) {
        std::fill(dist.begin(), dist.end(), kUnreached);
        using Item = std::pair<std::int64_t, int>;
        std::priority_queue<Item, std::vector<Item>, std::greater<>> queue;
        dist[s] = 0;
        queue.push({0, s});
        while (!queue.empty()) {
            auto [d, u] = queue.top();
            queue.pop();
            if (d != dist[u]) continue;
            for (auto [v, w] : out[u])
                if (d + w < dist[v]) {
                    dist[v] = d + w;
                    queue.push({dist[v], v});
                }
        }
        for (int t = 0; t < n; ++t) {
            if (t == s) continue;
            std::tuple<NodeId, NodeId, AttrKey> key{nodes[s], nodes[t], kLatencyKey};
            if (infra.link_attrs.count(key)) continue;
            if (dist[t] == kUnreached)
                throw std::runtime_error("infrastructure is disconnected: no path from " + quote_id(nodes[s]) + " to " +
                                         quote_id(nodes[t]));
            infra.link_attrs.emplace(std::move(key), AttrValue(dist[t]));
        }
    }
    return infra;
}

/// BA topology, uniformly sampled node templates, symmetric random
/// latencies on topology edges (declared as links in both directions), then
/// metric closure.
inline Infrastructure generate_infrastructure(const GeneratorConfig& config) {
    config.validate();
    Sampler rng(detail::mix(config.seed, 1));
    Infrastructure infra;
    for (int i = 0; i < config.infra_size; ++i) infra.nodes.insert(detail::node_name(i));
    for (int i = 0; i < config.infra_size; ++i) {
        const auto& t = config.templates.nodes[rng.below(config.templates.nodes.size())];
        for (const auto& [k, v] : t.attributes) infra.node_attrs[{detail::node_name(i), k}] = v;
    }
    for (auto [a, b] : barabasi_albert(config.infra_size, config.ba_attachment, rng)) {
        AttrValue latency(rng.between(config.latency_min, config.latency_max));
        NodeId x = detail::node_name(a), y = detail::node_name(b);
        infra.links.emplace(x, y);
        infra.links.emplace(y, x);
        infra.link_attrs[{x, y, kLatencyKey}] = latency;
        infra.link_attrs[{y, x, kLatencyKey}] = latency;
    }
    return metric_closure(std::move(infra));
}

/// ER dependencies (each unordered pair independently, directed from the
/// lower to the higher index), one requirement per template attribute for
/// every service, and one latency requirement per dependency taken from the
/// source service's template.  Relaxable requirements get weight 1, level 1.
inline Application generate_application(const GeneratorConfig& config) {
    config.validate();
    Sampler rng(detail::mix(config.seed, 2));
    Application app;
    std::vector<const ServiceTemplate*> profile;
    for (int i = 0; i < config.app_size; ++i) {
        app.services.insert(detail::service_name(i));
        profile.push_back(&config.templates.services[rng.below(config.templates.services.size())]);
    }
    for (int a = 0; a < config.app_size; ++a)
        for (int b = a + 1; b < config.app_size; ++b)
            if (rng.chance(config.er_probability)) app.dependencies.emplace(detail::service_name(a), detail::service_name(b));

    auto add = [&](ReqTarget target, const AttrKey& key, const RequirementTemplate& t) {
        Requirement r{std::move(target), RequirementExpr{t.kind, key, t.threshold}};
        if (t.hard) app.hard_reqs.insert(std::move(r));
        else app.soft_reqs.emplace(std::move(r), SoftParams{1, 1});
    };
    for (int i = 0; i < config.app_size; ++i)
        for (const auto& [key, t] : profile[i]->requirements)
            if (key != kLatencyKey) add(detail::service_name(i), key, t);
    for (const auto& [a, b] : app.dependencies) {
        int i = std::stoi(a.substr(1));
        auto it = profile[i]->requirements.find(kLatencyKey);
        if (it != profile[i]->requirements.end()) add(ServicePair{a, b}, kLatencyKey, it->second);
    }
    return app;
}

inline Instance generate_instance(const GeneratorConfig& config) {
    return Instance{generate_infrastructure(config), generate_application(config)};
}

struct SuiteGrid {
    std::vector<int> infra_sizes{50, 100, 150, 200, 250, 300, 350, 400, 450, 500};
    std::vector<int> app_sizes{5, 10, 15, 20, 25, 30};
    int count = 100;
};

struct SuiteEntry {
    std::string name;  // i{n}_a{k}_{idx}.lp
    int infra_size = 0;
    int app_size = 0;
    int index = 0;
    std::uint64_t seed = 0;
};

/// Seed of one suite member; depends only on the master seed and its coordinates.
inline std::uint64_t instance_seed(std::uint64_t master, int n, int k, int index) {
    return detail::mix(detail::mix(detail::mix(master, static_cast<std::uint64_t>(n)), static_cast<std::uint64_t>(k)),
                       static_cast<std::uint64_t>(index));
}

inline std::vector<SuiteEntry> suite_entries(const SuiteGrid& grid, std::uint64_t master) {
    if (grid.count < 0) throw std::invalid_argument("instance count must be non-negative");
    std::vector<SuiteEntry> out;
    for (int n : grid.infra_sizes)
        for (int k : grid.app_sizes)
            for (int i = 0; i < grid.count; ++i)
                out.push_back({"i" + std::to_string(n) + "_a" + std::to_string(k) + "_" + std::to_string(i) + ".lp", n,
                               k, i, instance_seed(master, n, k, i)});
    return out;
}

/// `base` with the sizes and seed of one suite member.
inline GeneratorConfig entry_config(const GeneratorConfig& base, const SuiteEntry& e) {
    GeneratorConfig c = base;
    c.infra_size = e.infra_size;
    c.app_size = e.app_size;
    c.seed = e.seed;
    return c;
}

/// Generates the suite one instance at a time and hands each to `sink`.
inline void generate_suite(const SuiteGrid& grid, const GeneratorConfig& base, std::uint64_t master,
                           const std::function<void(const SuiteEntry&, const Instance&)>& sink) {
    for (const auto& e : suite_entries(grid, master)) sink(e, generate_instance(entry_config(base, e)));
}

}  // namespace relaxplace

#endif  // RELAXPLACE_GENERATOR_HPP
