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

// Benchmark sweep: every (instance, strategy) pair solved on a worker pool,
// one CSV row per run.
//
//   instance,n,k,strategy,status,cost,ttfs_s,tto_s,incumbents_json
//
// cost is the best cost as a JSON object keyed by level; ttfs_s is the time
// of the first incumbent; tto_s is the time optimality was proven (empty
// unless status is optimal).  Runs that fail before solving get status
// "error".

#ifndef RELAXPLACE_BENCH_HPP
#define RELAXPLACE_BENCH_HPP

#include <algorithm>
#include <atomic>
#include <filesystem>
#include <fstream>
#include <mutex>
#include <ostream>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "relaxplace/facts.hpp"
#include "relaxplace/report.hpp"
#include "relaxplace/solver.hpp"

namespace relaxplace {

inline constexpr const char* kBenchHeader = "instance,n,k,strategy,status,cost,ttfs_s,tto_s,incumbents_json";

struct BenchConfig {
    std::vector<Strategy> strategies{Strategy::BB, Strategy::CoreGuided};
    double timeout_s = 180.0;
    int jobs = 0;  // 0 picks the default
    std::uint64_t seed = 0;
    ParseOptions parse;
};

struct BenchRow {
    std::string instance;
    std::optional<std::size_t> n, k;
    std::string strategy;
    std::string status;
    std::optional<CostVector> cost;
    std::optional<double> ttfs_s, tto_s;
    std::vector<Incumbent> incumbents;
};

/// Hardware concurrency capped at 16.
inline int default_jobs() {
    unsigned hw = std::thread::hardware_concurrency();
    return static_cast<int>(std::clamp(hw, 1u, 16u));
}

/// `*.lp` files directly under `dir`, sorted by name.
inline std::vector<std::filesystem::path> list_instances(const std::filesystem::path& dir) {
    std::vector<std::filesystem::path> out;
    for (const auto& e : std::filesystem::directory_iterator(dir))
        if (e.is_regular_file() && e.path().extension() == ".lp") out.push_back(e.path());
    std::sort(out.begin(), out.end());
    return out;
}

namespace detail {

inline std::string csv_field(const std::string& s) {
    if (s.find_first_of(",\"\n\r") == std::string::npos) return s;
    std::string out = "\"";
    for (char c : s) {
        if (c == '"') out += '"';
        out += c;
    }
    return out + "\"";
}

inline std::string seconds(std::optional<double> t) {
    if (!t) return "";
    std::ostringstream out;
    out.precision(6);
    out << std::fixed << *t;
    return out.str();
}

}  // namespace detail

inline std::string csv_row(const BenchRow& r) {
    using detail::csv_field;
    Json trace = Json::array();
    for (const auto& inc : r.incumbents) trace.push_back({inc.elapsed_s, cost_to_json(inc.cost)});
    std::string out = csv_field(r.instance) + ",";
    out += (r.n ? std::to_string(*r.n) : "") + ",";
    out += (r.k ? std::to_string(*r.k) : "") + ",";
    out += csv_field(r.strategy) + "," + csv_field(r.status) + ",";
    out += (r.cost ? csv_field(cost_to_json(*r.cost).dump()) : "") + ",";
    out += detail::seconds(r.ttfs_s) + "," + detail::seconds(r.tto_s) + ",";
    out += csv_field(trace.dump());
    return out;
}

/// Solves one instance file with one strategy; never throws.
inline BenchRow bench_run(const std::filesystem::path& file, Strategy strategy, const BenchConfig& config) {
    BenchRow row;
    row.instance = file.filename().string();
    row.strategy = strategy_name(strategy);
    row.status = "error";
    try {
        std::ifstream in(file);
        if (!in) return row;
        Instance inst = parse_facts(in, config.parse);
        row.n = inst.infra.nodes.size();
        row.k = inst.app.services.size();
        SolveConfig sc;
        sc.strategy = strategy;
        sc.timeout_s = config.timeout_s;
        sc.seed = config.seed;
        SolveOutcome out = solve(inst.infra, inst.app, sc);
        row.status = status_name(out.status);
        if (out.best) row.cost = out.best->cost;
        if (!out.incumbents.empty()) row.ttfs_s = out.incumbents.front().elapsed_s;
        if (out.status == SolveStatus::Optimal) row.tto_s = out.elapsed_s;
        row.incumbents = std::move(out.incumbents);
    } catch (const std::exception&) {
        row.status = "error";
    }
    return row;
}

/// Runs every (file, strategy) pair with at most `config.jobs` concurrent
/// solves, writing the header and then each row as it completes.  Returns
/// the number of rows written.
inline std::size_t run_bench(const std::vector<std::filesystem::path>& files, const BenchConfig& config,
                             std::ostream& csv) {
    SolveConfig probe;
    probe.timeout_s = config.timeout_s;
    probe.validate();

    struct Job {
        std::size_t file;
        Strategy strategy;
    };
    std::vector<Job> jobs;
    for (std::size_t f = 0; f < files.size(); ++f)
        for (Strategy s : config.strategies) jobs.push_back({f, s});

    csv << kBenchHeader << "\n" << std::flush;
    std::mutex writer;
    std::atomic<std::size_t> next{0};
    std::size_t written = 0;
    auto work = [&] {
        for (std::size_t i; (i = next++) < jobs.size();) {
            BenchRow row = bench_run(files[jobs[i].file], jobs[i].strategy, config);
            std::string line = csv_row(row);
            std::lock_guard lock(writer);
            csv << line << "\n" << std::flush;
            ++written;
        }
    };
    int workers = config.jobs > 0 ? config.jobs : default_jobs();
    workers = static_cast<int>(std::min<std::size_t>(workers, std::max<std::size_t>(jobs.size(), 1)));
    std::vector<std::thread> pool;
    for (int w = 0; w < workers; ++w) pool.emplace_back(work);
    for (auto& t : pool) t.join();
    return written;
}

}  // namespace relaxplace

#endif  // RELAXPLACE_BENCH_HPP
