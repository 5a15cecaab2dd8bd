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

// relaxplace: solve, validate, generate and benchmark placement instances.
//
// Exit codes of `solve`: 0 optimal, 1 bad input, 2 feasible (timeout with a
// solution), 3 infeasible, 4 unknown (timeout without a solution).
// `validate`: 0 valid, 1 malformed input, 2 invalid solution.

#include <openssl/evp.h>

#include <atomic>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <mutex>
#include <sstream>
#include <thread>

#include "CLI11.hpp"
#include "relaxplace/asp.hpp"
#include "relaxplace/bench.hpp"
#include "relaxplace/facts.hpp"
#include "relaxplace/generator.hpp"
#include "relaxplace/report.hpp"
#include "relaxplace/solver.hpp"

namespace fs = std::filesystem;
using namespace relaxplace;

namespace {

constexpr int kExitBadInput = 1;
constexpr int kExitInvalid = 2;

int exit_code(SolveStatus s) {
    switch (s) {
    case SolveStatus::Optimal: return 0;
    case SolveStatus::Feasible: return 2;
    case SolveStatus::Infeasible: return 3;
    case SolveStatus::Unknown: return 4;
    }
    return 4;
}

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot read " + path);
    std::ostringstream s;
    s << in.rdbuf();
    return s.str();
}

Instance load_instance(const std::string& path, bool strict) {
    ParseOptions opt;
    opt.strict = strict;
    return parse_facts(read_file(path), opt);
}

std::string sha256_hex(const std::string& data) {
    unsigned char digest[EVP_MAX_MD_SIZE];
    unsigned int len = 0;
    if (!EVP_Digest(data.data(), data.size(), digest, &len, EVP_sha256(), nullptr))
        throw std::runtime_error("sha256 failed");
    std::ostringstream out;
    for (unsigned int i = 0; i < len; ++i) out << std::hex << std::setw(2) << std::setfill('0') << int(digest[i]);
    return out.str();
}

std::string fmt_seconds(double s) {
    std::ostringstream out;
    out << std::fixed << std::setprecision(3) << s << "s";
    return out.str();
}

// ---- solve ----------------------------------------------------------------

struct SolveArgs {
    std::string instance;
    std::string strategy = "bb";
    double timeout = 180;
    std::string format = "human";
    std::uint64_t seed = 0;
    bool emit_intermediate = false;
    bool strict = false;
};

void print_human(const SolveOutcome& out) {
    std::cout << "status: " << status_name(out.status) << "\n";
    if (out.status == SolveStatus::Infeasible) std::cout << "hard requirements unsatisfiable\n";
    if (out.best) {
        for (const auto& [s, x] : out.best->assignment) std::cout << "deploy(" << quote_id(s) << "," << quote_id(x) << ")\n";
        for (const auto& r : out.best->lifted) std::cout << "lift(" << to_string(r) << ")\n";
        std::cout << "cost: " << out.best->cost.to_string() << "\n";
    }
    std::cout << "incumbents: " << out.incumbents.size() << "\n";
    std::cout << "elapsed: " << fmt_seconds(out.elapsed_s) << "\n";
}

int cmd_solve(const SolveArgs& a) {
    Instance inst;
    try {
        inst = load_instance(a.instance, a.strict);
    } catch (const std::exception& e) {
        std::cerr << a.instance << ": " << e.what() << "\n";
        return kExitBadInput;
    }
    SolveConfig config;
    config.strategy = *strategy_from_name(a.strategy);
    config.timeout_s = a.timeout;
    config.seed = a.seed;
    config.emit_intermediate = a.emit_intermediate;
    const bool json = a.format == "json";

    auto stream = [&](const Incumbent& inc, const Solution& s) {
        if (json) {
            SolveOutcome one;
            one.status = SolveStatus::Feasible;
            one.best = s;
            Json j = solution_json(one);
            Json line{{"incumbent", {{"elapsed_s", inc.elapsed_s},
                                     {"assignment", j["assignment"]},
                                     {"lifted", j["lifted"]},
                                     {"cost", j["cost"]}}}};
            std::cout << line.dump() << std::endl;
        } else {
            std::cout << "incumbent " << fmt_seconds(inc.elapsed_s) << " cost " << inc.cost.to_string() << std::endl;
        }
    };
    SolveOutcome out = solve(inst.infra, inst.app, config, stream);
    if (json) {
        // a single line, so streamed incumbents and the result form JSON Lines
        std::cout << (a.emit_intermediate ? solution_json(out).dump() : solution_json(out).dump(2)) << "\n";
        if (out.status == SolveStatus::Infeasible) std::cerr << "hard requirements unsatisfiable\n";
    } else {
        print_human(out);
    }
    return exit_code(out.status);
}

// ---- validate -------------------------------------------------------------

// The solution document; for JSON Lines output the last line.
SolutionReport read_report(const std::string& text) {
    try {
        return parse_solution_json(text);
    } catch (const ReportError&) {
        auto end = text.find_last_not_of(" \t\r\n");
        if (end == std::string::npos) throw;
        auto begin = text.rfind('\n', end);
        begin = begin == std::string::npos ? 0 : begin + 1;
        return parse_solution_json(text.substr(begin, end + 1 - begin));
    }
}

int cmd_validate(const std::string& instance_path, const std::string& solution_path, bool strict) {
    Instance inst;
    SolutionReport report;
    try {
        inst = load_instance(instance_path, strict);
    } catch (const std::exception& e) {
        std::cerr << instance_path << ": " << e.what() << "\n";
        return kExitBadInput;
    }
    try {
        report = read_report(read_file(solution_path));
    } catch (const std::exception& e) {
        std::cerr << solution_path << ": " << e.what() << "\n";
        return kExitBadInput;
    }
    if (!report.solution) {
        std::cout << "invalid: no placement to check (status " << status_name(report.status) << ")\n";
        return kExitInvalid;
    }
    const Solution& s = *report.solution;
    std::vector<Violation> violations;
    try {
        violations = check_placement(inst.infra, inst.app, s.assignment, s.lifted);
    } catch (const std::invalid_argument& e) {
        std::cout << "invalid: " << e.what() << "\n";
        return kExitInvalid;
    }
    bool ok = violations.empty();
    for (const auto& v : violations) std::cout << "violation: " << v.describe() << "\n";
    CostVector actual = lift_cost(inst.app, s.lifted);
    if (actual != s.cost) {
        std::cout << "cost mismatch: claimed " << s.cost.to_string() << ", recomputed " << actual.to_string() << "\n";
        ok = false;
    }
    if (!ok) return kExitInvalid;
    std::cout << "valid: cost " << actual.to_string() << "\n";
    return 0;
}

// ---- generate -------------------------------------------------------------

struct GenerateArgs {
    std::string out_dir;
    std::uint64_t seed = 0;
    std::vector<int> infra_sizes{50, 100, 150, 200, 250, 300, 350, 400, 450, 500};
    std::vector<int> app_sizes{5, 10, 15, 20, 25, 30};
    int count = 100;
    int ba_attachment = 2;
    std::string er_probability = "3/10";
    std::int64_t latency_min = 10;
    std::int64_t latency_max = 50;
    std::string templates;
    int jobs = 0;
};

Rational parse_rational(const std::string& s) {
    Rational r;
    auto slash = s.find('/');
    try {
        if (slash == std::string::npos) {
            // decimal with at most 9 fractional digits
            auto dot = s.find('.');
            std::string digits = dot == std::string::npos ? s : s.substr(0, dot) + s.substr(dot + 1);
            std::size_t frac = dot == std::string::npos ? 0 : s.size() - dot - 1;
            if (frac > 9 || digits.empty() || digits.find_first_not_of("0123456789") != std::string::npos)
                throw std::invalid_argument(s);
            r.num = std::stoull(digits);
            r.den = 1;
            for (std::size_t i = 0; i < frac; ++i) r.den *= 10;
        } else {
            r.num = std::stoull(s.substr(0, slash));
            r.den = std::stoull(s.substr(slash + 1));
        }
    } catch (const std::exception&) {
        throw std::invalid_argument("cannot read probability \"" + s + "\"");
    }
    return r;
}

int cmd_generate(const GenerateArgs& a) {
    GeneratorConfig base;
    SuiteGrid grid{a.infra_sizes, a.app_sizes, a.count};
    std::string templates_digest;
    try {
        base.ba_attachment = a.ba_attachment;
        base.er_probability = parse_rational(a.er_probability);
        base.latency_min = a.latency_min;
        base.latency_max = a.latency_max;
        std::string text = a.templates.empty() ? std::string(detail::kDefaultTemplates) : read_file(a.templates);
        base.templates = parse_templates(text);
        templates_digest = sha256_hex(text);
        base.validate();
        for (int n : grid.infra_sizes)
            if (n < 1) throw std::invalid_argument("infrastructure size must be at least 1");
        for (int k : grid.app_sizes)
            if (k < 1) throw std::invalid_argument("application size must be at least 1");
    } catch (const std::exception& e) {
        std::cerr << "generate: " << e.what() << "\n";
        return kExitBadInput;
    }
    std::error_code ec;
    fs::create_directories(a.out_dir, ec);
    if (ec) {
        std::cerr << a.out_dir << ": " << ec.message() << "\n";
        return kExitBadInput;
    }

    auto entries = suite_entries(grid, a.seed);
    std::vector<std::string> digests(entries.size());
    std::vector<std::string> errors(entries.size());
    std::atomic<std::size_t> next{0};
    std::mutex progress;
    auto work = [&] {
        for (std::size_t i; (i = next++) < entries.size();) {
            const auto& e = entries[i];
            try {
                std::string text = serialize_facts(generate_instance(entry_config(base, e)));
                fs::path path = fs::path(a.out_dir) / e.name;
                std::ofstream out(path, std::ios::binary);
                out << text;
                out.close();
                if (!out) throw std::runtime_error("write failed");
                digests[i] = sha256_hex(text);
            } catch (const std::exception& ex) {
                errors[i] = ex.what();
                std::lock_guard lock(progress);
                std::cerr << e.name << ": " << ex.what() << "\n";
            }
        }
    };
    int workers = a.jobs > 0 ? a.jobs : default_jobs();
    std::vector<std::thread> pool;
    for (int w = 0; w < workers; ++w) pool.emplace_back(work);
    for (auto& t : pool) t.join();

    Json manifest;
    manifest["seed"] = a.seed;
    manifest["config"] = {{"infra_sizes", grid.infra_sizes},
                          {"app_sizes", grid.app_sizes},
                          {"count", grid.count},
                          {"ba_attachment", base.ba_attachment},
                          {"er_probability", std::to_string(base.er_probability.num) + "/" +
                                                 std::to_string(base.er_probability.den)},
                          {"latency_range", {base.latency_min, base.latency_max}},
                          {"templates", a.templates.empty() ? "builtin" : a.templates},
                          {"templates_sha256", templates_digest}};
    manifest["files"] = Json::array();
    std::size_t failed = 0;
    for (std::size_t i = 0; i < entries.size(); ++i) {
        const auto& e = entries[i];
        Json f{{"name", e.name}, {"n", e.infra_size}, {"k", e.app_size}, {"index", e.index}, {"seed", e.seed}};
        if (errors[i].empty()) f["sha256"] = digests[i];
        else {
            f["error"] = errors[i];
            ++failed;
        }
        manifest["files"].push_back(f);
    }
    std::ofstream(fs::path(a.out_dir) / "manifest.json") << manifest.dump(2) << "\n";
    std::cout << "wrote " << entries.size() - failed << " instances to " << a.out_dir << "\n";
    return failed ? kExitBadInput : 0;
}

// ---- bench ----------------------------------------------------------------

struct BenchArgs {
    std::string dir;
    std::vector<std::string> strategies{"bb", "core"};
    double timeout = 180;
    int jobs = 0;
    std::string csv;
    std::uint64_t seed = 0;
    bool strict = false;
};

int cmd_bench(const BenchArgs& a) {
    BenchConfig config;
    config.strategies.clear();
    for (const auto& s : a.strategies) config.strategies.push_back(*strategy_from_name(s));
    config.timeout_s = a.timeout;
    config.jobs = a.jobs;
    config.seed = a.seed;
    config.parse.strict = a.strict;
    std::vector<fs::path> files;
    try {
        files = list_instances(a.dir);
    } catch (const std::exception& e) {
        std::cerr << a.dir << ": " << e.what() << "\n";
        return kExitBadInput;
    }
    std::ofstream file;
    if (!a.csv.empty() && a.csv != "-") {
        file.open(a.csv);
        if (!file) {
            std::cerr << "cannot write " << a.csv << "\n";
            return kExitBadInput;
        }
    }
    std::size_t rows = run_bench(files, config, file.is_open() ? static_cast<std::ostream&>(file) : std::cout);
    std::cerr << rows << " runs over " << files.size() << " instances\n";
    return 0;
}

// ---- crosscheck -----------------------------------------------------------

int cmd_crosscheck(const std::string& path, std::string solver, double timeout, bool strict) {
    Instance inst;
    try {
        inst = load_instance(path, strict);
    } catch (const std::exception& e) {
        std::cerr << path << ": " << e.what() << "\n";
        return kExitBadInput;
    }
    if (solver.empty()) solver = asp_solver_from_env().value_or("");
    if (solver.empty() || !asp_solver_available(solver)) {
        std::cout << "skipped: no ASP solver configured (set " << kAspSolverEnv << ")\n";
        return 0;
    }
    SolveConfig config;
    config.timeout_s = timeout;
    SolveOutcome ours = solve(inst.infra, inst.app, config);
    if (ours.status != SolveStatus::Optimal && ours.status != SolveStatus::Infeasible) {
        std::cout << "inconclusive: solver status " << status_name(ours.status) << "\n";
        return exit_code(ours.status);
    }
    AspResult theirs;
    try {
        theirs = run_asp_solver(solver, inst, timeout);
    } catch (const std::exception& e) {
        std::cerr << "external solver: " << e.what() << "\n";
        return kExitBadInput;
    }
    std::string a = ours.best ? ours.best->cost.to_string() : "infeasible";
    std::string b = theirs.satisfiable ? theirs.cost.to_string() : "infeasible";
    std::cout << "relaxplace " << a << "\nexternal " << b << "\n";
    if (a != b) {
        std::cout << "MISMATCH\n";
        return 5;
    }
    std::cout << "agree\n";
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Constraint-relaxed cloud-edge placement: solver, generator and benchmark harness"};
    app.require_subcommand(1);
    auto strategy_check = CLI::IsMember({"bb", "core", "usc"});

    SolveArgs solve_args;
    auto* solve_cmd = app.add_subcommand("solve", "Solve one instance file");
    solve_cmd->add_option("instance", solve_args.instance, "Fact file")->required();
    solve_cmd->add_option("--strategy", solve_args.strategy, "bb or core")->check(strategy_check)->capture_default_str();
    solve_cmd->add_option("--timeout", solve_args.timeout, "Wall-clock limit in seconds")
        ->check(CLI::PositiveNumber)
        ->capture_default_str();
    solve_cmd->add_option("--format", solve_args.format, "human or json")
        ->check(CLI::IsMember({"human", "json"}))
        ->capture_default_str();
    solve_cmd->add_option("--seed", solve_args.seed, "Tie-breaking seed")->capture_default_str();
    solve_cmd->add_flag("--emit-intermediate", solve_args.emit_intermediate, "Print every improving solution");
    solve_cmd->add_flag("--strict", solve_args.strict, "Soft requirements without violation_cost weigh 0");

    std::string val_instance, val_solution;
    bool val_strict = false;
    auto* validate_cmd = app.add_subcommand("validate", "Check a solution produced by solve");
    validate_cmd->add_option("instance", val_instance, "Fact file")->required();
    validate_cmd->add_option("solution", val_solution, "Solution JSON")->required();
    validate_cmd->add_flag("--strict", val_strict, "Parse the instance in strict mode");

    GenerateArgs gen_args;
    auto* generate_cmd = app.add_subcommand("generate", "Generate an instance suite");
    generate_cmd->add_option("--out", gen_args.out_dir, "Output directory")->required();
    generate_cmd->add_option("--seed", gen_args.seed, "Master seed")->capture_default_str();
    generate_cmd->add_option("--infra-sizes", gen_args.infra_sizes, "Infrastructure sizes")->delimiter(',');
    generate_cmd->add_option("--app-sizes", gen_args.app_sizes, "Application sizes")->delimiter(',');
    generate_cmd->add_option("--count", gen_args.count, "Instances per size pair")
        ->check(CLI::NonNegativeNumber)
        ->capture_default_str();
    generate_cmd->add_option("--ba-attachment", gen_args.ba_attachment, "Edges per new infrastructure node")
        ->capture_default_str();
    generate_cmd->add_option("--er-probability", gen_args.er_probability, "Dependency probability, p/q or decimal")
        ->capture_default_str();
    generate_cmd->add_option("--latency-min", gen_args.latency_min)->capture_default_str();
    generate_cmd->add_option("--latency-max", gen_args.latency_max)->capture_default_str();
    generate_cmd->add_option("--templates", gen_args.templates, "Template JSON file (default: built-in)");
    generate_cmd->add_option("--jobs", gen_args.jobs, "Parallel writers (default: cores, at most 16)");

    BenchArgs bench_args;
    auto* bench_cmd = app.add_subcommand("bench", "Solve every instance in a directory and write CSV");
    bench_cmd->add_option("dir", bench_args.dir, "Directory of .lp files")->required();
    bench_cmd->add_option("--strategies", bench_args.strategies, "Comma-separated strategies")
        ->delimiter(',')
        ->check(strategy_check);
    bench_cmd->add_option("--timeout", bench_args.timeout, "Per-run limit in seconds")
        ->check(CLI::PositiveNumber)
        ->capture_default_str();
    bench_cmd->add_option("--jobs", bench_args.jobs, "Concurrent runs (default: cores, at most 16)");
    bench_cmd->add_option("--csv", bench_args.csv, "Output file (default: stdout)");
    bench_cmd->add_option("--seed", bench_args.seed, "Tie-breaking seed")->capture_default_str();
    bench_cmd->add_flag("--strict", bench_args.strict, "Parse instances in strict mode");

    std::string cc_instance, cc_solver;
    double cc_timeout = 60;
    bool cc_strict = false;
    auto* cross_cmd = app.add_subcommand("crosscheck", "Compare the optimum with an external ASP solver");
    cross_cmd->add_option("instance", cc_instance, "Fact file")->required();
    cross_cmd->add_option("--asp-solver", cc_solver, std::string("Solver command (default: $") + kAspSolverEnv + ")");
    cross_cmd->add_option("--timeout", cc_timeout)->check(CLI::PositiveNumber)->capture_default_str();
    cross_cmd->add_flag("--strict", cc_strict);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int rc = app.exit(e);
        return rc == 0 ? 0 : kExitBadInput;
    }
    try {
        if (*solve_cmd) return cmd_solve(solve_args);
        if (*validate_cmd) return cmd_validate(val_instance, val_solution, val_strict);
        if (*generate_cmd) return cmd_generate(gen_args);
        if (*bench_cmd) return cmd_bench(bench_args);
        if (*cross_cmd) return cmd_crosscheck(cc_instance, cc_solver, cc_timeout, cc_strict);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitBadInput;
    }
    return 0;
}
