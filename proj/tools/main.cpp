// gridroute: generate routing problems, route them with the sequential A*
// or the DQN router, and compare the two over problem batches.

#include "gridroute/astar.hpp"
#include "gridroute/dqn.hpp"
#include "gridroute/evaluate.hpp"
#include "gridroute/generate.hpp"
#include "gridroute/problem.hpp"
#include "gridroute/rng.hpp"
#include "gridroute/version.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <mutex>
#include <optional>
#include <sstream>
#include <thread>

namespace fs = std::filesystem;
using nlohmann::json;
using namespace gridroute;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitUsage = 1;
constexpr int kExitInfeasible = 2;

void write_file(const fs::path& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out)
        throw std::runtime_error("cannot open '" + path.string() + "' for writing");
    out << content;
    if (!out)
        throw std::runtime_error("failed writing '" + path.string() + "'");
}

std::string read_file(const fs::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw std::runtime_error("cannot open '" + path.string() + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

std::string timestamp_utc() {
    const auto now = std::chrono::system_clock::now();
    const std::time_t t = std::chrono::system_clock::to_time_t(now);
    char buf[32];
    std::tm tm{};
    gmtime_r(&t, &tm);
    std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
    return buf;
}

// Every run leaves a manifest next to its outputs; generated_at is the only
// field that varies between identical runs.
void write_manifest(const fs::path& path, const std::string& command, const json& options) {
    json m;
    m["tool"] = "gridroute";
    m["version"] = kVersion;
    m["command"] = command;
    m["options"] = options;
    m["generated_at"] = timestamp_utc();
    write_file(path, m.dump(2) + "\n");
}

std::pair<int, int> parse_grid_flag(const std::string& text) {
    int w = 0, h = 0, l = 2;
    const int matched = std::sscanf(text.c_str(), "%dx%dx%d", &w, &h, &l);
    if (matched < 2 || w < 1 || h < 1 || l != 2)
        throw CLI::ValidationError("--grid", "expected WxH (two layers), e.g. 8x8");
    return {w, h};
}

struct DqnFlags {
    int episodes = 5000;
    int t_max = 50;
    double gamma = 0.9;
    double epsilon = 0.05;
    double lr = 1e-4;
    int batch = 32;
    int buffer = 50000;
    int burn_in_size = 10000;
    std::string burn_in = "astar";
    std::string optimizer = "adam";
    bool eps_decay = false;

    TrainConfig to_config(std::uint64_t seed) const {
        TrainConfig cfg;
        cfg.learning_rate = lr;
        cfg.batch_size = batch;
        cfg.buffer_size = buffer;
        cfg.burn_in_size = burn_in_size;
        cfg.gamma = gamma;
        cfg.epsilon = epsilon;
        cfg.max_episodes = episodes;
        cfg.t_max = t_max;
        cfg.burn_in = burn_in == "random" ? BurnInMode::Random : BurnInMode::AStar;
        cfg.optimizer = optimizer == "sgd" ? OptimizerKind::Sgd : OptimizerKind::Adam;
        cfg.epsilon_decay = eps_decay;
        cfg.seed = seed;
        return cfg;
    }

    json to_json(std::uint64_t seed) const {
        return json{{"episodes", episodes}, {"t_max", t_max},     {"gamma", gamma},
                    {"epsilon", epsilon},   {"lr", lr},           {"batch", batch},
                    {"buffer", buffer},     {"burn_in_size", burn_in_size},
                    {"burn_in", burn_in},   {"optimizer", optimizer},
                    {"eps_decay", eps_decay}, {"seed", seed}};
    }
};

void add_dqn_flags(CLI::App* cmd, DqnFlags& f) {
    cmd->add_option("--episodes", f.episodes, "Training episodes")->capture_default_str();
    cmd->add_option("--t-max", f.t_max, "Per-task step limit")->capture_default_str();
    cmd->add_option("--gamma", f.gamma, "Discount factor")->capture_default_str();
    cmd->add_option("--epsilon", f.epsilon, "Exploration rate")->capture_default_str();
    cmd->add_option("--lr", f.lr, "Learning rate")->capture_default_str();
    cmd->add_option("--batch", f.batch, "Minibatch size")->capture_default_str();
    cmd->add_option("--buffer", f.buffer, "Replay buffer capacity")->capture_default_str();
    cmd->add_option("--burn-in-size", f.burn_in_size, "Transitions to burn in")
        ->capture_default_str();
    cmd->add_option("--burn-in", f.burn_in, "Burn-in source")
        ->check(CLI::IsMember({"astar", "random"}))
        ->capture_default_str();
    cmd->add_option("--optimizer", f.optimizer, "Gradient step rule")
        ->check(CLI::IsMember({"adam", "sgd"}))
        ->capture_default_str();
    cmd->add_flag("--eps-decay", f.eps_decay, "Linearly decay epsilon after episode 2000");
}

std::string problem_file_name(int index, int count) {
    int width = 3;
    for (int v = count - 1; v >= 1000; v /= 10)
        ++width;
    char buf[32];
    std::snprintf(buf, sizeof buf, "problem_%0*d.txt", width, index);
    return buf;
}

// ---------------------------------------------------------------- generate

struct GenerateArgs {
    std::string grid = "8x8";
    int nets = 0;
    int max_pins = 2;
    int cap = 3;
    int reduce = 0;
    int reduced_value = 1;
    int count = 1;
    std::uint64_t seed = 0;
    std::string out;
    bool heatmaps = false;
};

int run_generate(const GenerateArgs& args) {
    const auto [w, h] = parse_grid_flag(args.grid);
    GenSpec spec;
    spec.problem_count = args.count;
    spec.width = w;
    spec.height = h;
    spec.net_count = args.nets;
    spec.max_pins_per_net = args.max_pins;
    spec.normal_capacity = args.cap;
    spec.reduced_edge_count = args.reduce;
    spec.reduced_value = args.reduced_value;
    spec.seed = args.seed;

    const auto problems = generate(spec);
    const fs::path dir(args.out);
    fs::create_directories(dir);

    for (size_t i = 0; i < problems.size(); ++i) {
        const std::string name = problem_file_name(static_cast<int>(i), args.count);
        write_file(dir / name, write_problem(problems[i]));
        if (args.heatmaps) {
            const auto sol = route_problem(problems[i]).solution;
            const auto util = edge_utilization(problems[i], sol);
            const std::string stem = name.substr(0, name.size() - 4);
            write_file(dir / (stem + ".heat.csv"), heatmap_csv(util));
            write_file(dir / (stem + ".hist.csv"), histogram_csv(util));
        }
    }

    write_manifest(dir / "manifest.json", "generate",
                   json{{"grid", args.grid},
                        {"nets", args.nets},
                        {"max_pins", args.max_pins},
                        {"cap", args.cap},
                        {"reduce", args.reduce},
                        {"reduced_value", args.reduced_value},
                        {"count", args.count},
                        {"seed", args.seed},
                        {"heatmaps", args.heatmaps}});
    std::cout << "generated " << problems.size() << " problem(s) in " << dir.string()
              << "\n";
    return kExitOk;
}

// ------------------------------------------------------------------- route

struct RouteArgs {
    std::string solver;
    std::string problem;
    std::string out;
    std::optional<std::uint64_t> seed;
    DqnFlags dqn;
};

int run_route(const RouteArgs& args) {
    const fs::path problem_path(args.problem);
    const Problem p = parse_problem(read_file(problem_path));
    const std::string prefix =
        args.out.empty() ? (problem_path.parent_path() / problem_path.stem()).string()
                         : args.out;

    if (args.solver == "astar") {
        const auto routed = route_problem(p);
        write_file(prefix + ".sol.txt", write_solution(routed.solution));
        write_file(prefix + ".report.txt", evaluation_report(p, routed.solution));
        write_manifest(prefix + ".manifest.json", "route",
                       json{{"solver", "astar"}, {"problem", args.problem}});
        std::cout << "astar WL " << wirelength(routed.solution) << " OF "
                  << overflow(p, routed.solution) << "\n";
        return kExitOk;
    }

    // dqn
    if (!args.seed)
        throw CLI::RequiredError("--seed (required for --solver dqn)");
    const TrainConfig cfg = args.dqn.to_config(*args.seed);
    const TrainResult result = train(p, cfg);

    write_file(prefix + ".rewards.csv", reward_curve_csv(result));
    save_weights(result.network, prefix + ".weights.bin");
    write_manifest(prefix + ".manifest.json", "route",
                   json{{"solver", "dqn"},
                        {"problem", args.problem},
                        {"dqn", args.dqn.to_json(*args.seed)}});

    if (!result.best_solution) {
        write_file(prefix + ".report.txt",
                   "no feasible solution: no episode solved every two-pin task in " +
                       std::to_string(cfg.max_episodes) + " episodes\n");
        std::cerr << "dqn found no feasible solution\n";
        return kExitInfeasible;
    }

    write_file(prefix + ".sol.txt", write_solution(*result.best_solution));
    write_file(prefix + ".report.txt", evaluation_report(p, *result.best_solution));
    std::cout << "dqn WL " << result.best_wl << " OF " << result.best_of
              << " (best episode " << result.best_episode << ")\n";
    return kExitOk;
}

// ----------------------------------------------------------------- compare

struct CompareArgs {
    std::string dir;
    std::string out;
    std::uint64_t seed = 0;
    int jobs = 1;
    DqnFlags dqn;
};

struct CompareOutcome {
    std::string name;
    bool ok = false;
    std::string note;
    std::string type;
    long long wl_a = 0, of_a = 0;
    long long wl_b = 0, of_b = 0;
    bool b_wins = false;
};

CompareOutcome compare_one(const fs::path& file, const TrainConfig& cfg) {
    CompareOutcome o;
    o.name = file.filename().string();
    try {
        const Problem p = parse_problem(read_file(file));
        const auto routed = route_problem(p);
        o.type = to_string(classify(p, routed.solution));
        o.wl_a = wirelength(routed.solution);
        o.of_a = overflow(p, routed.solution);

        const TrainResult r = train(p, cfg);
        if (!r.best_solution) {
            o.note = "dqn found no feasible solution";
            return o;
        }
        o.wl_b = r.best_wl;
        o.of_b = r.best_of;
        o.b_wins = o.of_b < o.of_a || (o.of_b == o.of_a && o.wl_b < o.wl_a);
        o.ok = true;
    } catch (const std::exception& e) {
        o.note = e.what();
    }
    return o;
}

int run_compare(const CompareArgs& args) {
    std::vector<fs::path> files;
    if (!fs::is_directory(args.dir))
        throw std::runtime_error("'" + args.dir + "' is not a directory");
    for (const auto& entry : fs::directory_iterator(args.dir))
        if (entry.is_regular_file() && entry.path().extension() == ".txt")
            files.push_back(entry.path());
    std::sort(files.begin(), files.end());
    if (files.empty())
        throw std::runtime_error("no .txt problem files in '" + args.dir + "'");

    std::vector<CompareOutcome> outcomes(files.size());
    std::atomic<size_t> next{0};
    std::mutex log_mutex;
    const int jobs = std::max(1, args.jobs);

    const auto worker = [&] {
        for (;;) {
            const size_t i = next.fetch_add(1);
            if (i >= files.size())
                return;
            // Per-problem seed derived from the base seed and the problem's
            // position, so results do not depend on worker scheduling.
            const TrainConfig cfg =
                args.dqn.to_config(mix_seed(args.seed, static_cast<std::uint64_t>(i)));
            outcomes[i] = compare_one(files[i], cfg);
            const std::lock_guard<std::mutex> lock(log_mutex);
            const auto& o = outcomes[i];
            if (o.ok)
                std::cerr << o.name << ": type " << o.type << " astar WL " << o.wl_a
                          << " OF " << o.of_a << " | dqn WL " << o.wl_b << " OF " << o.of_b
                          << (o.b_wins ? " (dqn wins)" : "") << "\n";
            else
                std::cerr << o.name << ": " << o.note << "\n";
        }
    };
    if (jobs == 1) {
        worker();
    } else {
        std::vector<std::thread> pool;
        for (int j = 0; j < jobs; ++j)
            pool.emplace_back(worker);
        for (auto& t : pool)
            t.join();
    }

    std::string csv = "problem,type,wl_astar,of_astar,wl_dqn,of_dqn,dqn_win,note\n";
    struct Agg {
        int wins = 0, valid = 0;
    };
    Agg all, type1, type2;
    for (const auto& o : outcomes) {
        if (o.ok) {
            csv += o.name + "," + o.type + "," + std::to_string(o.wl_a) + "," +
                   std::to_string(o.of_a) + "," + std::to_string(o.wl_b) + "," +
                   std::to_string(o.of_b) + "," + (o.b_wins ? "1" : "0") + ",\n";
            ++all.valid;
            all.wins += o.b_wins;
            Agg& bucket = o.type == "I" ? type1 : type2;
            ++bucket.valid;
            bucket.wins += o.b_wins;
        } else {
            csv += o.name + "," + o.type + ",,,,,," + o.note + "\n";
        }
    }
    const auto summary = [&](const char* label, const Agg& a) {
        char rate[32] = "";
        if (a.valid > 0)
            std::snprintf(rate, sizeof rate, "%.3f",
                          static_cast<double>(a.wins) / a.valid);
        csv += std::string("summary(") + label + "),,,,,," + rate + ",wins " +
               std::to_string(a.wins) + " of " + std::to_string(a.valid) + "\n";
    };
    summary("all", all);
    if (type1.valid > 0)
        summary("type_I", type1);
    if (type2.valid > 0)
        summary("type_II", type2);

    write_file(args.out, csv);
    write_manifest(args.out + ".manifest.json", "compare",
                   json{{"dir", args.dir},
                        {"out", args.out},
                        {"jobs", args.jobs},
                        {"problems", files.size()},
                        {"dqn", args.dqn.to_json(args.seed)}});

    const bool any_failed = all.valid != static_cast<int>(outcomes.size());
    std::cout << "compared " << all.valid << " of " << outcomes.size()
              << " problem(s), dqn wins " << all.wins << "\n";
    return any_failed ? kExitInfeasible : kExitOk;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Two-layer global-routing workbench"};
    app.set_version_flag("--version", kVersion);
    app.require_subcommand(1);

    GenerateArgs gen;
    auto* cmd_gen = app.add_subcommand("generate", "Generate a batch of routing problems");
    cmd_gen->add_option("--grid", gen.grid, "Grid size WxH")->capture_default_str();
    cmd_gen->add_option("--nets", gen.nets, "Nets per problem")->required();
    cmd_gen->add_option("--max-pins", gen.max_pins, "Maximum pins per net")
        ->capture_default_str();
    cmd_gen->add_option("--cap", gen.cap, "Normal edge capacity")->capture_default_str();
    cmd_gen->add_option("--reduce", gen.reduce, "Number of congested edges to reduce")
        ->capture_default_str();
    cmd_gen->add_option("--reduced-value", gen.reduced_value,
                        "Capacity assigned to reduced edges")
        ->capture_default_str();
    cmd_gen->add_option("--count", gen.count, "Number of problems")->capture_default_str();
    cmd_gen->add_option("--seed", gen.seed, "Generator seed")->required();
    cmd_gen->add_option("--out", gen.out, "Output directory")->required();
    cmd_gen->add_flag("--heatmaps", gen.heatmaps,
                      "Also write *.heat.csv and *.hist.csv per problem");

    RouteArgs route;
    auto* cmd_route = app.add_subcommand("route", "Route one problem file");
    cmd_route->add_option("--solver", route.solver, "Routing engine")
        ->check(CLI::IsMember({"astar", "dqn"}))
        ->required();
    cmd_route->add_option("--problem", route.problem, "Problem file")->required();
    cmd_route->add_option("--out", route.out, "Output path prefix");
    std::uint64_t route_seed = 0;
    auto* route_seed_opt =
        cmd_route->add_option("--seed", route_seed, "Training seed (dqn)");
    add_dqn_flags(cmd_route, route.dqn);

    CompareArgs cmp;
    auto* cmd_cmp =
        app.add_subcommand("compare", "Route a problem directory with both engines");
    cmd_cmp->add_option("--dir", cmp.dir, "Directory of problem files")->required();
    cmd_cmp->add_option("--out", cmp.out, "Output CSV path")->required();
    cmd_cmp->add_option("--seed", cmp.seed, "Base training seed")->required();
    cmd_cmp->add_option("--jobs", cmp.jobs, "Parallel workers")->capture_default_str();
    add_dqn_flags(cmd_cmp, cmp.dqn);

    try {
        app.parse(argc, argv);
        if (cmd_gen->parsed())
            return run_generate(gen);
        if (cmd_route->parsed()) {
            if (route_seed_opt->count() > 0)
                route.seed = route_seed;
            return run_route(route);
        }
        return run_compare(cmp);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForVersion& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kExitUsage;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitUsage;
    }
}
