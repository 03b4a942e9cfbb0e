// Command-line front end: graph generation, solving, exact baseline,
// benchmarking and separation debugging. Human summaries go to stdout,
// machine reports only to files (written atomically).

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "lpquts/bench.hpp"
#include "lpquts/engine.hpp"
#include "lpquts/exact.hpp"

namespace {

using nlohmann::json;

void atomic_write(const std::string& path, const std::string& content) {
    const std::string tmp = path + ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary);
        if (!out) throw std::runtime_error("cannot write file: " + tmp);
        out << content;
        if (!out) throw std::runtime_error("write failed: " + tmp);
    }
    std::filesystem::rename(tmp, path);
}

std::vector<double> read_value_file(const std::string& path, int expected) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open file: " + path);
    std::vector<double> values;
    std::string raw;
    int lineno = 0;
    while (std::getline(in, raw)) {
        ++lineno;
        auto hash = raw.find('#');
        if (hash != std::string::npos) raw.erase(hash);
        std::istringstream ss(raw);
        std::string tok;
        while (ss >> tok) {
            try {
                std::size_t used = 0;
                double v = std::stod(tok, &used);
                if (used != tok.size()) throw std::invalid_argument(tok);
                values.push_back(v);
            } catch (const std::exception&) {
                throw lpquts::detail::parse_error(path, lineno, "not a number: " + tok);
            }
        }
    }
    if (static_cast<int>(values.size()) != expected)
        throw lpquts::detail::parse_error(
            path, lineno,
            "expected " + std::to_string(expected) + " values, got " +
                std::to_string(values.size()));
    return values;
}

template <class T>
std::vector<T> parse_list(const std::string& s, const char* what) {
    std::vector<T> out;
    std::stringstream ss(s);
    std::string tok;
    while (std::getline(ss, tok, ',')) {
        std::istringstream ts(tok);
        T v;
        if (!(ts >> v)) throw std::runtime_error(std::string("bad ") + what + ": " + tok);
        out.push_back(v);
    }
    if (out.empty()) throw std::runtime_error(std::string("empty list for ") + what);
    return out;
}

bool parse_bool(const std::string& s) {
    if (s == "1" || s == "true" || s == "yes") return true;
    if (s == "0" || s == "false" || s == "no") return false;
    throw std::runtime_error("bad boolean: " + s);
}

/// Flat key=value engine config. Flags take precedence: a key is skipped
/// when its flag was given on the command line. Unknown keys are an error.
void apply_engine_config(const std::string& path, const CLI::App& solve,
                         lpquts::EngineConfig& cfg, std::string& sampler_name) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open config file: " + path);
    std::string raw;
    int lineno = 0;
    while (std::getline(in, raw)) {
        ++lineno;
        auto hash = raw.find('#');
        if (hash != std::string::npos) raw.erase(hash);
        if (raw.find_first_not_of(" \t\r") == std::string::npos) continue;
        auto eq = raw.find('=');
        if (eq == std::string::npos)
            throw lpquts::detail::parse_error(path, lineno, "expected key = value");
        auto trim = [](std::string s) {
            auto a = s.find_first_not_of(" \t\r");
            auto b = s.find_last_not_of(" \t\r");
            return a == std::string::npos ? std::string() : s.substr(a, b - a + 1);
        };
        const std::string key = trim(raw.substr(0, eq));
        const std::string val = trim(raw.substr(eq + 1));
        auto overridden = [&](const std::string& flag) {
            return solve.count(flag) > 0;
        };
        try {
            if (key == "sampler") { if (!overridden("--sampler")) sampler_name = val; }
            else if (key == "shots") { if (!overridden("--shots")) cfg.shots = std::stoi(val); }
            else if (key == "max_iterations") { if (!overridden("--max-iter")) cfg.max_iterations = std::stoi(val); }
            else if (key == "patience") { if (!overridden("--patience")) cfg.patience = std::stoi(val); }
            else if (key == "alpha_steps") { if (!overridden("--alpha-steps")) cfg.alpha_steps = std::stoi(val); }
            else if (key == "max_subgraph") { if (!overridden("--max-subgraph")) cfg.max_subgraph = std::stoi(val); }
            else if (key == "seed") { if (!overridden("--seed")) cfg.seed = std::stoull(val); }
            else if (key == "tol_lp") { if (!overridden("--tol-lp")) cfg.tol_lp = std::stod(val); }
            else if (key == "tol_dual") { if (!overridden("--tol-dual")) cfg.tol_dual = std::stod(val); }
            else if (key == "force_alpha_zero") { if (!overridden("--alpha-zero")) cfg.force_alpha_zero = parse_bool(val); }
            else if (key == "sa_sweeps") cfg.sa_sweeps = std::stoi(val);
            else throw std::runtime_error("unknown key: " + key);
        } catch (const std::invalid_argument&) {
            throw lpquts::detail::parse_error(path, lineno, "bad value for " + key + ": " + val);
        } catch (const std::runtime_error& e) {
            throw lpquts::detail::parse_error(path, lineno, e.what());
        }
    }
}

lpquts::BenchSpec read_bench_spec(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open spec file: " + path);
    lpquts::BenchSpec spec;
    std::string raw;
    int lineno = 0;
    while (std::getline(in, raw)) {
        ++lineno;
        auto hash = raw.find('#');
        if (hash != std::string::npos) raw.erase(hash);
        auto eq = raw.find('=');
        if (raw.find_first_not_of(" \t\r") == std::string::npos) continue;
        if (eq == std::string::npos)
            throw lpquts::detail::parse_error(path, lineno, "expected key = value");
        auto trim = [](std::string s) {
            auto a = s.find_first_not_of(" \t\r");
            auto b = s.find_last_not_of(" \t\r");
            return a == std::string::npos ? std::string() : s.substr(a, b - a + 1);
        };
        const std::string key = trim(raw.substr(0, eq));
        const std::string val = trim(raw.substr(eq + 1));
        try {
            if (key == "n") spec.sizes = parse_list<int>(val, "n");
            else if (key == "p") spec.densities = parse_list<double>(val, "p");
            else if (key == "seeds") spec.seeds = parse_list<std::uint64_t>(val, "seeds");
            else if (key == "weighted") spec.weighted = parse_bool(val);
            else if (key == "timing") spec.record_timing = parse_bool(val);
            else if (key == "methods") {
                for (const auto& m : parse_list<std::string>(val, "methods"))
                    spec.methods.push_back(lpquts::bench_method_from_string(m));
            } else if (key == "sampler")
                spec.engine.sampler = lpquts::sampler_kind_from_string(val);
            else if (key == "shots") spec.engine.shots = std::stoi(val);
            else if (key == "max_iterations") spec.engine.max_iterations = std::stoi(val);
            else if (key == "patience") spec.engine.patience = std::stoi(val);
            else if (key == "alpha_steps") spec.engine.alpha_steps = std::stoi(val);
            else if (key == "max_subgraph") spec.engine.max_subgraph = std::stoi(val);
            else if (key == "sa_sweeps") spec.engine.sa_sweeps = std::stoi(val);
            else if (key == "force_alpha_zero") spec.engine.force_alpha_zero = parse_bool(val);
            else
                throw std::runtime_error("unknown key: " + key);
        } catch (const std::exception& e) {
            throw lpquts::detail::parse_error(path, lineno, e.what());
        }
    }
    return spec;
}

json report_to_json(const lpquts::SolveReport& rep, const lpquts::EngineConfig& cfg) {
    json j;
    j["sampler"] = lpquts::to_string(cfg.sampler);
    j["shots"] = cfg.shots;
    j["max_iterations"] = cfg.max_iterations;
    j["patience"] = cfg.patience;
    j["alpha_steps"] = cfg.alpha_steps;
    j["seed"] = cfg.seed;
    j["converged"] = rep.converged;
    j["reason"] = lpquts::to_string(rep.reason);
    j["upper_bound"] = rep.upper_bound;
    j["lower_bound"] = rep.lower_bound;
    j["best_set"] = json{{"members", rep.best_set.members},
                         {"weight", rep.best_set.weight}};
    j["total_shots"] = rep.total_shots;
    j["cluster_samplers"] = rep.cluster_samplers_used;
    j["iterations"] = json::array();
    for (const auto& it : rep.iterations)
        j["iterations"].push_back(json{{"index", it.index},
                                       {"upper", it.upper_bound},
                                       {"lower", it.lower_bound},
                                       {"cuts_added", it.cuts_added},
                                       {"reduced_edge_ratio", it.reduced_edge_ratio},
                                       {"wall_ms", it.wall_ms}});
    j["cuts"] = json::array();
    for (const auto& c : rep.cut_pool)
        j["cuts"].push_back(json{{"vertices", c.vertices}, {"eps_rlp", c.eps_rlp}});
    return j;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"LP-QuTS: cutting-plane MWIS solver with pluggable samplers"};
    app.require_subcommand(1);

    // gen
    auto* gen = app.add_subcommand("gen", "Generate a random graph file");
    std::string gen_kind, gen_out;
    int gen_n = 30;
    double gen_p = 0.2;
    bool gen_weighted = false;
    std::uint64_t gen_seed = 0;
    gen->add_option("kind", gen_kind, "Generator: er or sp")->required();
    gen->add_option("--n", gen_n, "Number of vertices");
    gen->add_option("--p", gen_p, "Edge probability (er only)");
    gen->add_flag("--weighted", gen_weighted, "Uniform(0,1) weights instead of unit");
    gen->add_option("--seed", gen_seed, "RNG seed");
    gen->add_option("--out", gen_out, "Output graph file")->required();

    // shared engine flags, used by solve
    auto* solve = app.add_subcommand("solve", "Run the LP-QuTS engine on a graph file");
    std::string solve_graph, solve_out;
    lpquts::EngineConfig ecfg;
    std::string sampler_name = "sa";
    solve->add_option("--graph", solve_graph, "Input graph file")->required();
    solve->add_option("--out", solve_out, "JSON report file");
    solve->add_option("--sampler", sampler_name, "Sampler: greedy, sa or rydberg")
        ->check(CLI::IsMember({"greedy", "sa", "rydberg"}));
    solve->add_option("--shots", ecfg.shots, "Shots per iteration");
    solve->add_option("--max-iter", ecfg.max_iterations, "Iteration cap");
    solve->add_option("--patience", ecfg.patience, "Iterations without improvement before stopping");
    solve->add_option("--alpha-steps", ecfg.alpha_steps, "Alpha schedule resolution");
    solve->add_option("--max-subgraph", ecfg.max_subgraph, "Cluster size cap (0: min(N,40))");
    solve->add_option("--seed", ecfg.seed, "RNG seed");
    solve->add_option("--tol-lp", ecfg.tol_lp, "LP tolerance");
    solve->add_option("--tol-dual", ecfg.tol_dual, "Dual tolerance");
    solve->add_flag("--alpha-zero", ecfg.force_alpha_zero, "Classical separation only");
    std::string solve_config;
    solve->add_option("--config", solve_config,
                      "Flat key=value config file (keys mirror the engine config "
                      "field names); flags override");

    // exact
    auto* exact = app.add_subcommand("exact", "Exact MWIS by branch and bound");
    std::string exact_graph, exact_out;
    int exact_guard = lpquts::ExactOptions{}.max_vertices;
    exact->add_option("--graph", exact_graph, "Input graph file")->required();
    exact->add_option("--out", exact_out, "JSON result file");
    exact->add_option("--max-vertices", exact_guard, "Size guard");

    // bench
    auto* bench_cmd = app.add_subcommand("bench", "Benchmark grid driven by a spec file");
    std::string bench_spec_path, bench_out;
    bool bench_timing = false;
    bench_cmd->add_option("--spec", bench_spec_path, "Bench spec file (key = value)")->required();
    bench_cmd->add_option("--out", bench_out, "Output CSV file")->required();
    bench_cmd->add_flag("--timing", bench_timing, "Fill the wall_ms column (breaks byte-identity)");

    // sep-debug
    auto* sep = app.add_subcommand("sep-debug", "Run odd-cycle separation on given x");
    std::string sep_graph, sep_x, sep_occ;
    double sep_alpha = 0.0;
    sep->add_option("--graph", sep_graph, "Input graph file")->required();
    sep->add_option("--x", sep_x, "File with one x value per vertex")->required();
    sep->add_option("--occ", sep_occ, "File with one occupation value per vertex");
    sep->add_option("--alpha", sep_alpha, "Occupation weight in the edge costs");

    CLI11_PARSE(app, argc, argv);

    try {
        if (gen->parsed()) {
            lpquts::WeightedGraph g =
                gen_kind == "er"
                    ? lpquts::gen_erdos_renyi(gen_n, gen_p, gen_weighted, gen_seed)
                : gen_kind == "sp"
                    ? lpquts::gen_series_parallel(gen_n, gen_seed, gen_weighted)
                    : throw std::runtime_error("unknown generator kind: " + gen_kind +
                                               " (valid: er, sp)");
            std::ostringstream body;
            lpquts::write_graph(g, body);
            atomic_write(gen_out, body.str());
            std::cout << "n=" << g.num_vertices() << " m=" << g.num_edges()
                      << " connected=" << (lpquts::is_connected(g) ? "yes" : "no")
                      << " -> " << gen_out << "\n";
        } else if (solve->parsed()) {
            if (!solve_config.empty())
                apply_engine_config(solve_config, *solve, ecfg, sampler_name);
            ecfg.sampler = lpquts::sampler_kind_from_string(sampler_name);
            lpquts::WeightedGraph g = lpquts::read_graph(solve_graph);
            lpquts::SolveReport rep = lpquts::lp_quts(g, ecfg);
            if (!solve_out.empty())
                atomic_write(solve_out, report_to_json(rep, ecfg).dump(2) + "\n");
            std::cout << "iterations=" << rep.iterations.size()
                      << " upper=" << rep.upper_bound
                      << " lower=" << rep.lower_bound
                      << " best_weight=" << rep.best_set.weight
                      << " reason=" << lpquts::to_string(rep.reason) << "\n";
            return rep.converged ? 0 : 2;
        } else if (exact->parsed()) {
            lpquts::WeightedGraph g = lpquts::read_graph(exact_graph);
            lpquts::ExactOptions opt;
            opt.max_vertices = exact_guard;
            lpquts::VertexSet best = lpquts::exact_mwis(g, opt);
            if (!exact_out.empty()) {
                json j{{"weight", best.weight}, {"members", best.members}};
                atomic_write(exact_out, j.dump(2) + "\n");
            }
            std::cout << "value=" << best.weight << " set=[";
            for (std::size_t i = 0; i < best.members.size(); ++i)
                std::cout << (i ? " " : "") << best.members[i];
            std::cout << "]\n";
        } else if (bench_cmd->parsed()) {
            lpquts::BenchSpec spec = read_bench_spec(bench_spec_path);
            if (bench_timing) spec.record_timing = true;
            auto rows = lpquts::bench(spec);
            atomic_write(bench_out, lpquts::bench_csv(rows));
            std::cout << "rows=" << rows.size() << " -> " << bench_out << "\n";
        } else if (sep->parsed()) {
            lpquts::WeightedGraph g = lpquts::read_graph(sep_graph);
            std::vector<double> x = read_value_file(sep_x, g.num_vertices());
            std::vector<double> occ;
            if (!sep_occ.empty()) occ = read_value_file(sep_occ, g.num_vertices());
            lpquts::SeparationInput in{g, x, occ, sep_alpha};
            auto cycles = lpquts::find_violated_cycles(in);
            if (cycles.empty()) {
                std::cout << "no violated odd cycles\n";
            } else {
                for (const auto& c : cycles) {
                    std::cout << "cycle";
                    for (int v : c.vertices) std::cout << ' ' << v;
                    std::cout << " | eps_rlp=" << c.eps_rlp
                              << " eps_s=" << c.eps_s
                              << " eps_alpha=" << c.eps_alpha(sep_alpha) << "\n";
                }
            }
        }
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
