#ifndef LPQUTS_BENCH_HPP
#define LPQUTS_BENCH_HPP

#include <atomic>
#include <cstdio>
#include <cstdlib>
#include <mutex>
#include <optional>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "lpquts/engine.hpp"
#include "lpquts/exact.hpp"
#include "lpquts/graph.hpp"
#include "lpquts/rydberg.hpp"
#include "lpquts/samplers.hpp"

namespace lpquts {

enum class BenchMethod { lp_quts, greedy, sa, rydberg };

inline const char* to_string(BenchMethod m) {
    switch (m) {
        case BenchMethod::lp_quts: return "lp-quts";
        case BenchMethod::greedy: return "greedy";
        case BenchMethod::sa: return "sa";
        case BenchMethod::rydberg: return "rydberg";
    }
    return "?";
}

inline BenchMethod bench_method_from_string(const std::string& s) {
    if (s == "lp-quts") return BenchMethod::lp_quts;
    if (s == "greedy") return BenchMethod::greedy;
    if (s == "sa") return BenchMethod::sa;
    if (s == "rydberg") return BenchMethod::rydberg;
    throw std::invalid_argument("unknown method: " + s +
                                " (valid: lp-quts, greedy, sa, rydberg)");
}

/// Instance grid plus engine knobs. Baselines get the same total shot
/// budget (max_iterations x shots) as one full engine run.
struct BenchSpec {
    std::vector<int> sizes;
    std::vector<double> densities;
    bool weighted = false;
    std::vector<std::uint64_t> seeds;
    std::vector<BenchMethod> methods;
    EngineConfig engine;
    bool record_timing = false; // wall_ms column stays empty when off

    void validate() const {
        if (sizes.empty() || densities.empty() || seeds.empty())
            throw std::invalid_argument("bench spec needs sizes, densities and seeds");
        for (int n : sizes)
            if (n < 1) throw std::invalid_argument("bench sizes must be >= 1");
        for (double p : densities)
            if (!(p > 0.0) || p > 1.0)
                throw std::invalid_argument("bench densities must lie in (0, 1]");
        engine.validate();
    }
};

struct BenchRow {
    std::string instance_id;
    int n = 0;
    double p = 0.0;
    bool weighted = false;
    std::uint64_t seed = 0;
    std::string method;
    int iteration = 0;
    std::optional<double> upper, lower;
    std::optional<int> cuts_added;
    std::optional<double> reduced_edge_ratio;
    std::optional<double> gap, stt_1pct, stt_5pct, approx_ratio, wall_ms;
};

inline const char* kBenchCsvHeader =
    "instance_id,n,p,weighted,seed,method,iteration,upper,lower,cuts_added,"
    "reduced_edge_ratio,gap,stt_1pct,stt_5pct,approx_ratio,wall_ms";

namespace detail {

inline std::string csv_num(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.9g", v);
    return buf;
}

inline void csv_field(std::string& line, const std::optional<double>& v) {
    line += ',';
    if (v) line += csv_num(*v);
}

inline std::string csv_row(const BenchRow& r) {
    std::string line = r.instance_id;
    line += ',' + std::to_string(r.n);
    line += ',' + csv_num(r.p);
    line += r.weighted ? ",1" : ",0";
    line += ',' + std::to_string(r.seed);
    line += ',' + r.method;
    line += ',' + std::to_string(r.iteration);
    csv_field(line, r.upper);
    csv_field(line, r.lower);
    line += ',';
    if (r.cuts_added) line += std::to_string(*r.cuts_added);
    csv_field(line, r.reduced_edge_ratio);
    csv_field(line, r.gap);
    csv_field(line, r.stt_1pct);
    csv_field(line, r.stt_5pct);
    csv_field(line, r.approx_ratio);
    csv_field(line, r.wall_ms);
    return line;
}

struct InstanceTask {
    int n;
    double p;
    std::uint64_t seed;
};

inline std::vector<VertexSet> baseline_samples(const WeightedGraph& g,
                                               BenchMethod method,
                                               const EngineConfig& cfg,
                                               std::uint64_t seed, int budget) {
    switch (method) {
        case BenchMethod::greedy:
            return greedy_sample(g, budget, seed);
        case BenchMethod::sa: {
            SamplerConfig sc;
            sc.kind = SamplerKind::sa;
            sc.shots = budget;
            sc.seed = seed;
            sc.sa_sweeps = cfg.sa_sweeps;
            sc.sa_beta_initial = cfg.sa_beta_initial;
            sc.sa_beta_final = cfg.sa_beta_final;
            return sa_sample(g, sc);
        }
        case BenchMethod::rydberg: {
            if (g.num_vertices() > kAtomCap)
                throw std::invalid_argument("rydberg baseline limited to " +
                                            std::to_string(kAtomCap) + " vertices");
            std::vector<double> duals(g.num_edges(), 1.0);
            Register reg = layout(g, duals, seed);
            auto [rb, omega_max] = choose_blockade(reg, g);
            Pulse pulse = build_pulse(g.weights(), kDefaultPulseDuration, omega_max);
            QuantumState st = evolve(reg, pulse, cfg.rydberg_dt);
            auto bits = measure(st, budget, seed ^ 0xabcdef12345ULL);
            std::vector<VertexSet> out;
            out.reserve(bits.size());
            for (auto mask : bits) {
                std::vector<int> members;
                for (int i = 0; i < g.num_vertices(); ++i)
                    if (mask & (1u << i)) members.push_back(i);
                out.push_back(maximalize(g, make_vertex_set(g, std::move(members))));
            }
            return out;
        }
        case BenchMethod::lp_quts:
            break;
    }
    throw std::logic_error("baseline_samples called with lp-quts");
}

inline void fill_metrics(BenchRow& row, const std::vector<double>& costs,
                         double best, std::optional<double> c_opt) {
    if (!c_opt) return;
    row.gap = optimality_gap(best, *c_opt);
    if (auto s = stt(costs, *c_opt, 0.01)) row.stt_1pct = *s;
    if (auto s = stt(costs, *c_opt, 0.05)) row.stt_5pct = *s;
    if (!costs.empty()) {
        double sum = 0.0;
        for (double c : costs) sum += c;
        row.approx_ratio = sum / (costs.size() * *c_opt);
    }
}

inline std::vector<BenchRow> run_instance(const BenchSpec& spec, const InstanceTask& task) {
    WeightedGraph g = gen_erdos_renyi(task.n, task.p, spec.weighted, task.seed);
    std::ostringstream id;
    id << "er_n" << task.n << "_p" << csv_num(task.p)
       << "_w" << (spec.weighted ? 1 : 0) << "_s" << task.seed;

    std::optional<double> c_opt;
    if (task.n <= ExactOptions{}.max_vertices)
        c_opt = exact_mwis(g).weight;

    const int budget = spec.engine.max_iterations * spec.engine.shots;

    std::vector<BenchRow> rows;
    for (BenchMethod method : spec.methods) {
        BenchRow base;
        base.instance_id = id.str();
        base.n = task.n;
        base.p = task.p;
        base.weighted = spec.weighted;
        base.seed = task.seed;
        base.method = to_string(method);

        if (method == BenchMethod::lp_quts) {
            EngineConfig cfg = spec.engine;
            cfg.seed = task.seed;
            SolveReport rep = lp_quts(g, cfg);
            for (const auto& it : rep.iterations) {
                BenchRow row = base;
                row.iteration = it.index;
                row.upper = it.upper_bound;
                row.lower = it.lower_bound;
                row.cuts_added = it.cuts_added;
                row.reduced_edge_ratio = it.reduced_edge_ratio;
                if (spec.record_timing) row.wall_ms = it.wall_ms;
                if (it.index == rep.iterations.back().index)
                    fill_metrics(row, rep.all_sample_costs, rep.lower_bound, c_opt);
                rows.push_back(std::move(row));
            }
        } else {
            const auto t0 = std::chrono::steady_clock::now();
            auto samples = baseline_samples(g, method, spec.engine, task.seed, budget);
            BenchRow row = base;
            row.iteration = 1;
            std::vector<double> costs;
            double best = 0.0;
            for (const auto& vs : samples) {
                costs.push_back(vs.weight);
                best = std::max(best, vs.weight);
            }
            row.lower = best;
            fill_metrics(row, costs, best, c_opt);
            if (spec.record_timing)
                row.wall_ms = std::chrono::duration<double, std::milli>(
                                  std::chrono::steady_clock::now() - t0).count();
            rows.push_back(std::move(row));
        }
    }
    return rows;
}

inline int bench_thread_cap() {
    if (const char* env = std::getenv("LPQUTS_THREADS")) {
        const int v = std::atoi(env);
        if (v >= 1) return v;
    }
    return 1;
}

} // namespace detail

/// Run the full grid. Instances run concurrently up to LPQUTS_THREADS with
/// isolated RNG streams; the row order is fixed by the grid, not by the
/// scheduler, so output is deterministic.
inline std::vector<BenchRow> bench(const BenchSpec& spec) {
    spec.validate();
    if (spec.methods.empty()) return {};

    std::vector<detail::InstanceTask> tasks;
    for (int n : spec.sizes)
        for (double p : spec.densities)
            for (std::uint64_t seed : spec.seeds)
                tasks.push_back({n, p, seed});

    std::vector<std::vector<BenchRow>> per_task(tasks.size());
    const int threads = std::min<int>(detail::bench_thread_cap(),
                                      static_cast<int>(tasks.size()));
    if (threads <= 1) {
        for (std::size_t i = 0; i < tasks.size(); ++i)
            per_task[i] = detail::run_instance(spec, tasks[i]);
    } else {
        std::atomic<std::size_t> next{0};
        std::vector<std::thread> pool;
        std::atomic<bool> failed{false};
        std::string error;
        std::mutex error_mutex;
        for (int t = 0; t < threads; ++t)
            pool.emplace_back([&] {
                for (;;) {
                    const std::size_t i = next.fetch_add(1);
                    if (i >= tasks.size() || failed.load()) return;
                    try {
                        per_task[i] = detail::run_instance(spec, tasks[i]);
                    } catch (const std::exception& e) {
                        std::lock_guard<std::mutex> lk(error_mutex);
                        error = e.what();
                        failed.store(true);
                        return;
                    }
                }
            });
        for (auto& th : pool) th.join();
        if (failed.load()) throw std::runtime_error("bench: " + error);
    }

    std::vector<BenchRow> rows;
    for (auto& chunk : per_task)
        for (auto& row : chunk) rows.push_back(std::move(row));
    return rows;
}

inline std::string bench_csv(const std::vector<BenchRow>& rows) {
    std::string out = kBenchCsvHeader;
    out += '\n';
    for (const auto& r : rows) {
        out += detail::csv_row(r);
        out += '\n';
    }
    return out;
}

} // namespace lpquts

#endif
