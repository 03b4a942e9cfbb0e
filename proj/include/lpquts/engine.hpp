#ifndef LPQUTS_ENGINE_HPP
#define LPQUTS_ENGINE_HPP

#include <chrono>
#include <cmath>
#include <set>
#include <string>
#include <vector>

#include "lpquts/exact.hpp"
#include "lpquts/graph.hpp"
#include "lpquts/lp.hpp"
#include "lpquts/reduction.hpp"
#include "lpquts/rydberg.hpp"
#include "lpquts/samplers.hpp"
#include "lpquts/separation.hpp"

namespace lpquts {

enum class TightnessRule { dual_positive, row_tight };

struct EngineConfig {
    int max_iterations = 20;
    int patience = 4;
    int shots = 100;        // per iteration
    int alpha_steps = 10;
    bool force_alpha_zero = false; // classical separation only
    SamplerKind sampler = SamplerKind::sa;
    int max_subgraph = 0;          // 0 => min(N, 40)
    int quantum_cap = kAtomCap;    // rydberg clusters above this fall back to SA
    double tol_lp = kTolLp;
    double tol_dual = kTolDual;
    double tol_violation = kTolViolation;
    TightnessRule tightness = TightnessRule::dual_positive;
    int sa_sweeps = 100;
    double sa_beta_initial = 0.01;
    double sa_beta_final = 100.0;
    double rydberg_dt = kDefaultDt;
    std::uint64_t seed = 0;

    void validate() const {
        if (max_iterations < 1 || patience < 1 || shots < 1 || alpha_steps < 1)
            throw std::invalid_argument("engine config counts must be >= 1");
        if (patience > max_iterations)
            throw std::invalid_argument("patience must be <= max_iterations");
    }

    int effective_max_subgraph(int n) const {
        return max_subgraph > 0 ? max_subgraph : std::min(n, 40);
    }
};

struct IterationRecord {
    int index = 0;
    double upper_bound = 0.0;
    double lower_bound = 0.0;
    int cuts_added = 0;
    double reduced_edge_ratio = 0.0;
    double wall_ms = 0.0;
};

enum class Termination { converged, patience, max_iterations, no_violated_cuts };

inline const char* to_string(Termination t) {
    switch (t) {
        case Termination::converged: return "converged";
        case Termination::patience: return "patience";
        case Termination::max_iterations: return "max_iterations";
        case Termination::no_violated_cuts: return "no_violated_cuts";
    }
    return "?";
}

struct SolveReport {
    std::vector<IterationRecord> iterations;
    VertexSet best_set;
    bool converged = false;
    Termination reason = Termination::max_iterations;
    double upper_bound = 0.0;
    double lower_bound = 0.0;
    std::vector<OddCycle> cut_pool;
    std::vector<double> all_sample_costs;          // every lifted sample, in order
    std::vector<std::string> cluster_samplers_used; // per iteration, e.g. "rydberg:3,sa:1"
    int total_shots = 0;
};

namespace detail {

inline std::vector<VertexSet> sample_cluster(const WeightedGraph& original,
                                             const std::vector<int>& cluster,
                                             const ReducedGraph& reduced,
                                             const EngineConfig& cfg,
                                             std::uint64_t seed,
                                             std::string& used,
                                             bool reduced_edges = true) {
    auto sub = induced_subgraph(original, cluster);

    // Samplers see the reduced graph, not the full induced subgraph: only
    // edges kept by the reduction survive, and the lift repairs whatever
    // conflicts the dropped (slack) edges reintroduce. The degenerate
    // fallback (reduced_edges = false) samples the cluster with all of its
    // original edges instead.
    std::vector<Edge> kept_local;
    std::vector<double> kept_duals;
    if (reduced_edges) {
        for (const auto& [u, v] : sub.graph.edges()) {
            const Edge orig{std::min(sub.to_parent[u], sub.to_parent[v]),
                            std::max(sub.to_parent[u], sub.to_parent[v])};
            for (const auto& de : reduced.kept_edges)
                if (de.edge == orig) {
                    kept_local.push_back({u, v});
                    kept_duals.push_back(de.pi);
                    break;
                }
        }
    } else {
        kept_local = sub.graph.edges();
        kept_duals.assign(kept_local.size(), 1.0);
    }
    WeightedGraph sample_graph(sub.graph.num_vertices(), sub.graph.weights(),
                               std::move(kept_local));

    SamplerKind kind = cfg.sampler;
    if (kind == SamplerKind::rydberg &&
        sub.graph.num_vertices() > cfg.quantum_cap)
        kind = SamplerKind::sa; // emulator cap; classical fallback
    used = to_string(kind);

    std::vector<VertexSet> local;
    switch (kind) {
        case SamplerKind::greedy:
            local = greedy_sample(sample_graph, cfg.shots, seed);
            break;
        case SamplerKind::sa: {
            SamplerConfig sc;
            sc.kind = SamplerKind::sa;
            sc.shots = cfg.shots;
            sc.seed = seed;
            sc.sa_sweeps = cfg.sa_sweeps;
            sc.sa_beta_initial = cfg.sa_beta_initial;
            sc.sa_beta_final = cfg.sa_beta_final;
            local = sa_sample(sample_graph, sc);
            break;
        }
        case SamplerKind::rydberg: {
            Register reg = layout(sample_graph, kept_duals, seed);
            auto [rb, omega_max] = choose_blockade(reg, sample_graph);
            Pulse pulse = build_pulse(sample_graph.weights(), kDefaultPulseDuration, omega_max);
            QuantumState st = evolve(reg, pulse, cfg.rydberg_dt);
            auto bits = measure(st, cfg.shots, seed ^ 0xabcdef12345ULL);
            local.reserve(bits.size());
            for (auto mask : bits) {
                std::vector<int> members;
                for (int i = 0; i < sub.graph.num_vertices(); ++i)
                    if (mask & (1u << i)) members.push_back(i);
                local.push_back(make_vertex_set(sub.graph, std::move(members)));
            }
            break;
        }
    }
    // Map back to original vertex ids (weights recomputed at lift).
    for (auto& vs : local) {
        std::vector<int> mapped;
        mapped.reserve(vs.members.size());
        for (int v : vs.members) mapped.push_back(sub.to_parent[v]);
        vs = make_vertex_set(original, std::move(mapped));
    }
    return local;
}

} // namespace detail

/// Main loop: solve the RLP with the accumulated cut pool, reduce the graph
/// via tight edges, partition oversized clusters, sample independent sets,
/// lift them for a lower bound, then run the sample-informed odd-cycle
/// separation on the original graph and add every violated cut found.
inline SolveReport lp_quts(const WeightedGraph& g, const EngineConfig& cfg) {
    cfg.validate();
    const int n = g.num_vertices();
    const int max_cluster = cfg.effective_max_subgraph(n);

    SolveReport report;
    report.lower_bound = 0.0;
    report.upper_bound = g.total_weight();

    std::set<std::vector<int>> pool_keys;
    Rng rng(cfg.seed);
    int last_improvement_iter = 0;
    double prev_upper = report.upper_bound;

    for (int it = 1; it <= cfg.max_iterations; ++it) {
        const auto t0 = std::chrono::steady_clock::now();
        bool improved = false;

        const LinearProgram lp = build_rlp(g, report.cut_pool);
        const RlpSolution sol = solve_lp(lp);

        double upper = std::min(prev_upper, sol.objective); // cuts only tighten
        if (upper < prev_upper - cfg.tol_lp) improved = true;
        prev_upper = upper;
        report.upper_bound = upper;

        bool integral = true;
        for (double xi : sol.x)
            if (xi > cfg.tol_lp && xi < 1.0 - cfg.tol_lp) { integral = false; break; }

        ReducedGraph reduced = cfg.tightness == TightnessRule::dual_positive
                                   ? build_reduced(g, sol, cfg.tol_dual)
                                   : build_reduced_by_row(g, sol, cfg.tol_dual);
        reduced = partition_oversized(std::move(reduced), max_cluster);

        // Sample every cluster with aligned shot indices and lift. Clusters
        // of size one carry no kept edges, so their samples are forced and
        // contribute no entropy; lump them with the vertices the reduction
        // left uncovered into one direct cluster sampled with its original
        // edges, so the shot budget keeps exploring even when the duals
        // migrate onto cut rows and the reduced graph thins out.
        std::vector<std::vector<VertexSet>> cluster_samples;
        std::string used_desc;
        std::vector<char> informative(n, 0);
        for (std::size_t c = 0; c < reduced.clusters.size(); ++c) {
            if (reduced.clusters[c].size() < 2) continue;
            for (int v : reduced.clusters[c]) informative[v] = 1;
            std::string used;
            cluster_samples.push_back(detail::sample_cluster(
                g, reduced.clusters[c], reduced, cfg,
                rng.derive(static_cast<std::uint64_t>(it) * 1000 + c).next_u64(),
                used));
            if (!used_desc.empty()) used_desc += ",";
            used_desc += used;
        }
        std::vector<int> direct;
        for (int v = 0; v < n; ++v)
            if (!informative[v]) direct.push_back(v);
        if (!direct.empty()) {
            std::string used;
            cluster_samples.push_back(detail::sample_cluster(
                g, direct, reduced, cfg,
                rng.derive(static_cast<std::uint64_t>(it) * 1000 +
                           reduced.clusters.size()).next_u64(),
                used, false));
            if (!used_desc.empty()) used_desc += ",";
            used_desc += used;
        }
        SampleSet samples = lift_samples(g, cluster_samples, cfg.shots);
        report.cluster_samplers_used.push_back(used_desc);
        report.total_shots += samples.shots;

        for (const auto& vs : samples.samples) {
            report.all_sample_costs.push_back(vs.weight);
            if (vs.weight > report.lower_bound + cfg.tol_lp) {
                report.lower_bound = vs.weight;
                report.best_set = vs;
                improved = true;
            }
        }
        // An integral RLP solution is itself the optimum; adopt it directly.
        if (integral) {
            std::vector<int> members;
            for (int v = 0; v < n; ++v)
                if (sol.x[v] > 0.5) members.push_back(v);
            auto vs = make_vertex_set(g, std::move(members));
            if (vs.weight > report.lower_bound + cfg.tol_lp) {
                report.lower_bound = vs.weight;
                report.best_set = vs;
                improved = true;
            }
        }

        IterationRecord rec;
        rec.index = it;
        rec.upper_bound = upper;
        rec.lower_bound = report.lower_bound;
        rec.reduced_edge_ratio = reduced.edge_ratio();

        const double gap_tol = cfg.tol_lp * std::max(1.0, std::abs(upper));
        if (upper - report.lower_bound <= gap_tol) {
            rec.wall_ms = std::chrono::duration<double, std::milli>(
                              std::chrono::steady_clock::now() - t0).count();
            report.iterations.push_back(rec);
            report.converged = true;
            report.reason = Termination::converged;
            break;
        }

        // Separation on the original graph with the current x and occupations.
        std::vector<OddCycle> cuts;
        if (cfg.force_alpha_zero) {
            SeparationInput in{g, sol.x, samples.occupations, 0.0};
            cuts = find_violated_cycles(in, cfg.tol_violation);
        } else {
            cuts = alpha_schedule(g, sol.x, samples.occupations, cfg.alpha_steps,
                                  cfg.tol_violation);
        }
        int added = 0;
        for (auto& c : cuts) {
            auto key = c.vertices; // already canonical
            std::sort(key.begin(), key.end());
            if (pool_keys.insert(key).second) {
                report.cut_pool.push_back(std::move(c));
                ++added;
            }
        }
        rec.cuts_added = added;
        rec.wall_ms = std::chrono::duration<double, std::milli>(
                          std::chrono::steady_clock::now() - t0).count();
        report.iterations.push_back(rec);

        if (added == 0 && integral) {
            report.converged = report.upper_bound - report.lower_bound <= gap_tol;
            report.reason = Termination::no_violated_cuts;
            break;
        }
        if (improved) last_improvement_iter = it;
        if (it - last_improvement_iter >= cfg.patience) {
            report.reason = Termination::patience;
            break;
        }
        if (it == cfg.max_iterations) report.reason = Termination::max_iterations;
    }
    return report;
}

} // namespace lpquts

#endif
