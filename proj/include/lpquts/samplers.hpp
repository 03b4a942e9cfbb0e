#ifndef LPQUTS_SAMPLERS_HPP
#define LPQUTS_SAMPLERS_HPP

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>
#include <vector>

#include "lpquts/graph.hpp"
#include "lpquts/rng.hpp"

namespace lpquts {

enum class SamplerKind { greedy, sa, rydberg };

inline const char* to_string(SamplerKind k) {
    switch (k) {
        case SamplerKind::greedy: return "greedy";
        case SamplerKind::sa: return "sa";
        case SamplerKind::rydberg: return "rydberg";
    }
    return "?";
}

inline SamplerKind sampler_kind_from_string(const std::string& s) {
    if (s == "greedy") return SamplerKind::greedy;
    if (s == "sa") return SamplerKind::sa;
    if (s == "rydberg") return SamplerKind::rydberg;
    throw std::invalid_argument("unknown sampler kind: " + s +
                                " (valid: greedy, sa, rydberg)");
}

struct SamplerConfig {
    SamplerKind kind = SamplerKind::sa;
    int shots = 100;
    std::uint64_t seed = 0;
    int sa_sweeps = 100;          // full sweeps of n single-flip attempts
    double sa_beta_initial = 0.01;
    double sa_beta_final = 100.0;

    void validate() const {
        if (shots < 1) throw std::invalid_argument("shots must be >= 1");
        if (!(sa_beta_initial < sa_beta_final))
            throw std::invalid_argument("beta_initial must be < beta_final");
    }
};

/// Independent sets on the original graph plus per-vertex average occupation.
struct SampleSet {
    std::vector<VertexSet> samples;
    std::vector<double> occupations;
    int shots = 0;
};

inline SampleSet make_sample_set(const WeightedGraph& g, std::vector<VertexSet> samples) {
    SampleSet s;
    s.shots = static_cast<int>(samples.size());
    s.occupations.assign(g.num_vertices(), 0.0);
    for (const auto& vs : samples)
        for (int v : vs.members) s.occupations[v] += 1.0;
    if (s.shots > 0)
        for (double& o : s.occupations) o /= s.shots;
    s.samples = std::move(samples);
    return s;
}

/// Weighted random greedy: draw vertices without replacement with
/// probability proportional to their weight among the still-compatible
/// vertices until none remains. Every shot is a maximal independent set.
inline std::vector<VertexSet> greedy_sample(const WeightedGraph& g, int shots,
                                            std::uint64_t seed) {
    if (shots < 1) throw std::invalid_argument("shots must be >= 1");
    const int n = g.num_vertices();
    Rng base(seed);
    std::vector<VertexSet> out;
    out.reserve(shots);
    for (int shot = 0; shot < shots; ++shot) {
        Rng rng = base.derive(shot);
        std::vector<char> eligible(n, 1);
        std::vector<int> chosen;
        double total = g.total_weight();
        int remaining = n;
        while (remaining > 0) {
            double u = rng.uniform() * total;
            int pick = -1;
            for (int v = 0; v < n; ++v) {
                if (!eligible[v]) continue;
                u -= g.weight(v);
                pick = v;
                if (u < 0.0) break;
            }
            chosen.push_back(pick);
            eligible[pick] = 0;
            total -= g.weight(pick);
            --remaining;
            for (int w : g.neighbors(pick)) {
                if (eligible[w]) {
                    eligible[w] = 0;
                    total -= g.weight(w);
                    --remaining;
                }
            }
        }
        out.push_back(make_vertex_set(g, std::move(chosen)));
    }
    return out;
}

namespace detail {

/// Conflict repair: while some edge lies inside the set, drop the
/// lower-weight endpoint (ties: the larger id goes).
inline void repair_conflicts(const WeightedGraph& g, std::vector<char>& in_set) {
    bool changed = true;
    while (changed) {
        changed = false;
        for (const auto& [u, v] : g.edges()) {
            if (in_set[u] && in_set[v]) {
                int drop;
                if (g.weight(u) < g.weight(v)) drop = u;
                else if (g.weight(v) < g.weight(u)) drop = v;
                else drop = std::max(u, v);
                in_set[drop] = 0;
                changed = true;
            }
        }
    }
}

} // namespace detail

/// Repair-then-greedy post-processing: remove the low-weight endpoint of
/// every internal conflict, then repeatedly add the heaviest free vertex
/// (ties: smaller id). Output is maximal and never lighter than the
/// repaired input.
inline VertexSet maximalize(const WeightedGraph& g, const VertexSet& candidate) {
    const int n = g.num_vertices();
    std::vector<char> in_set(n, 0);
    for (int v : candidate.members) {
        if (v < 0 || v >= n) throw std::invalid_argument("vertex id out of range");
        in_set[v] = 1;
    }
    detail::repair_conflicts(g, in_set);
    while (true) {
        int best = -1;
        for (int v = 0; v < n; ++v) {
            if (in_set[v]) continue;
            bool free = true;
            for (int w : g.neighbors(v))
                if (in_set[w]) { free = false; break; }
            if (!free) continue;
            if (best < 0 || g.weight(v) > g.weight(best)) best = v;
        }
        if (best < 0) break;
        in_set[best] = 1;
    }
    std::vector<int> members;
    for (int v = 0; v < n; ++v)
        if (in_set[v]) members.push_back(v);
    return make_vertex_set(g, std::move(members));
}

/// Simulated annealing on the QUBO -sum(wbar_i n_i) + 2 sum(n_i n_j) with a
/// geometric inverse-temperature ramp and conflict repair of the final
/// configuration.
inline std::vector<VertexSet> sa_sample(const WeightedGraph& g, const SamplerConfig& cfg) {
    cfg.validate();
    const int n = g.num_vertices();
    double wmax = 0.0;
    for (double w : g.weights()) wmax = std::max(wmax, w);
    std::vector<double> wbar(n);
    for (int i = 0; i < n; ++i) wbar[i] = g.weight(i) / wmax;

    const int sweeps = std::max(1, cfg.sa_sweeps);
    std::vector<double> beta(sweeps);
    const double ratio = cfg.sa_beta_final / cfg.sa_beta_initial;
    for (int s = 0; s < sweeps; ++s)
        beta[s] = sweeps == 1
                      ? cfg.sa_beta_final
                      : cfg.sa_beta_initial * std::pow(ratio, static_cast<double>(s) / (sweeps - 1));

    Rng base(cfg.seed);
    std::vector<VertexSet> out;
    out.reserve(cfg.shots);
    for (int shot = 0; shot < cfg.shots; ++shot) {
        Rng rng = base.derive(shot);
        std::vector<char> state(n, 0);
        std::vector<int> conflict_count(n, 0); // occupied neighbors
        for (int s = 0; s < sweeps; ++s) {
            const double b = beta[s];
            for (int a = 0; a < n; ++a) {
                const int i = static_cast<int>(rng.uniform_int(n));
                // dE of flipping n_i in the QUBO.
                const double dE = (state[i] ? -1.0 : 1.0) *
                                  (-wbar[i] + 2.0 * conflict_count[i]);
                if (dE <= 0.0 || rng.uniform() < std::exp(-b * dE)) {
                    const int delta = state[i] ? -1 : 1;
                    state[i] = !state[i];
                    for (int w : g.neighbors(i)) conflict_count[w] += delta;
                }
            }
        }
        detail::repair_conflicts(g, state);
        std::vector<int> members;
        for (int v = 0; v < n; ++v)
            if (state[v]) members.push_back(v);
        out.push_back(make_vertex_set(g, std::move(members)));
    }
    return out;
}

/// Align the k-th sample of every cluster, union them on the original graph
/// and maximalize; occupations are computed over the lifted sets.
/// With no clusters at all (fully integral RLP) the result degenerates to
/// `default_shots` copies of maximalize of the empty set.
inline SampleSet lift_samples(const WeightedGraph& original,
                              const std::vector<std::vector<VertexSet>>& cluster_samples,
                              int default_shots = 0) {
    int shots = -1;
    for (const auto& list : cluster_samples) {
        if (shots < 0) shots = static_cast<int>(list.size());
        else if (shots != static_cast<int>(list.size()))
            throw std::invalid_argument("lift_samples: mismatched shot counts across clusters");
    }
    if (shots < 0) shots = default_shots;
    std::vector<VertexSet> lifted;
    lifted.reserve(shots);
    for (int k = 0; k < shots; ++k) {
        std::vector<int> members;
        for (const auto& list : cluster_samples)
            members.insert(members.end(), list[k].members.begin(), list[k].members.end());
        lifted.push_back(maximalize(original, make_vertex_set(original, std::move(members))));
    }
    return make_sample_set(original, std::move(lifted));
}

} // namespace lpquts

#endif
