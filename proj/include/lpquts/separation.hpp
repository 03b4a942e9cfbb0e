#ifndef LPQUTS_SEPARATION_HPP
#define LPQUTS_SEPARATION_HPP

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <optional>
#include <queue>
#include <set>
#include <stdexcept>
#include <vector>

#include "lpquts/graph.hpp"
#include "lpquts/lp.hpp"

namespace lpquts {

inline constexpr double kTolViolation = 1e-6;

/// Odd simple cycle with its violation at the current fractional point and
/// its sample-proximity score.
struct OddCycle {
    std::vector<int> vertices; // cyclic order, canonical rotation
    double eps_rlp = 0.0;      // sum x - (|C|-1)/2
    double eps_s = 0.0;        // sum <n_i> - (|C|-1)/2

    int length() const { return static_cast<int>(vertices.size()); }
    double eps_alpha(double alpha) const { return eps_rlp + alpha * eps_s; }
};

struct SeparationInput {
    const WeightedGraph& graph;
    const std::vector<double>& x;           // RLP primal, edge-feasible
    const std::vector<double>& occupations; // <n_i> in [0,1]; empty => all 0
    double alpha = 0.0;
};

namespace detail {

/// Canonical form: rotate so the minimum vertex comes first, then pick the
/// lexicographically smaller direction.
inline std::vector<int> canonical_cycle(const std::vector<int>& cyc) {
    const int k = static_cast<int>(cyc.size());
    int pos = static_cast<int>(std::min_element(cyc.begin(), cyc.end()) - cyc.begin());
    std::vector<int> fwd(k), bwd(k);
    for (int i = 0; i < k; ++i) {
        fwd[i] = cyc[(pos + i) % k];
        bwd[i] = cyc[(pos - i % k + k * 2) % k];
    }
    return std::min(fwd, bwd);
}

inline double occ_of(const SeparationInput& in, int v) {
    return in.occupations.empty() ? 0.0 : in.occupations[v];
}

/// All odd simple cycles contained in a closed odd walk (vertex list, last
/// edge wraps to front). A closed walk either is simple or splits at a
/// repeated vertex into two shorter closed walks; with nonnegative edge
/// costs every odd piece keeps a walk weight no larger than the original,
/// so collecting the odd pieces preserves the best achievable cycle.
inline void collect_odd_cycles(const std::vector<int>& walk,
                               std::vector<std::vector<int>>& out) {
    const int len = static_cast<int>(walk.size());
    if (len < 3) return;
    // Find a repeated vertex.
    int split_a = -1, split_b = -1;
    {
        std::vector<std::pair<int, int>> tagged(len);
        for (int i = 0; i < len; ++i) tagged[i] = {walk[i], i};
        std::sort(tagged.begin(), tagged.end());
        for (int i = 0; i + 1 < len; ++i) {
            if (tagged[i].first == tagged[i + 1].first) {
                split_a = tagged[i].second;
                split_b = tagged[i + 1].second;
                break;
            }
        }
    }
    if (split_a < 0) {
        if (len % 2 == 1) out.push_back(walk);
        return;
    }
    std::vector<int> inner(walk.begin() + split_a, walk.begin() + split_b);
    std::vector<int> outer(walk.begin(), walk.begin() + split_a);
    outer.insert(outer.end(), walk.begin() + split_b, walk.end());
    collect_odd_cycles(inner, out);
    collect_odd_cycles(outer, out);
}

} // namespace detail

/// Per-edge shortest-path cost z(i,j) = (1 - x_i - x_j) + alpha(1 - <n_i + n_j>),
/// aligned with the graph's edge order. Both terms are nonnegative for
/// edge-feasible x and occupations averaged over independent sets; values
/// inside -tol are clamped to zero.
inline std::vector<double> edge_costs(const SeparationInput& in, double tol = kTolLp) {
    std::vector<double> z;
    z.reserve(in.graph.num_edges());
    for (const auto& [u, v] : in.graph.edges()) {
        const double zi = (1.0 - in.x[u] - in.x[v]) +
                          in.alpha * (1.0 - detail::occ_of(in, u) - detail::occ_of(in, v));
        if (zi < -tol)
            throw std::runtime_error("edge_costs: negative cost, infeasible x or corrupted occupations");
        z.push_back(std::max(0.0, zi));
    }
    return z;
}

/// Bipartite-doubling separation: for every vertex v a shortest path from
/// its first to its second copy projects to a closed odd walk, whose odd
/// simple sub-cycles are candidate cuts. Returns violated cycles
/// (eps_rlp > tol_violation), deduplicated, at most |V| of them, sorted by
/// decreasing eps_alpha (ties: shorter cycle, then lexicographic).
inline std::vector<OddCycle> find_violated_cycles(const SeparationInput& in,
                                                  double tol_violation = kTolViolation) {
    const WeightedGraph& g = in.graph;
    const int n = g.num_vertices();
    const std::vector<double> z = edge_costs(in);

    // Doubled graph: node 2u = u', 2u+1 = u''. Edge (u,v) links u'-v'' and u''-v'.
    std::vector<std::vector<std::pair<int, double>>> adj(2 * n);
    for (int e = 0; e < g.num_edges(); ++e) {
        const auto& [u, v] = g.edges()[e];
        adj[2 * u].emplace_back(2 * v + 1, z[e]);
        adj[2 * v + 1].emplace_back(2 * u, z[e]);
        adj[2 * v].emplace_back(2 * u + 1, z[e]);
        adj[2 * u + 1].emplace_back(2 * v, z[e]);
    }

    std::set<std::vector<int>> seen;
    std::vector<OddCycle> found;
    std::vector<double> dist(2 * n);
    std::vector<int> pred(2 * n);
    const double inf = std::numeric_limits<double>::infinity();

    for (int s = 0; s < n; ++s) {
        std::fill(dist.begin(), dist.end(), inf);
        std::fill(pred.begin(), pred.end(), -1);
        using Item = std::pair<double, int>;
        std::priority_queue<Item, std::vector<Item>, std::greater<>> pq;
        dist[2 * s] = 0.0;
        pq.emplace(0.0, 2 * s);
        while (!pq.empty()) {
            auto [du, u] = pq.top();
            pq.pop();
            if (du > dist[u]) continue;
            if (u == 2 * s + 1) break;
            for (const auto& [w, c] : adj[u]) {
                if (du + c < dist[w]) {
                    dist[w] = du + c;
                    pred[w] = u;
                    pq.emplace(dist[w], w);
                }
            }
        }
        if (dist[2 * s + 1] == inf) continue;

        // Project path nodes back to original vertices; drop the final copy
        // of s to make the list a closed walk.
        std::vector<int> walk;
        for (int u = 2 * s + 1; u != -1; u = pred[u]) walk.push_back(u / 2);
        std::reverse(walk.begin(), walk.end());
        walk.pop_back();

        std::vector<std::vector<int>> cycles;
        detail::collect_odd_cycles(walk, cycles);
        for (auto& cyc : cycles) {
            if (cyc.size() < 3) continue;
            double sx = 0.0, so = 0.0;
            for (int v : cyc) {
                sx += in.x[v];
                so += detail::occ_of(in, v);
            }
            const double half = (static_cast<double>(cyc.size()) - 1.0) / 2.0;
            const double eps_rlp = sx - half;
            if (eps_rlp <= tol_violation) continue;
            auto canon = detail::canonical_cycle(cyc);
            if (!seen.insert(canon).second) continue;
            found.push_back(OddCycle{std::move(canon), eps_rlp, so - half});
        }
    }

    std::stable_sort(found.begin(), found.end(), [&](const OddCycle& a, const OddCycle& b) {
        const double ea = a.eps_alpha(in.alpha), eb = b.eps_alpha(in.alpha);
        if (ea != eb) return ea > eb;
        if (a.length() != b.length()) return a.length() < b.length();
        return a.vertices < b.vertices;
    });
    if (static_cast<int>(found.size()) > n) found.resize(n);
    return found;
}

/// Alpha-tuning schedule: start at alpha = 1 and decrease by 1/n_steps until
/// a separation call returns something, returning that batch immediately;
/// empty once alpha passes below zero. The final alpha = 0 call is the
/// classical separation, which finds a violated cycle whenever one exists.
inline std::vector<OddCycle> alpha_schedule(const WeightedGraph& graph,
                                            const std::vector<double>& x,
                                            const std::vector<double>& occupations,
                                            int n_steps,
                                            double tol_violation = kTolViolation) {
    if (n_steps < 1) throw std::invalid_argument("n_steps must be >= 1");
    const double step = 1.0 / n_steps;
    double alpha = 1.0;
    while (alpha >= -0.5 * step) {
        SeparationInput in{graph, x, occupations, std::max(0.0, alpha)};
        auto cycles = find_violated_cycles(in, tol_violation);
        if (!cycles.empty()) return cycles;
        alpha -= step;
    }
    return {};
}

/// Exhaustive separation oracle: enumerate every simple odd cycle (n <= 12)
/// and maximize eps_alpha subject to the violation constraint. Ties broken
/// by shorter length, then lexicographic vertex list.
inline std::optional<OddCycle> brute_force_separation(const WeightedGraph& g,
                                                      const std::vector<double>& x,
                                                      const std::vector<double>& occupations,
                                                      double alpha,
                                                      double tol_violation = kTolViolation) {
    if (g.num_vertices() > 12)
        throw std::invalid_argument("brute_force_separation: instance too large (n > 12)");
    std::optional<OddCycle> best;
    std::vector<int> path;
    auto occ = [&](int v) { return occupations.empty() ? 0.0 : occupations[v]; };

    auto consider = [&](const std::vector<int>& cyc) {
        if (cyc.size() % 2 == 0 || cyc.size() < 3) return;
        double sx = 0.0, so = 0.0;
        for (int v : cyc) { sx += x[v]; so += occ(v); }
        const double half = (static_cast<double>(cyc.size()) - 1.0) / 2.0;
        OddCycle c{detail::canonical_cycle(cyc), sx - half, so - half};
        if (c.eps_rlp <= tol_violation) return;
        if (!best) { best = std::move(c); return; }
        const double ec = c.eps_alpha(alpha), eb = best->eps_alpha(alpha);
        if (ec > eb ||
            (ec == eb && (c.length() < best->length() ||
                          (c.length() == best->length() && c.vertices < best->vertices))))
            best = std::move(c);
    };

    // Enumerate cycles whose smallest vertex is the start; direction fixed
    // by requiring second < last to visit each cycle once.
    std::function<void(int, int)> dfs = [&](int start, int u) {
        for (int v : g.neighbors(u)) {
            if (v == start) {
                if (path.size() >= 3 && path[1] < path.back()) consider(path);
                continue;
            }
            if (v <= start) continue;
            if (std::find(path.begin(), path.end(), v) != path.end()) continue;
            path.push_back(v);
            dfs(start, v);
            path.pop_back();
        }
    };
    for (int s = 0; s < g.num_vertices(); ++s) {
        path = {s};
        dfs(s, s);
    }
    return best;
}

} // namespace lpquts

#endif
