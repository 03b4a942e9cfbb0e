// Independent test-side oracles: brute-force enumeration and dense
// numerical integration, deliberately sharing no code with the library
// implementations they check.

#ifndef LPQUTS_TESTS_ORACLES_HPP
#define LPQUTS_TESTS_ORACLES_HPP

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <set>
#include <vector>

#include "lpquts/graph.hpp"
#include "lpquts/rydberg.hpp"

namespace oracles {

/// All independent sets as bitmasks (n <= 20).
inline std::vector<std::uint32_t> enumerate_independent_sets(const lpquts::WeightedGraph& g) {
    const int n = g.num_vertices();
    std::vector<std::uint32_t> out;
    for (std::uint32_t s = 0; s < (1u << n); ++s) {
        bool ok = true;
        for (const auto& [u, v] : g.edges())
            if ((s >> u & 1) && (s >> v & 1)) { ok = false; break; }
        if (ok) out.push_back(s);
    }
    return out;
}

inline double set_weight(const lpquts::WeightedGraph& g, std::uint32_t mask) {
    double w = 0.0;
    for (int v = 0; v < g.num_vertices(); ++v)
        if (mask >> v & 1) w += g.weight(v);
    return w;
}

/// Exact MWIS value by full enumeration.
inline double brute_force_mwis(const lpquts::WeightedGraph& g) {
    double best = 0.0;
    for (std::uint32_t s : enumerate_independent_sets(g))
        best = std::max(best, set_weight(g, s));
    return best;
}

/// All simple cycles as sorted vertex lists, deduplicated.
inline std::vector<std::vector<int>> enumerate_cycles(const lpquts::WeightedGraph& g) {
    const int n = g.num_vertices();
    std::set<std::vector<int>> seen;
    std::vector<std::vector<int>> out;
    std::vector<int> path;
    std::vector<char> on_path(n, 0);
    std::function<void(int, int)> dfs = [&](int start, int u) {
        for (int v : g.neighbors(u)) {
            if (v == start && path.size() >= 3) {
                auto key = path;
                std::sort(key.begin(), key.end());
                if (seen.insert(key).second) out.push_back(path);
            } else if (v > start && !on_path[v]) {
                path.push_back(v);
                on_path[v] = 1;
                dfs(start, v);
                on_path[v] = 0;
                path.pop_back();
            }
        }
    };
    for (int s = 0; s < n; ++s) {
        path = {s};
        on_path.assign(n, 0);
        on_path[s] = 1;
        dfs(s, s);
    }
    return out;
}

struct CycleScore {
    std::vector<int> vertices;
    double eps_rlp = 0.0;
    double eps_alpha = 0.0;
};

/// Constrained optimum of eps_alpha over all odd simple cycles with
/// eps_rlp above tol; empty when no cycle violates.
inline std::optional<CycleScore> best_violated_cycle(
    const lpquts::WeightedGraph& g, const std::vector<double>& x,
    const std::vector<double>& occ, double alpha, double tol = 1e-6) {
    std::optional<CycleScore> best;
    for (const auto& cyc : enumerate_cycles(g)) {
        if (cyc.size() % 2 == 0) continue;
        double sx = 0.0, so = 0.0;
        for (int v : cyc) {
            sx += x[v];
            so += occ.empty() ? 0.0 : occ[v];
        }
        const double half = (static_cast<double>(cyc.size()) - 1.0) / 2.0;
        CycleScore c{cyc, sx - half, (sx - half) + alpha * (so - half)};
        if (c.eps_rlp <= tol) continue;
        if (!best || c.eps_alpha > best->eps_alpha) best = c;
    }
    return best;
}

/// Series-parallel recognition by exhaustive series/parallel reduction of
/// the multigraph down to a single edge.
inline bool is_series_parallel(const lpquts::WeightedGraph& g) {
    // multiset of edges
    std::map<std::pair<int, int>, int> edges;
    std::vector<int> deg(g.num_vertices(), 0);
    for (auto [u, v] : g.edges()) {
        ++edges[{u, v}];
        ++deg[u];
        ++deg[v];
    }
    int vertices_left = g.num_vertices();
    bool changed = true;
    while (changed) {
        changed = false;
        // parallel reduction
        for (auto& [e, count] : edges)
            if (count > 1) {
                deg[e.first] -= count - 1;
                deg[e.second] -= count - 1;
                count = 1;
                changed = true;
            }
        // series reduction: suppress a degree-2 vertex
        for (int v = 0; v < g.num_vertices() && !changed; ++v) {
            if (deg[v] != 2) continue;
            std::vector<int> nb;
            for (auto& [e, count] : edges) {
                if (count == 0) continue;
                if (e.first == v) nb.insert(nb.end(), count, e.second);
                if (e.second == v) nb.insert(nb.end(), count, e.first);
            }
            if (nb.size() != 2 || nb[0] == v || nb[1] == v) continue;
            if (nb[0] == nb[1]) continue; // parallel pair through v, reduce later
            for (auto& [e, count] : edges)
                if (e.first == v || e.second == v) count = 0;
            ++edges[{std::min(nb[0], nb[1]), std::max(nb[0], nb[1])}];
            deg[v] = 0;
            --vertices_left;
            changed = true;
        }
    }
    int remaining = 0;
    for (auto& [e, count] : edges) remaining += count;
    return vertices_left == 2 && remaining == 1;
}

/// Dense RK4 integration of the Rydberg Schrodinger equation; independent
/// of the split-operator propagator it checks against.
inline lpquts::QuantumState dense_evolve(const lpquts::Register& reg,
                                         const lpquts::Pulse& pulse,
                                         double dt = 2e-4) {
    using cplx = std::complex<double>;
    const int n = reg.num_atoms();
    const std::size_t dim = std::size_t{1} << n;

    std::vector<double> interaction(dim, 0.0);
    for (std::size_t b = 0; b < dim; ++b)
        for (int i = 0; i < n; ++i)
            for (int j = i + 1; j < n; ++j)
                if ((b >> i & 1) && (b >> j & 1))
                    interaction[b] += pulse.c6 / std::pow(reg.distance(i, j), 6.0);

    auto apply_H = [&](double t, const std::vector<cplx>& psi, std::vector<cplx>& out) {
        const double om = pulse.omega(t);
        for (std::size_t b = 0; b < dim; ++b) {
            double diag = interaction[b];
            for (int i = 0; i < n; ++i)
                if (b >> i & 1) diag -= pulse.detunings[i](t);
            out[b] = diag * psi[b];
            for (int i = 0; i < n; ++i)
                out[b] += 0.5 * om * psi[b ^ (std::size_t{1} << i)];
        }
    };

    std::vector<cplx> psi(dim, 0.0), k1(dim), k2(dim), k3(dim), k4(dim), tmp(dim);
    psi[0] = 1.0;
    const cplx mi(0.0, -1.0);
    const long long steps = static_cast<long long>(std::ceil(pulse.duration / dt - 1e-12));
    double t = 0.0;
    for (long long s = 0; s < steps; ++s) {
        const double h = std::min(dt, pulse.duration - t);
        apply_H(t, psi, k1);
        for (std::size_t b = 0; b < dim; ++b) tmp[b] = psi[b] + 0.5 * h * mi * k1[b];
        apply_H(t + 0.5 * h, tmp, k2);
        for (std::size_t b = 0; b < dim; ++b) tmp[b] = psi[b] + 0.5 * h * mi * k2[b];
        apply_H(t + 0.5 * h, tmp, k3);
        for (std::size_t b = 0; b < dim; ++b) tmp[b] = psi[b] + h * mi * k3[b];
        apply_H(t + h, tmp, k4);
        for (std::size_t b = 0; b < dim; ++b)
            psi[b] += (h / 6.0) * mi * (k1[b] + 2.0 * k2[b] + 2.0 * k3[b] + k4[b]);
        t += h;
    }
    lpquts::QuantumState st;
    st.num_atoms = n;
    st.amplitudes = std::move(psi);
    return st;
}

} // namespace oracles

#endif
