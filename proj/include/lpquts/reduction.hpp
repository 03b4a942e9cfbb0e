#ifndef LPQUTS_REDUCTION_HPP
#define LPQUTS_REDUCTION_HPP

#include <algorithm>
#include <cmath>
#include <functional>
#include <stdexcept>
#include <vector>

#include "lpquts/graph.hpp"
#include "lpquts/lp.hpp"

namespace lpquts {

struct DualEdge {
    Edge edge;
    double pi = 0.0;
};

/// Reduced graph built from the tight edges of an RLP solution, decomposed
/// into clusters to be handed to the samplers.
struct ReducedGraph {
    const WeightedGraph* parent = nullptr;
    std::vector<DualEdge> kept_edges;
    std::vector<std::vector<int>> clusters;   // ordered by smallest member
    std::vector<int> fractional_singletons;   // no kept edge but x above tol

    double edge_ratio() const {
        return parent->num_edges() == 0
                   ? 0.0
                   : static_cast<double>(kept_edges.size()) / parent->num_edges();
    }
};

namespace detail {

inline std::vector<std::vector<int>> cluster_from_edges(
    int n, const std::vector<DualEdge>& kept, const std::vector<int>& singletons) {
    std::vector<int> parent(n);
    for (int i = 0; i < n; ++i) parent[i] = i;
    std::function<int(int)> find = [&](int v) {
        while (parent[v] != v) v = parent[v] = parent[parent[v]];
        return v;
    };
    for (const auto& de : kept) {
        int a = find(de.edge.first), b = find(de.edge.second);
        if (a != b) parent[std::max(a, b)] = std::min(a, b);
    }
    std::vector<char> covered(n, 0);
    for (const auto& de : kept) covered[de.edge.first] = covered[de.edge.second] = 1;
    for (int v : singletons) covered[v] = 1;
    std::vector<std::vector<int>> groups(n);
    for (int v = 0; v < n; ++v)
        if (covered[v]) groups[find(v)].push_back(v);
    std::vector<std::vector<int>> clusters;
    for (auto& gvec : groups)
        if (!gvec.empty()) clusters.push_back(std::move(gvec));
    return clusters;
}

} // namespace detail

/// Keep edges with positive dual, cluster by connectivity of the kept-edge
/// subgraph. Vertices without a kept edge stay as singleton clusters when
/// their primal value is above tol (samplers may still propose them);
/// near-zero isolated vertices are left to post-processing.
inline ReducedGraph build_reduced(const WeightedGraph& g, const RlpSolution& sol,
                                  double tol_dual = kTolDual) {
    ReducedGraph r;
    r.parent = &g;
    for (int e = 0; e < g.num_edges(); ++e)
        if (sol.edge_duals[e] > tol_dual)
            r.kept_edges.push_back(DualEdge{g.edges()[e], sol.edge_duals[e]});
    std::vector<char> covered(g.num_vertices(), 0);
    for (const auto& de : r.kept_edges)
        covered[de.edge.first] = covered[de.edge.second] = 1;
    for (int v = 0; v < g.num_vertices(); ++v)
        if (!covered[v] && sol.x[v] > tol_dual) r.fractional_singletons.push_back(v);
    r.clusters = detail::cluster_from_edges(g.num_vertices(), r.kept_edges,
                                            r.fractional_singletons);
    return r;
}

/// Variant using the row-tightness rule (x_u + x_v = 1) instead of positive
/// duals; the two differ under dual degeneracy.
inline ReducedGraph build_reduced_by_row(const WeightedGraph& g, const RlpSolution& sol,
                                         double tol = kTolDual) {
    ReducedGraph r;
    r.parent = &g;
    for (int e = 0; e < g.num_edges(); ++e) {
        const auto& [u, v] = g.edges()[e];
        if (std::abs(1.0 - sol.x[u] - sol.x[v]) <= tol)
            r.kept_edges.push_back(DualEdge{g.edges()[e], sol.edge_duals[e]});
    }
    std::vector<char> covered(g.num_vertices(), 0);
    for (const auto& de : r.kept_edges)
        covered[de.edge.first] = covered[de.edge.second] = 1;
    for (int v = 0; v < g.num_vertices(); ++v)
        if (!covered[v] && sol.x[v] > tol) r.fractional_singletons.push_back(v);
    r.clusters = detail::cluster_from_edges(g.num_vertices(), r.kept_edges,
                                            r.fractional_singletons);
    return r;
}

/// Shrink oversized clusters by repeatedly removing the smallest-dual edge
/// inside any cluster above the limit (ties by lexicographic edge order)
/// until every cluster fits.
inline ReducedGraph partition_oversized(ReducedGraph r, int max_size) {
    if (max_size < 1) throw std::invalid_argument("max_size must be >= 1");
    const int n = r.parent->num_vertices();
    while (true) {
        std::vector<char> oversized_vertex(n, 0);
        bool any = false;
        for (const auto& cl : r.clusters) {
            if (static_cast<int>(cl.size()) > max_size) {
                any = true;
                for (int v : cl) oversized_vertex[v] = 1;
            }
        }
        if (!any) break;
        int victim = -1;
        for (int e = 0; e < static_cast<int>(r.kept_edges.size()); ++e) {
            const auto& de = r.kept_edges[e];
            if (!oversized_vertex[de.edge.first]) continue;
            if (victim < 0 || de.pi < r.kept_edges[victim].pi ||
                (de.pi == r.kept_edges[victim].pi && de.edge < r.kept_edges[victim].edge))
                victim = e;
        }
        // Every oversized cluster has >= max_size >= 1 internal edges, so a
        // victim always exists and each deletion strictly shrinks the set.
        r.kept_edges.erase(r.kept_edges.begin() + victim);
        r.clusters = detail::cluster_from_edges(n, r.kept_edges, r.fractional_singletons);
    }
    return r;
}

} // namespace lpquts

#endif
