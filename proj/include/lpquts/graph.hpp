#ifndef LPQUTS_GRAPH_HPP
#define LPQUTS_GRAPH_HPP

#include <algorithm>
#include <cstdint>
#include <fstream>
#include <numeric>
#include <sstream>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "lpquts/rng.hpp"

namespace lpquts {

using Edge = std::pair<int, int>; // always stored with first < second

/// Simple undirected graph with strictly positive vertex weights.
/// Vertices are dense ids 0..n-1. Immutable after construction.
class WeightedGraph {
public:
    WeightedGraph() = default;

    WeightedGraph(int n, std::vector<double> weights, std::vector<Edge> edges)
        : n_(n), weights_(std::move(weights)), edges_(std::move(edges)) {
        if (n_ < 1) throw std::invalid_argument("graph needs at least one vertex");
        if (static_cast<int>(weights_.size()) != n_)
            throw std::invalid_argument("weight count must equal vertex count");
        for (double w : weights_)
            if (!(w > 0.0)) throw std::invalid_argument("vertex weights must be strictly positive");
        for (auto& [u, v] : edges_) {
            if (u > v) std::swap(u, v);
            if (u == v) throw std::invalid_argument("self-loops are not allowed");
            if (u < 0 || v >= n_) throw std::invalid_argument("edge endpoint out of range");
        }
        auto sorted = edges_;
        std::sort(sorted.begin(), sorted.end());
        if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end())
            throw std::invalid_argument("duplicate edges are not allowed");
        adj_.assign(n_, {});
        for (const auto& [u, v] : edges_) {
            adj_[u].push_back(v);
            adj_[v].push_back(u);
        }
        for (auto& nb : adj_) std::sort(nb.begin(), nb.end());
    }

    static WeightedGraph unit_weights(int n, std::vector<Edge> edges) {
        return WeightedGraph(n, std::vector<double>(n, 1.0), std::move(edges));
    }

    int num_vertices() const { return n_; }
    int num_edges() const { return static_cast<int>(edges_.size()); }
    const std::vector<double>& weights() const { return weights_; }
    double weight(int v) const { return weights_[v]; }
    const std::vector<Edge>& edges() const { return edges_; }
    const std::vector<int>& neighbors(int v) const { return adj_[v]; }

    bool has_edge(int u, int v) const {
        if (u == v) return false;
        const auto& nb = adj_[u];
        return std::binary_search(nb.begin(), nb.end(), v);
    }

    double total_weight() const {
        return std::accumulate(weights_.begin(), weights_.end(), 0.0);
    }

    bool operator==(const WeightedGraph& o) const {
        return n_ == o.n_ && weights_ == o.weights_ && edges_ == o.edges_;
    }

private:
    int n_ = 1;
    std::vector<double> weights_{1.0};
    std::vector<Edge> edges_;
    std::vector<std::vector<int>> adj_{{}};
};

/// Vertex subset together with its total weight.
struct VertexSet {
    std::vector<int> members; // sorted ascending
    double weight = 0.0;

    bool contains(int v) const {
        return std::binary_search(members.begin(), members.end(), v);
    }
    int size() const { return static_cast<int>(members.size()); }
    bool operator==(const VertexSet& o) const { return members == o.members; }
};

inline VertexSet make_vertex_set(const WeightedGraph& g, std::vector<int> members) {
    std::sort(members.begin(), members.end());
    members.erase(std::unique(members.begin(), members.end()), members.end());
    double w = 0.0;
    for (int v : members) {
        if (v < 0 || v >= g.num_vertices())
            throw std::invalid_argument("vertex id out of range");
        w += g.weight(v);
    }
    return VertexSet{std::move(members), w};
}

inline bool is_independent_set(const WeightedGraph& g, const VertexSet& s) {
    for (int v : s.members)
        if (v < 0 || v >= g.num_vertices())
            throw std::invalid_argument("vertex id out of range");
    for (int u : s.members)
        for (int v : g.neighbors(u))
            if (v > u && s.contains(v)) return false;
    return true;
}

/// Maximal connected subsets, ordered by smallest member.
inline std::vector<std::vector<int>> connected_components(const WeightedGraph& g) {
    std::vector<std::vector<int>> comps;
    std::vector<char> seen(g.num_vertices(), 0);
    for (int s = 0; s < g.num_vertices(); ++s) {
        if (seen[s]) continue;
        std::vector<int> comp, stack{s};
        seen[s] = 1;
        while (!stack.empty()) {
            int u = stack.back();
            stack.pop_back();
            comp.push_back(u);
            for (int v : g.neighbors(u))
                if (!seen[v]) { seen[v] = 1; stack.push_back(v); }
        }
        std::sort(comp.begin(), comp.end());
        comps.push_back(std::move(comp));
    }
    return comps;
}

inline bool is_connected(const WeightedGraph& g) {
    return connected_components(g).size() == 1;
}

/// Connected Erdos-Renyi instance: every pair independently with probability
/// p, redrawing topology and weights together until connected.
inline WeightedGraph gen_erdos_renyi(int n, double p, bool weighted,
                                     std::uint64_t seed, int max_redraws = 1000) {
    if (n < 1) throw std::invalid_argument("n must be >= 1");
    if (!(p > 0.0) || p > 1.0) throw std::invalid_argument("p must be in (0, 1]");
    Rng rng(seed);
    for (int attempt = 0; attempt < max_redraws; ++attempt) {
        std::vector<Edge> edges;
        for (int u = 0; u < n; ++u)
            for (int v = u + 1; v < n; ++v)
                if (rng.bernoulli(p)) edges.emplace_back(u, v);
        std::vector<double> w(n, 1.0);
        if (weighted)
            for (int i = 0; i < n; ++i) w[i] = rng.uniform_pos();
        WeightedGraph g(n, std::move(w), std::move(edges));
        if (is_connected(g)) return g;
    }
    throw std::runtime_error("gen_erdos_renyi: no connected graph after " +
                             std::to_string(max_redraws) + " redraws (p too small for n)");
}

/// One series or parallel composition step applied while generating.
struct SpStep {
    bool series;  // false: parallel (two-edge path alongside the picked edge)
    Edge edge;    // edge that was expanded
    int new_vertex;
};

/// Random two-terminal series-parallel graph grown from a single edge.
/// Each step picks a uniformly random existing edge and with probability 1/2
/// either subdivides it (series) or attaches a two-edge parallel path. Both
/// operations preserve series-parallelness and simplicity and add exactly
/// one vertex. The composition steps are returned as the certificate when
/// requested.
inline WeightedGraph gen_series_parallel(int target_n, std::uint64_t seed,
                                         bool weighted = false,
                                         std::vector<SpStep>* steps_out = nullptr) {
    if (target_n < 2) throw std::invalid_argument("target_n must be >= 2");
    Rng rng(seed);
    int n = 2;
    std::vector<Edge> edges{{0, 1}};
    std::vector<SpStep> steps;
    while (n < target_n) {
        std::size_t idx = rng.uniform_int(edges.size());
        auto [u, v] = edges[idx];
        bool series = rng.bernoulli(0.5);
        int w = n++;
        if (series) {
            edges[idx] = {std::min(u, w), std::max(u, w)};
            edges.emplace_back(std::min(w, v), std::max(w, v));
        } else {
            edges.emplace_back(std::min(u, w), std::max(u, w));
            edges.emplace_back(std::min(w, v), std::max(w, v));
        }
        steps.push_back(SpStep{series, {u, v}, w});
    }
    std::vector<double> wts(n, 1.0);
    if (weighted)
        for (int i = 0; i < n; ++i) wts[i] = rng.uniform_pos();
    if (steps_out) *steps_out = std::move(steps);
    return WeightedGraph(n, std::move(wts), std::move(edges));
}

namespace detail {
inline std::runtime_error parse_error(const std::string& path, int line,
                                      const std::string& what) {
    return std::runtime_error(path + ":" + std::to_string(line) + ": " + what);
}
} // namespace detail

/// Text format: line 1 "N M"; then N lines "<vertex_id> <weight>"; then M
/// lines "<u> <v>" with u < v. '#' starts a comment.
inline WeightedGraph read_graph(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open graph file: " + path);
    int lineno = 0;
    auto next_line = [&](std::string& out) -> bool {
        std::string raw;
        while (std::getline(in, raw)) {
            ++lineno;
            auto hash = raw.find('#');
            if (hash != std::string::npos) raw.erase(hash);
            std::size_t a = raw.find_first_not_of(" \t\r");
            if (a == std::string::npos) continue;
            out = raw;
            return true;
        }
        return false;
    };

    std::string line;
    if (!next_line(line)) throw detail::parse_error(path, lineno, "missing header");
    int n = 0, m = 0;
    {
        std::istringstream ss(line);
        if (!(ss >> n >> m) || n < 1 || m < 0)
            throw detail::parse_error(path, lineno, "malformed header, expected \"N M\"");
    }
    std::vector<double> weights(n, 0.0);
    std::vector<char> have(n, 0);
    for (int i = 0; i < n; ++i) {
        if (!next_line(line)) throw detail::parse_error(path, lineno, "unexpected end of file in vertex section");
        std::istringstream ss(line);
        int id; double w;
        if (!(ss >> id >> w))
            throw detail::parse_error(path, lineno, "malformed vertex line");
        if (id < 0 || id >= n)
            throw detail::parse_error(path, lineno, "vertex id out of range");
        if (have[id])
            throw detail::parse_error(path, lineno, "duplicate vertex id");
        if (!(w > 0.0))
            throw detail::parse_error(path, lineno, "nonpositive vertex weight");
        weights[id] = w;
        have[id] = 1;
    }
    std::vector<Edge> edges;
    edges.reserve(m);
    for (int i = 0; i < m; ++i) {
        if (!next_line(line)) throw detail::parse_error(path, lineno, "unexpected end of file in edge section");
        std::istringstream ss(line);
        int u, v;
        if (!(ss >> u >> v))
            throw detail::parse_error(path, lineno, "malformed edge line");
        if (u < 0 || u >= n || v < 0 || v >= n)
            throw detail::parse_error(path, lineno, "edge endpoint out of range");
        if (u == v)
            throw detail::parse_error(path, lineno, "self-loop");
        if (u > v)
            throw detail::parse_error(path, lineno, "edge must satisfy u < v");
        for (const auto& e : edges)
            if (e.first == u && e.second == v)
                throw detail::parse_error(path, lineno, "duplicate edge");
        edges.emplace_back(u, v);
    }
    return WeightedGraph(n, std::move(weights), std::move(edges));
}

inline void write_graph(const WeightedGraph& g, std::ostream& out) {
    out << g.num_vertices() << ' ' << g.num_edges() << '\n';
    out.precision(17);
    for (int i = 0; i < g.num_vertices(); ++i)
        out << i << ' ' << g.weight(i) << '\n';
    for (const auto& [u, v] : g.edges())
        out << u << ' ' << v << '\n';
}

inline void write_graph(const WeightedGraph& g, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write graph file: " + path);
    write_graph(g, out);
}

/// Induced subgraph; keeps the order of `vertices` as the local ids 0..k-1.
/// Local edges inherit the original edge order.
struct InducedSubgraph {
    WeightedGraph graph;
    std::vector<int> to_parent; // local id -> original vertex
};

inline InducedSubgraph induced_subgraph(const WeightedGraph& g,
                                        const std::vector<int>& vertices) {
    std::vector<int> local(g.num_vertices(), -1);
    for (int i = 0; i < static_cast<int>(vertices.size()); ++i)
        local[vertices[i]] = i;
    std::vector<double> w;
    w.reserve(vertices.size());
    for (int v : vertices) w.push_back(g.weight(v));
    std::vector<Edge> edges;
    for (const auto& [u, v] : g.edges())
        if (local[u] >= 0 && local[v] >= 0)
            edges.emplace_back(std::min(local[u], local[v]),
                               std::max(local[u], local[v]));
    return InducedSubgraph{WeightedGraph(static_cast<int>(vertices.size()), std::move(w), std::move(edges)),
                           vertices};
}

} // namespace lpquts

#endif
