#ifndef LPQUTS_EXACT_HPP
#define LPQUTS_EXACT_HPP

#include <chrono>
#include <cmath>
#include <optional>
#include <stdexcept>
#include <vector>

#include "lpquts/graph.hpp"
#include "lpquts/lp.hpp"
#include "lpquts/samplers.hpp"

namespace lpquts {

struct ExactOptions {
    int max_vertices = 60;
    double time_budget_seconds = 120.0;
};

namespace detail {

class ExactSearch {
public:
    ExactSearch(const WeightedGraph& g, double budget)
        : g_(g), deadline_(std::chrono::steady_clock::now() +
                           std::chrono::duration_cast<std::chrono::steady_clock::duration>(
                               std::chrono::duration<double>(budget))) {}

    VertexSet run() {
        best_ = maximalize(g_, VertexSet{});
        std::vector<int> alive(g_.num_vertices());
        for (int i = 0; i < g_.num_vertices(); ++i) alive[i] = i;
        branch(std::move(alive), {});
        return best_;
    }

private:
    void check_time() const {
        if (std::chrono::steady_clock::now() > deadline_)
            throw std::runtime_error("exact_mwis: time budget exceeded");
    }

    // alive: candidate vertices; included: vertices already fixed in.
    void branch(std::vector<int> alive, std::vector<int> included) {
        check_time();
        double base = 0.0;
        for (int v : included) base += g_.weight(v);
        if (alive.empty()) {
            commit(included, base);
            return;
        }
        auto sub = induced_subgraph(g_, alive);
        const auto lp = build_rlp(sub.graph);
        const auto sol = solve_lp(lp);
        if (base + sol.objective <= best_.weight + 1e-9) return;

        // The edge relaxation is persistent: integral coordinates of an
        // optimal basic solution can be fixed without losing optimality.
        std::vector<char> drop(sub.graph.num_vertices(), 0);
        std::vector<int> fixed_in;
        bool any_fixed = false;
        for (int i = 0; i < sub.graph.num_vertices(); ++i) {
            if (sol.x[i] > 1.0 - 1e-7) {
                fixed_in.push_back(i);
                any_fixed = true;
            } else if (sol.x[i] < 1e-7) {
                drop[i] = 1;
                any_fixed = true;
            }
        }
        for (int i : fixed_in) {
            drop[i] = 1;
            for (int w : sub.graph.neighbors(i)) drop[w] = 1;
            included.push_back(sub.to_parent[i]);
        }
        if (any_fixed) {
            std::vector<int> next;
            for (int i = 0; i < sub.graph.num_vertices(); ++i)
                if (!drop[i]) next.push_back(sub.to_parent[i]);
            branch(std::move(next), std::move(included));
            return;
        }

        // All-fractional LP: branch on the heaviest fractional vertex.
        int pick = 0;
        for (int i = 1; i < sub.graph.num_vertices(); ++i)
            if (sub.graph.weight(i) > sub.graph.weight(pick)) pick = i;

        // Include branch: remove the closed neighborhood.
        {
            std::vector<char> rm(sub.graph.num_vertices(), 0);
            rm[pick] = 1;
            for (int w : sub.graph.neighbors(pick)) rm[w] = 1;
            std::vector<int> next;
            for (int i = 0; i < sub.graph.num_vertices(); ++i)
                if (!rm[i]) next.push_back(sub.to_parent[i]);
            auto inc = included;
            inc.push_back(sub.to_parent[pick]);
            branch(std::move(next), std::move(inc));
        }
        // Exclude branch.
        {
            std::vector<int> next;
            for (int i = 0; i < sub.graph.num_vertices(); ++i)
                if (i != pick) next.push_back(sub.to_parent[i]);
            branch(std::move(next), std::move(included));
        }
    }

    void commit(const std::vector<int>& included, double weight) {
        if (weight > best_.weight + 1e-12) {
            best_ = make_vertex_set(g_, included);
        }
    }

    const WeightedGraph& g_;
    VertexSet best_;
    std::chrono::steady_clock::time_point deadline_;
};

} // namespace detail

/// Exact MWIS by branch and bound with the edge-relaxation objective as the
/// bound: include a vertex and remove its closed neighborhood, or exclude
/// it. Guarded by size and wall-clock budget since the search is
/// exponential in the worst case.
inline VertexSet exact_mwis(const WeightedGraph& g, const ExactOptions& opt = {}) {
    if (g.num_vertices() > opt.max_vertices)
        throw std::invalid_argument("exact_mwis: size guard exceeded (n > " +
                                    std::to_string(opt.max_vertices) + ")");
    detail::ExactSearch search(g, opt.time_budget_seconds);
    return search.run();
}

/// Sample-to-target: samples needed for 99% confidence of a cost within
/// eps of optimal; empty when no sample reaches the target (the caller
/// omits the instance).
inline std::optional<double> stt(const std::vector<double>& sample_costs,
                                 double c_opt, double epsilon) {
    if (!(c_opt > 0.0)) throw std::invalid_argument("stt: c_opt must be positive");
    if (epsilon < 0.0 || epsilon >= 1.0) throw std::invalid_argument("stt: epsilon in [0,1)");
    if (sample_costs.empty()) return std::nullopt;
    const double target = c_opt * (1.0 - epsilon);
    std::size_t hits = 0;
    for (double c : sample_costs)
        if (c >= target - 1e-12) ++hits;
    const double p = static_cast<double>(hits) / sample_costs.size();
    if (p == 0.0) return std::nullopt;
    if (p >= 1.0) return 1.0;
    return std::log(0.01) / std::log(1.0 - p);
}

inline double approximation_ratio(const SampleSet& samples, double c_opt) {
    if (!(c_opt > 0.0)) throw std::invalid_argument("approximation_ratio: c_opt must be positive");
    if (samples.samples.empty())
        throw std::invalid_argument("approximation_ratio: empty sample set");
    double s = 0.0;
    for (const auto& vs : samples.samples) s += vs.weight;
    return s / (samples.samples.size() * c_opt);
}

inline double optimality_gap(double best_cost, double c_opt) {
    if (!(c_opt > 0.0)) throw std::invalid_argument("optimality_gap: c_opt must be positive");
    const double g = 1.0 - best_cost / c_opt;
    return std::min(1.0, std::max(0.0, g));
}

} // namespace lpquts

#endif
