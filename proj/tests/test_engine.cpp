#include <catch2/catch_amalgamated.hpp>

#include "lpquts/engine.hpp"
#include "oracles.hpp"

using namespace lpquts;

namespace {

WeightedGraph c5() {
    return WeightedGraph::unit_weights(5, {{0, 1}, {1, 2}, {2, 3}, {3, 4}, {0, 4}});
}

EngineConfig small_config(SamplerKind kind = SamplerKind::sa) {
    EngineConfig cfg;
    cfg.sampler = kind;
    cfg.shots = 30;
    cfg.sa_sweeps = 40;
    cfg.seed = 5;
    return cfg;
}

void check_report_invariants(const WeightedGraph& g, const SolveReport& rep,
                             double tol = 1e-9) {
    REQUIRE_FALSE(rep.iterations.empty());
    CHECK(is_independent_set(g, rep.best_set));
    CHECK(rep.best_set.weight == Catch::Approx(rep.lower_bound).margin(tol));
    for (std::size_t i = 0; i < rep.iterations.size(); ++i) {
        const auto& it = rep.iterations[i];
        CHECK(it.lower_bound <= it.upper_bound + tol);
        CHECK(it.reduced_edge_ratio >= 0.0);
        CHECK(it.reduced_edge_ratio <= 1.0);
        if (i > 0) {
            CHECK(it.upper_bound <= rep.iterations[i - 1].upper_bound + tol);
            CHECK(it.lower_bound >= rep.iterations[i - 1].lower_bound - tol);
        }
    }
    if (rep.converged)
        CHECK(rep.upper_bound - rep.lower_bound <=
              1e-9 * std::max(1.0, std::abs(rep.upper_bound)) + 1e-12);
}

} // namespace

TEST_CASE("c5 trace: upper 2.5 then 2, converged at the exact optimum") {
    for (auto kind : {SamplerKind::greedy, SamplerKind::sa, SamplerKind::rydberg}) {
        auto rep = lp_quts(c5(), small_config(kind));
        REQUIRE(rep.iterations.size() == 2);
        CHECK(rep.iterations[0].upper_bound == Catch::Approx(2.5).margin(1e-9));
        CHECK(rep.iterations[0].cuts_added >= 1);
        CHECK(rep.iterations[1].upper_bound == Catch::Approx(2.0).margin(1e-9));
        CHECK(rep.converged);
        CHECK(rep.reason == Termination::converged);
        CHECK(rep.best_set.weight == 2.0);
        check_report_invariants(c5(), rep);
        // the added cut is the 5-cycle itself
        bool has_c5 = false;
        for (const auto& c : rep.cut_pool) has_c5 |= c.vertices.size() == 5;
        CHECK(has_c5);
    }
}

TEST_CASE("bipartite instances converge in one iteration") {
    Rng rng(3);
    for (int trial = 0; trial < 20; ++trial) {
        std::vector<Edge> edges;
        const int a = 3 + trial % 3, b = 3 + (trial / 3) % 3;
        for (int u = 0; u < a; ++u)
            for (int v = 0; v < b; ++v)
                if (rng.bernoulli(0.5)) edges.emplace_back(u, a + v);
        if (edges.empty()) edges.emplace_back(0, a);
        std::vector<double> w(a + b);
        for (double& wi : w) wi = 0.2 + rng.uniform();
        WeightedGraph g(a + b, std::move(w), std::move(edges));

        auto rep = lp_quts(g, small_config());
        CHECK(rep.iterations.size() == 1);
        CHECK(rep.converged);
        CHECK(rep.upper_bound == Catch::Approx(oracles::brute_force_mwis(g)).margin(1e-9));
        check_report_invariants(g, rep);
    }
}

TEST_CASE("bound sandwich against the exact oracle") {
    for (std::uint64_t seed = 0; seed < 15; ++seed) {
        auto g = gen_erdos_renyi(12, 0.35, seed % 2 == 0, 4000 + seed);
        const double opt = oracles::brute_force_mwis(g);
        auto cfg = small_config();
        cfg.seed = seed;
        auto rep = lp_quts(g, cfg);
        check_report_invariants(g, rep);
        CHECK(rep.lower_bound <= opt + 1e-9);
        CHECK(rep.upper_bound >= opt - 1e-9);
        // cuts valid for every independent set
        for (const auto& cut : rep.cut_pool) {
            const double rhs = (static_cast<double>(cut.vertices.size()) - 1.0) / 2.0;
            for (std::uint32_t s : oracles::enumerate_independent_sets(g)) {
                int inside = 0;
                for (int v : cut.vertices) inside += (s >> v) & 1;
                CHECK(inside <= rhs);
            }
        }
    }
}

TEST_CASE("series-parallel instances close the gap completely") {
    for (int n : {10, 20, 30}) {
        for (std::uint64_t seed = 0; seed < 3; ++seed) {
            auto g = gen_series_parallel(n, 100 + seed, seed % 2 == 1);
            auto cfg = small_config();
            cfg.seed = seed;
            auto rep = lp_quts(g, cfg);
            const double opt = exact_mwis(g).weight;
            CHECK(rep.upper_bound == Catch::Approx(opt).margin(1e-6));
            check_report_invariants(g, rep);
        }
    }
}

TEST_CASE("engine is deterministic") {
    auto g = gen_erdos_renyi(20, 0.4, true, 77);
    auto cfg = small_config();
    auto a = lp_quts(g, cfg);
    auto b = lp_quts(g, cfg);
    REQUIRE(a.iterations.size() == b.iterations.size());
    CHECK(a.best_set == b.best_set);
    CHECK(a.all_sample_costs == b.all_sample_costs);
    for (std::size_t i = 0; i < a.iterations.size(); ++i) {
        CHECK(a.iterations[i].upper_bound == b.iterations[i].upper_bound);
        CHECK(a.iterations[i].cuts_added == b.iterations[i].cuts_added);
    }
}

TEST_CASE("rydberg sampler falls back to sa above the atom cap") {
    auto g = gen_erdos_renyi(25, 0.5, false, 31);
    auto cfg = small_config(SamplerKind::rydberg);
    cfg.max_iterations = 2;
    cfg.patience = 2;
    cfg.quantum_cap = 3;
    auto rep = lp_quts(g, cfg);
    REQUIRE_FALSE(rep.cluster_samplers_used.empty());
    bool saw_fallback = false;
    for (const auto& used : rep.cluster_samplers_used)
        saw_fallback |= used.find("sa") != std::string::npos;
    CHECK(saw_fallback);
    check_report_invariants(g, rep);
}

TEST_CASE("alpha-zero hook and budget accounting") {
    auto g = gen_erdos_renyi(15, 0.4, false, 55);
    auto cfg = small_config();
    cfg.force_alpha_zero = true;
    auto rep = lp_quts(g, cfg);
    check_report_invariants(g, rep);
    CHECK(rep.total_shots == static_cast<int>(rep.iterations.size()) * cfg.shots);
    CHECK(rep.all_sample_costs.size() == static_cast<std::size_t>(rep.total_shots));
}

TEST_CASE("patience terminates stalled runs") {
    // K4 is not t-perfect: odd-cycle cuts cannot close the gap, so the run
    // must stop on patience (or no new cuts) within max_iterations.
    auto g = gen_erdos_renyi(4, 1.0, false, 2);
    auto cfg = small_config();
    cfg.max_iterations = 20;
    cfg.patience = 3;
    auto rep = lp_quts(g, cfg);
    CHECK_FALSE(rep.converged);
    CHECK(static_cast<int>(rep.iterations.size()) < cfg.max_iterations);
    CHECK(rep.lower_bound == 1.0);             // exact MIS of K4
    CHECK(rep.upper_bound >= 4.0 / 3.0 - 1e-9); // odd-cycle bound on K4
    check_report_invariants(g, rep);
}

TEST_CASE("config validation") {
    EngineConfig cfg;
    cfg.max_iterations = 0;
    CHECK_THROWS_AS(lp_quts(c5(), cfg), std::invalid_argument);
    cfg = EngineConfig{};
    cfg.patience = 50;
    CHECK_THROWS_AS(lp_quts(c5(), cfg), std::invalid_argument);
    cfg = EngineConfig{};
    CHECK(cfg.effective_max_subgraph(100) == 40);
    CHECK(cfg.effective_max_subgraph(12) == 12);
    cfg.max_subgraph = 8;
    CHECK(cfg.effective_max_subgraph(100) == 8);
}
