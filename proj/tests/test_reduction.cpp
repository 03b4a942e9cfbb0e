#include <catch2/catch_amalgamated.hpp>

#include "lpquts/lp.hpp"
#include "lpquts/reduction.hpp"
#include "oracles.hpp"

using namespace lpquts;

namespace {

RlpSolution solved(const WeightedGraph& g) { return solve_lp(build_rlp(g)); }

} // namespace

TEST_CASE("triangle keeps its binding edges and forms one cluster") {
    auto g = WeightedGraph::unit_weights(3, {{0, 1}, {1, 2}, {0, 2}});
    auto r = build_reduced(g, solved(g));
    CHECK_FALSE(r.kept_edges.empty());
    REQUIRE(r.clusters.size() == 1);
    CHECK(r.clusters[0] == std::vector<int>{0, 1, 2});
    CHECK(r.edge_ratio() > 0.0);
    CHECK(r.edge_ratio() <= 1.0);
}

TEST_CASE("zero-dual edges are dropped and uncovered x>0 vertices become singletons") {
    auto g = WeightedGraph(2, {3.0, 1.0}, {{0, 1}});
    RlpSolution sol;
    sol.x = {1.0, 0.0};
    sol.edge_duals = {0.0};
    sol.optimal = true;
    auto r = build_reduced(g, sol);
    CHECK(r.kept_edges.empty());
    CHECK(r.edge_ratio() == 0.0);
    CHECK(r.fractional_singletons == std::vector<int>{0});
    REQUIRE(r.clusters.size() == 1);
    CHECK(r.clusters[0] == std::vector<int>{0});
}

TEST_CASE("slack edges between zero vertices are never kept") {
    // path with heavy endpoints: x = (1,0,0,1); the middle edge has slack
    // 1 - 0 - 0 = 1 and a complementary dual of zero.
    auto g = WeightedGraph(4, {5.0, 1.0, 1.0, 5.0}, {{0, 1}, {1, 2}, {2, 3}});
    auto sol = solved(g);
    CHECK(sol.objective == Catch::Approx(10.0).margin(1e-9));
    auto r = build_reduced(g, sol);
    for (const auto& de : r.kept_edges) CHECK(de.edge != Edge{1, 2});
    auto by_row = build_reduced_by_row(g, sol);
    for (const auto& de : by_row.kept_edges) CHECK(de.edge != Edge{1, 2});
}

TEST_CASE("kept duals are positive and clusters partition the covered vertices") {
    for (std::uint64_t seed = 0; seed < 40; ++seed) {
        auto g = gen_erdos_renyi(14, 0.35, seed % 2 == 0, 600 + seed);
        auto sol = solved(g);
        auto r = build_reduced(g, sol);
        for (const auto& de : r.kept_edges) {
            CHECK(de.pi > kTolDual);
            CHECK(g.has_edge(de.edge.first, de.edge.second));
        }
        std::vector<int> seen;
        for (const auto& cl : r.clusters) {
            REQUIRE_FALSE(cl.empty());
            seen.insert(seen.end(), cl.begin(), cl.end());
        }
        std::sort(seen.begin(), seen.end());
        CHECK(std::adjacent_find(seen.begin(), seen.end()) == seen.end());
        // clusters ordered by smallest member
        for (std::size_t i = 1; i < r.clusters.size(); ++i)
            CHECK(r.clusters[i - 1][0] < r.clusters[i][0]);
        // every kept edge lies inside one cluster
        for (const auto& de : r.kept_edges) {
            bool inside = false;
            for (const auto& cl : r.clusters)
                inside |= std::binary_search(cl.begin(), cl.end(), de.edge.first) &&
                          std::binary_search(cl.begin(), cl.end(), de.edge.second);
            CHECK(inside);
        }
    }
}

TEST_CASE("row tightness variant agrees on the triangle") {
    auto g = WeightedGraph::unit_weights(3, {{0, 1}, {1, 2}, {0, 2}});
    auto sol = solved(g);
    auto by_row = build_reduced_by_row(g, sol);
    CHECK(by_row.kept_edges.size() == 3); // x=1/2 everywhere, all rows tight
    REQUIRE(by_row.clusters.size() == 1);
    CHECK(by_row.clusters[0].size() == 3);
}

TEST_CASE("partition_oversized enforces the size cap") {
    for (std::uint64_t seed = 0; seed < 20; ++seed) {
        auto g = gen_erdos_renyi(20, 0.4, true, 800 + seed);
        auto r = build_reduced(g, solved(g));
        for (int cap : {3, 5, 8}) {
            auto part = partition_oversized(r, cap);
            for (const auto& cl : part.clusters)
                CHECK(static_cast<int>(cl.size()) <= cap);
            CHECK(part.kept_edges.size() <= r.kept_edges.size());
            // removed edges were not re-added
            for (const auto& de : part.kept_edges) {
                bool present = false;
                for (const auto& orig : r.kept_edges) present |= orig.edge == de.edge;
                CHECK(present);
            }
        }
    }
    CHECK_THROWS_AS(partition_oversized(build_reduced(gen_erdos_renyi(5, 0.5, false, 1),
                                                      solved(gen_erdos_renyi(5, 0.5, false, 1))),
                                        0),
                    std::invalid_argument);
}

TEST_CASE("partition removes minimum-dual edges first") {
    // path of two triangles sharing structure via chosen duals
    auto g = WeightedGraph::unit_weights(4, {{0, 1}, {1, 2}, {2, 3}});
    RlpSolution sol;
    sol.x = {0.5, 0.5, 0.5, 0.5};
    sol.edge_duals = {0.4, 0.1, 0.3};
    sol.optimal = true;
    ReducedGraph r;
    r.parent = &g;
    for (int e = 0; e < 3; ++e)
        r.kept_edges.push_back(DualEdge{g.edges()[e], sol.edge_duals[e]});
    r.clusters = {{0, 1, 2, 3}};
    auto part = partition_oversized(r, 2);
    // the 0.1 edge (1,2) goes first, splitting into two pairs
    REQUIRE(part.clusters.size() == 2);
    CHECK(part.clusters[0] == std::vector<int>{0, 1});
    CHECK(part.clusters[1] == std::vector<int>{2, 3});
    for (const auto& de : part.kept_edges) CHECK(de.edge != Edge{1, 2});
}

TEST_CASE("dual tie broken lexicographically") {
    auto g = WeightedGraph::unit_weights(3, {{0, 1}, {1, 2}});
    ReducedGraph r;
    r.parent = &g;
    r.kept_edges = {DualEdge{{0, 1}, 0.2}, DualEdge{{1, 2}, 0.2}};
    r.clusters = {{0, 1, 2}};
    auto part = partition_oversized(r, 2);
    REQUIRE(part.kept_edges.size() == 1);
    CHECK(part.kept_edges[0].edge == Edge{1, 2}); // (0,1) removed first
}
