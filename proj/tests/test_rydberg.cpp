#include <catch2/catch_amalgamated.hpp>

#include <sstream>

#include "lpquts/rydberg.hpp"
#include "oracles.hpp"

using namespace lpquts;

namespace {

WeightedGraph c5() {
    return WeightedGraph::unit_weights(5, {{0, 1}, {1, 2}, {2, 3}, {3, 4}, {0, 4}});
}

Pulse constant_drive(int atoms, double omega, double delta, double duration) {
    Pulse p;
    p.duration = duration;
    p.omega.points = {{0.0, omega}, {duration, omega}};
    p.detunings.assign(atoms, PiecewiseLinear{{{0.0, delta}, {duration, delta}}});
    return p;
}

double prob(const QuantumState& st, std::uint32_t mask) {
    return std::norm(st.amplitudes[mask]);
}

} // namespace

TEST_CASE("piecewise linear waveform interpolates and clamps") {
    PiecewiseLinear f{{{0.0, 0.0}, {1.0, 2.0}, {3.0, 2.0}}};
    CHECK(f(-1.0) == 0.0);
    CHECK(f(0.5) == Catch::Approx(1.0));
    CHECK(f(2.0) == 2.0);
    CHECK(f(5.0) == 2.0);
}

TEST_CASE("single atom undergoes exact Rabi oscillations") {
    Register reg;
    reg.positions = {{0.0, 0.0}};
    reg.atom_to_vertex = {0};
    const double omega = 3.0;
    for (double t : {0.3, 1.0, 2.5, 4.0}) {
        auto st = evolve(reg, constant_drive(1, omega, 0.0, t));
        CHECK(prob(st, 1) == Catch::Approx(std::pow(std::sin(0.5 * omega * t), 2))
                                 .margin(1e-6));
        CHECK(st.norm_sq() == Catch::Approx(1.0).margin(1e-10));
    }
}

TEST_CASE("detuned single atom matches the generalized Rabi formula") {
    Register reg;
    reg.positions = {{0.0, 0.0}};
    reg.atom_to_vertex = {0};
    const double omega = 2.0, delta = 1.5, t = 3.0;
    auto st = evolve(reg, constant_drive(1, omega, delta, t));
    const double g2 = omega * omega + delta * delta;
    const double expected = omega * omega / g2 * std::pow(std::sin(0.5 * std::sqrt(g2) * t), 2);
    CHECK(prob(st, 1) == Catch::Approx(expected).margin(1e-6));
}

TEST_CASE("blockaded pair never doubly excites") {
    Register reg;
    const double d = 0.5 * kNominalBlockadeRadius;
    reg.positions = {{0.0, 0.0}, {d, 0.0}};
    reg.atom_to_vertex = {0, 1};
    const double omega = kC6 / std::pow(kNominalBlockadeRadius, 6.0);
    auto pulse = build_pulse({1.0, 1.0}, kDefaultPulseDuration, omega);
    auto st = evolve(reg, pulse);
    CHECK(prob(st, 0b11) < 0.01);
    CHECK(st.norm_sq() == Catch::Approx(1.0).margin(1e-8));
    // one of the single excitations dominates the ground state
    CHECK(prob(st, 0b01) + prob(st, 0b10) > prob(st, 0b00));
}

TEST_CASE("split-operator propagator matches dense RK4 integration") {
    // two- and three-atom registers, full adiabatic pulse
    for (int n : {2, 3}) {
        Register reg;
        for (int i = 0; i < n; ++i)
            reg.positions.push_back({6.4 * i, 1.5 * (i % 2)});
        reg.atom_to_vertex.resize(n);
        std::vector<double> w(n);
        for (int i = 0; i < n; ++i) w[i] = 1.0 + 0.3 * i;
        const double omega = kC6 / std::pow(kNominalBlockadeRadius, 6.0);
        auto pulse = build_pulse(w, kDefaultPulseDuration, omega);
        auto fast = evolve(reg, pulse, 1e-3);
        auto dense = oracles::dense_evolve(reg, pulse, 1e-4);
        REQUIRE(fast.amplitudes.size() == dense.amplitudes.size());
        for (std::size_t b = 0; b < fast.amplitudes.size(); ++b)
            CHECK(std::norm(fast.amplitudes[b]) ==
                  Catch::Approx(std::norm(dense.amplitudes[b])).margin(1e-6));
    }
}

TEST_CASE("halving dt leaves outcome probabilities unchanged to 1e-6") {
    auto g = c5();
    std::vector<double> duals(5, 0.5);
    auto reg = layout(g, duals, 7);
    auto [rb, omega] = choose_blockade(reg, g);
    auto pulse = build_pulse(g.weights(), kDefaultPulseDuration, omega);
    auto coarse = evolve(reg, pulse, 1e-3);
    auto fine = evolve(reg, pulse, 5e-4);
    CHECK(coarse.norm_sq() == Catch::Approx(1.0).margin(1e-8));
    for (std::size_t b = 0; b < coarse.amplitudes.size(); ++b)
        CHECK(std::norm(coarse.amplitudes[b]) ==
              Catch::Approx(std::norm(fine.amplitudes[b])).margin(1e-6));
}

TEST_CASE("layout is deterministic and scales the median edge") {
    auto g = c5();
    std::vector<double> duals(5, 1.0);
    auto a = layout(g, duals, 3);
    auto b = layout(g, duals, 3);
    REQUIRE(a.num_atoms() == 5);
    for (int i = 0; i < 5; ++i) {
        CHECK(a.positions[i][0] == b.positions[i][0]);
        CHECK(a.positions[i][1] == b.positions[i][1]);
    }
    std::vector<double> lens;
    for (const auto& [u, v] : g.edges()) lens.push_back(a.distance(u, v));
    std::sort(lens.begin(), lens.end());
    CHECK(lens[2] == Catch::Approx(0.8 * kNominalBlockadeRadius).margin(1e-6));
    CHECK_THROWS_AS(layout(gen_erdos_renyi(15, 0.5, false, 1),
                           std::vector<double>(), 1),
                    std::invalid_argument);
}

TEST_CASE("choose_blockade places k2 at 0.8 of the blockade radius") {
    auto k2 = WeightedGraph::unit_weights(2, {{0, 1}});
    auto reg = layout(k2, {1.0}, 5);
    const double d = reg.distance(0, 1);
    CHECK(d == Catch::Approx(0.8 * kNominalBlockadeRadius).margin(1e-6));
    auto [rb, omega] = choose_blockade(reg, k2);
    CHECK(d == Catch::Approx(0.8 * rb).margin(1e-6));
    CHECK(omega == Catch::Approx(kC6 / std::pow(rb, 6.0)));
}

TEST_CASE("choose_blockade separates edges from non-edges on a clean layout") {
    // path graph on a line: edges at 6, the non-adjacent pairs at >= 12
    auto p3 = WeightedGraph::unit_weights(3, {{0, 1}, {1, 2}});
    Register reg;
    reg.positions = {{0.0, 0.0}, {6.0, 0.0}, {12.0, 0.0}};
    reg.atom_to_vertex = {0, 1, 2};
    auto [rb, omega] = choose_blockade(reg, p3);
    CHECK(rb > 6.0);
    CHECK(rb < 12.0);
}

TEST_CASE("build_pulse shapes: trapezoid drive, weight-ratio detunings") {
    auto p = build_pulse({2.0, 1.0}, 4.0, 10.0);
    CHECK(p.omega(0.0) == 0.0);
    CHECK(p.omega(0.6) == 10.0);  // past the 15% ramp
    CHECK(p.omega(2.0) == 10.0);
    CHECK(p.omega(4.0) == 0.0);
    CHECK(p.omega(0.3) == Catch::Approx(5.0)); // halfway up the ramp
    CHECK(p.detunings[0](0.0) == -20.0);       // default Delta0 = 2 Omega_max
    CHECK(p.detunings[0](4.0) == 20.0);        // w / wmax = 1
    CHECK(p.detunings[1](4.0) == 10.0);        // w / wmax = 1/2
    CHECK_THROWS_AS(build_pulse({1.0, -1.0}, 4.0, 10.0), std::invalid_argument);
}

TEST_CASE("c5 final state concentrates on maximum independent sets") {
    auto g = c5();
    std::vector<double> duals(5, 1.0);
    auto reg = layout(g, duals, 21);
    auto [rb, omega] = choose_blockade(reg, g);
    auto pulse = build_pulse(g.weights(), kDefaultPulseDuration, omega);
    auto st = evolve(reg, pulse);

    auto mis_masks = [&] {
        std::vector<std::uint32_t> out;
        for (std::uint32_t m : oracles::enumerate_independent_sets(g))
            if (__builtin_popcount(m) == 2) out.push_back(m);
        return out;
    }();
    REQUIRE(mis_masks.size() == 5);

    std::vector<std::pair<double, std::uint32_t>> ranked;
    for (std::uint32_t b = 0; b < 32; ++b) ranked.emplace_back(prob(st, b), b);
    std::sort(ranked.rbegin(), ranked.rend());
    // the two most likely outcomes are maximum independent sets
    for (int k = 0; k < 2; ++k)
        CHECK(std::count(mis_masks.begin(), mis_masks.end(), ranked[k].second) == 1);
    double mis_prob = 0.0;
    for (auto m : mis_masks) mis_prob += prob(st, m);
    CHECK(mis_prob > 0.5);
}

TEST_CASE("measure is deterministic and follows the amplitudes") {
    QuantumState st;
    st.num_atoms = 1;
    st.amplitudes = {std::sqrt(0.25), std::sqrt(0.75)};
    auto a = measure(st, 4000, 17);
    CHECK(a == measure(st, 4000, 17));
    const int ones = static_cast<int>(std::count(a.begin(), a.end(), 1u));
    CHECK(ones > 2800);
    CHECK(ones < 3200);
    CHECK_THROWS_AS(measure(st, 0, 1), std::invalid_argument);
}

TEST_CASE("manifest dump lists atoms and waveforms") {
    auto k2 = WeightedGraph::unit_weights(2, {{0, 1}});
    auto reg = layout(k2, {1.0}, 5);
    auto pulse = build_pulse(k2.weights(), 4.0, 3.0);
    std::ostringstream ss;
    dump_manifest(reg, pulse, ss);
    const std::string out = ss.str();
    CHECK(out.find("atoms 2") != std::string::npos);
    CHECK(out.find("duration 4") != std::string::npos);
    CHECK(out.find("omega") != std::string::npos);
    CHECK(out.find("delta 1") != std::string::npos);
}

TEST_CASE("evolve validates its inputs") {
    Register reg;
    reg.positions = {{0.0, 0.0}};
    reg.atom_to_vertex = {0};
    CHECK_THROWS_AS(evolve(reg, constant_drive(2, 1.0, 0.0, 1.0)), std::invalid_argument);
    CHECK_THROWS_AS(evolve(reg, constant_drive(1, 1.0, 0.0, 1.0), 0.0), std::invalid_argument);
}
