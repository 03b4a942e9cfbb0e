#ifndef LPQUTS_RYDBERG_HPP
#define LPQUTS_RYDBERG_HPP

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <cstdint>
#include <ostream>
#include <stdexcept>
#include <string>
#include <vector>

#include "lpquts/graph.hpp"
#include "lpquts/rng.hpp"

namespace lpquts {

// Units: rad/us for frequencies, um for distances, rad*us^-1*um^6 for the
// van der Waals coefficient (2*pi*137 GHz*um^6 in those units).
inline constexpr double kC6 = 2.0 * 3.14159265358979323846 * 137.0e3;
inline constexpr int kAtomCap = 14;
inline constexpr double kDefaultPulseDuration = 4.0; // us
inline constexpr double kDefaultDt = 1e-3;           // us
inline constexpr double kNominalBlockadeRadius = 8.0; // um, layout target scale

/// Atom positions in the plane plus the map back into the sampled cluster.
struct Register {
    std::vector<std::array<double, 2>> positions; // um
    std::vector<int> atom_to_vertex;

    int num_atoms() const { return static_cast<int>(positions.size()); }
    double distance(int i, int j) const {
        const double dx = positions[i][0] - positions[j][0];
        const double dy = positions[i][1] - positions[j][1];
        return std::sqrt(dx * dx + dy * dy);
    }
};

/// Piecewise-linear waveform given by breakpoints (t ascending).
struct PiecewiseLinear {
    std::vector<std::pair<double, double>> points;

    double operator()(double t) const {
        if (points.empty()) return 0.0;
        if (t <= points.front().first) return points.front().second;
        if (t >= points.back().first) return points.back().second;
        for (std::size_t i = 1; i < points.size(); ++i) {
            if (t <= points[i].first) {
                const auto& [t0, v0] = points[i - 1];
                const auto& [t1, v1] = points[i];
                return v0 + (v1 - v0) * (t - t0) / (t1 - t0);
            }
        }
        return points.back().second;
    }
};

/// Adiabatic-style drive: global Rabi ramp plus one detuning ramp per atom,
/// with the final-time detuning ratios equal to the weight ratios.
struct Pulse {
    double duration = kDefaultPulseDuration; // us
    PiecewiseLinear omega;                   // rad/us
    std::vector<PiecewiseLinear> detunings;  // rad/us, one per atom
    double c6 = kC6;
};

struct QuantumState {
    int num_atoms = 0;
    std::vector<std::complex<double>> amplitudes; // 2^n, bit i = atom i excited

    double norm_sq() const {
        double s = 0.0;
        for (const auto& a : amplitudes) s += std::norm(a);
        return s;
    }
};

/// Force-directed layout with per-edge spring constants proportional to the
/// edge duals (normalized to mean one), rescaled so the median edge length
/// sits at 0.8 of the nominal blockade radius.
inline Register layout(const WeightedGraph& cluster_graph,
                       const std::vector<double>& edge_duals,
                       std::uint64_t seed,
                       int iterations = 500) {
    const int n = cluster_graph.num_vertices();
    if (n > kAtomCap)
        throw std::invalid_argument("layout: cluster exceeds the emulator atom cap");
    Register reg;
    reg.atom_to_vertex.resize(n);
    for (int i = 0; i < n; ++i) reg.atom_to_vertex[i] = i;
    if (n == 1) {
        reg.positions = {{0.0, 0.0}};
        return reg;
    }

    double mean_pi = 0.0;
    for (double d : edge_duals) mean_pi += d;
    mean_pi = edge_duals.empty() ? 1.0 : mean_pi / edge_duals.size();
    std::vector<double> spring(cluster_graph.num_edges(), 1.0);
    if (mean_pi > 0.0)
        for (int e = 0; e < cluster_graph.num_edges(); ++e)
            spring[e] = edge_duals[e] / mean_pi;

    Rng rng(seed);
    std::vector<std::array<double, 2>> pos(n);
    for (auto& p : pos) p = {rng.uniform(), rng.uniform()};

    const double k = std::sqrt(1.0 / n); // Fruchterman-Reingold ideal length
    for (int it = 0; it < iterations; ++it) {
        const double temp = 0.1 * (1.0 - static_cast<double>(it) / iterations) + 1e-4;
        std::vector<std::array<double, 2>> disp(n, {0.0, 0.0});
        for (int i = 0; i < n; ++i) {
            for (int j = i + 1; j < n; ++j) {
                double dx = pos[i][0] - pos[j][0];
                double dy = pos[i][1] - pos[j][1];
                double d2 = dx * dx + dy * dy;
                if (d2 < 1e-12) { dx = 1e-6 * (i + 1); dy = 1e-6 * (j + 1); d2 = dx * dx + dy * dy; }
                const double f = k * k / d2; // repulsion / d
                disp[i][0] += f * dx; disp[i][1] += f * dy;
                disp[j][0] -= f * dx; disp[j][1] -= f * dy;
            }
        }
        for (int e = 0; e < cluster_graph.num_edges(); ++e) {
            const auto& [u, v] = cluster_graph.edges()[e];
            double dx = pos[u][0] - pos[v][0];
            double dy = pos[u][1] - pos[v][1];
            const double d = std::max(1e-9, std::sqrt(dx * dx + dy * dy));
            const double f = spring[e] * d / k; // attraction / d
            disp[u][0] -= f * dx; disp[u][1] -= f * dy;
            disp[v][0] += f * dx; disp[v][1] += f * dy;
        }
        for (int i = 0; i < n; ++i) {
            const double len = std::sqrt(disp[i][0] * disp[i][0] + disp[i][1] * disp[i][1]);
            if (len > 1e-15) {
                const double step = std::min(len, temp) / len;
                pos[i][0] += disp[i][0] * step;
                pos[i][1] += disp[i][1] * step;
            }
        }
    }

    // Rescale: median edge length -> 0.8 * nominal blockade radius.
    double scale = 1.0;
    if (cluster_graph.num_edges() > 0) {
        std::vector<double> lens;
        for (const auto& [u, v] : cluster_graph.edges()) {
            const double dx = pos[u][0] - pos[v][0];
            const double dy = pos[u][1] - pos[v][1];
            lens.push_back(std::sqrt(dx * dx + dy * dy));
        }
        std::sort(lens.begin(), lens.end());
        const double median = lens.size() % 2 == 1
                                  ? lens[lens.size() / 2]
                                  : 0.5 * (lens[lens.size() / 2 - 1] + lens[lens.size() / 2]);
        if (median > 0.0) scale = 0.8 * kNominalBlockadeRadius / median;
    } else {
        // Edgeless cluster: spread atoms far outside any blockade.
        scale = 4.0 * kNominalBlockadeRadius;
    }
    double cx = 0.0, cy = 0.0;
    for (const auto& p : pos) { cx += p[0]; cy += p[1]; }
    cx /= n; cy /= n;
    reg.positions.resize(n);
    for (int i = 0; i < n; ++i)
        reg.positions[i] = {(pos[i][0] - cx) * scale, (pos[i][1] - cy) * scale};
    return reg;
}

/// Pick the blockade radius maximizing edge agreement: target edges closer
/// than R_b plus target non-edges farther than R_b. Among the maximizing
/// distance intervals the widest one wins and its midpoint is returned,
/// with the search domain capped at [0.5*min_dist, 1.5*max_dist].
/// The matching drive amplitude is Omega_max = C6 / R_b^6.
inline std::pair<double, double> choose_blockade(const Register& reg,
                                                 const WeightedGraph& cluster_graph) {
    const int n = reg.num_atoms();
    if (n <= 1) {
        const double rb = kNominalBlockadeRadius;
        return {rb, kC6 / std::pow(rb, 6.0)};
    }
    struct PairInfo { double dist; bool is_edge; };
    std::vector<PairInfo> pairs;
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j)
            pairs.push_back({reg.distance(i, j), cluster_graph.has_edge(i, j)});
    std::sort(pairs.begin(), pairs.end(),
              [](const PairInfo& a, const PairInfo& b) { return a.dist < b.dist; });

    const double lo = 0.5 * pairs.front().dist;
    const double hi = 1.5 * pairs.back().dist;
    // Agreement is piecewise constant between consecutive distances; walk the
    // boundaries once.
    std::vector<double> bounds{lo};
    for (const auto& p : pairs) bounds.push_back(p.dist);
    bounds.push_back(hi);

    int best_score = -1;
    double best_lo = lo, best_hi = hi, best_width = -1.0;
    for (std::size_t k = 0; k + 1 < bounds.size(); ++k) {
        if (bounds[k + 1] <= bounds[k]) continue;
        const double r = 0.5 * (bounds[k] + bounds[k + 1]);
        int score = 0;
        for (const auto& p : pairs)
            score += (p.is_edge == (p.dist < r)) ? 1 : 0;
        if (score > best_score) {
            best_score = score;
            best_lo = bounds[k];
            best_hi = bounds[k + 1];
            best_width = best_hi - best_lo;
        } else if (score == best_score && bounds[k] == best_hi) {
            // extend a contiguous run of equally good intervals
            best_hi = bounds[k + 1];
            best_width = best_hi - best_lo;
        }
    }
    (void)best_width;
    const double rb = 0.5 * (best_lo + best_hi);
    return {rb, kC6 / std::pow(rb, 6.0)};
}

/// Trapezoidal Rabi ramp (up over the first 15%, down over the last 15%)
/// and linear detunings from -Delta0 to +Delta0 * w_i / max_j w_j, so the
/// final-time detuning ratios encode the weight ratios exactly. The default
/// Delta0 = 2 * Omega_max pushes the sweep deep enough into the classical
/// regime that independent-set states dominate the final distribution while
/// staying below the blockade shift of adjacent pairs.
inline Pulse build_pulse(const std::vector<double>& cluster_weights,
                         double duration, double omega_max,
                         double delta0 = 0.0) {
    for (double w : cluster_weights)
        if (!(w > 0.0)) throw std::invalid_argument("build_pulse: weights must be positive");
    if (delta0 <= 0.0) delta0 = 2.0 * omega_max;
    Pulse p;
    p.duration = duration;
    p.omega.points = {{0.0, 0.0},
                      {0.15 * duration, omega_max},
                      {0.85 * duration, omega_max},
                      {duration, 0.0}};
    double wmax = 0.0;
    for (double w : cluster_weights) wmax = std::max(wmax, w);
    p.detunings.resize(cluster_weights.size());
    for (std::size_t i = 0; i < cluster_weights.size(); ++i)
        p.detunings[i].points = {{0.0, -delta0},
                                 {duration, delta0 * cluster_weights[i] / wmax}};
    return p;
}

namespace detail {

/// One Strang step: half diagonal phase, full product of single-qubit x
/// rotations, half diagonal phase, all evaluated at the midpoint time.
inline void strang_step(std::vector<std::complex<double>>& amp,
                        int n, double t, double h,
                        const Pulse& pulse,
                        const std::vector<double>& interaction_diag,
                        std::vector<double>& det_scratch,
                        std::vector<double>& diag_scratch) {
    using cplx = std::complex<double>;
    const double tm = t + 0.5 * h;
    const std::size_t dim = amp.size();

    for (int i = 0; i < n; ++i) det_scratch[i] = pulse.detunings[i](tm);
    // diag(b) = -sum_i delta_i * bit_i(b) + interaction(b), built by the
    // lowest-set-bit recursion.
    diag_scratch[0] = 0.0;
    for (std::size_t b = 1; b < dim; ++b) {
        const int low = __builtin_ctzll(b);
        diag_scratch[b] = diag_scratch[b & (b - 1)] - det_scratch[low];
    }
    for (std::size_t b = 0; b < dim; ++b) diag_scratch[b] += interaction_diag[b];

    auto apply_diag = [&](double factor) {
        for (std::size_t b = 0; b < dim; ++b) {
            const double phi = -factor * diag_scratch[b];
            amp[b] *= cplx(std::cos(phi), std::sin(phi));
        }
    };

    apply_diag(0.5 * h);
    const double theta = 0.5 * pulse.omega(tm) * h;
    if (theta != 0.0) {
        const double c = std::cos(theta), s = std::sin(theta);
        for (int q = 0; q < n; ++q) {
            const std::size_t bit = std::size_t{1} << q;
            for (std::size_t b = 0; b < dim; ++b) {
                if (b & bit) continue;
                const cplx a0 = amp[b], a1 = amp[b | bit];
                amp[b] = c * a0 - cplx(0.0, s) * a1;
                amp[b | bit] = c * a1 - cplx(0.0, s) * a0;
            }
        }
    }
    apply_diag(0.5 * h);
}

} // namespace detail

/// Exact state-vector propagation from |0...0> under the Rydberg
/// Hamiltonian, fourth-order (Yoshida composition of Strang splittings).
inline QuantumState evolve(const Register& reg, const Pulse& pulse, double dt = kDefaultDt) {
    const int n = reg.num_atoms();
    if (n > kAtomCap) throw std::invalid_argument("evolve: atom cap exceeded");
    if (!(dt > 0.0)) throw std::invalid_argument("evolve: dt must be positive");
    if (static_cast<int>(pulse.detunings.size()) != n)
        throw std::invalid_argument("evolve: pulse/register atom count mismatch");

    const std::size_t dim = std::size_t{1} << n;
    QuantumState st;
    st.num_atoms = n;
    st.amplitudes.assign(dim, {0.0, 0.0});
    st.amplitudes[0] = 1.0;

    // Interaction energies are time independent; precompute per basis state.
    std::vector<double> pairwise(static_cast<std::size_t>(n) * n, 0.0);
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j)
            pairwise[i * n + j] = pulse.c6 / std::pow(reg.distance(i, j), 6.0);
    std::vector<double> interaction(dim, 0.0);
    for (std::size_t b = 1; b < dim; ++b) {
        const int low = __builtin_ctzll(b);
        double v = interaction[b & (b - 1)];
        for (int j = low + 1; j < n; ++j)
            if (b & (std::size_t{1} << j)) v += pairwise[low * n + j];
        interaction[b] = v;
    }

    std::vector<double> det_scratch(n), diag_scratch(dim);
    const double w1 = 1.0 / (2.0 - std::cbrt(2.0));
    const double w0 = 1.0 - 2.0 * w1;
    const long long steps = static_cast<long long>(std::ceil(pulse.duration / dt - 1e-12));
    double t = 0.0;
    for (long long s = 0; s < steps; ++s) {
        const double h = std::min(dt, pulse.duration - t);
        detail::strang_step(st.amplitudes, n, t, w1 * h, pulse, interaction, det_scratch, diag_scratch);
        detail::strang_step(st.amplitudes, n, t + w1 * h, w0 * h, pulse, interaction, det_scratch, diag_scratch);
        detail::strang_step(st.amplitudes, n, t + (w1 + w0) * h, w1 * h, pulse, interaction, det_scratch, diag_scratch);
        t += h;
    }
    return st;
}

/// IID draws from |amplitude|^2; bit i of the result is atom i.
inline std::vector<std::uint32_t> measure(const QuantumState& st, int shots,
                                          std::uint64_t seed) {
    if (shots < 1) throw std::invalid_argument("shots must be >= 1");
    std::vector<double> cdf(st.amplitudes.size());
    double acc = 0.0;
    for (std::size_t b = 0; b < st.amplitudes.size(); ++b) {
        acc += std::norm(st.amplitudes[b]);
        cdf[b] = acc;
    }
    Rng rng(seed);
    std::vector<std::uint32_t> out;
    out.reserve(shots);
    for (int s = 0; s < shots; ++s) {
        const double u = rng.uniform() * acc;
        const auto it = std::lower_bound(cdf.begin(), cdf.end(), u);
        out.push_back(static_cast<std::uint32_t>(
            std::min<std::size_t>(cdf.size() - 1, it - cdf.begin())));
    }
    return out;
}

inline std::string to_bitstring(std::uint32_t mask, int n) {
    std::string s(n, '0');
    for (int i = 0; i < n; ++i)
        if (mask & (1u << i)) s[i] = '1';
    return s;
}

/// Text manifest of a register/pulse pair for inspection and regression
/// diffing.
inline void dump_manifest(const Register& reg, const Pulse& pulse, std::ostream& out) {
    out.precision(12);
    out << "atoms " << reg.num_atoms() << "\n";
    for (int i = 0; i < reg.num_atoms(); ++i)
        out << "pos " << i << ' ' << reg.positions[i][0] << ' ' << reg.positions[i][1] << "\n";
    out << "duration " << pulse.duration << "\n";
    out << "omega";
    for (const auto& [t, v] : pulse.omega.points) out << ' ' << t << ':' << v;
    out << "\n";
    for (int i = 0; i < reg.num_atoms(); ++i) {
        out << "delta " << i;
        for (const auto& [t, v] : pulse.detunings[i].points) out << ' ' << t << ':' << v;
        out << "\n";
    }
}

} // namespace lpquts

#endif
