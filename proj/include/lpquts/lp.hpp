#ifndef LPQUTS_LP_HPP
#define LPQUTS_LP_HPP

#include <cmath>
#include <limits>
#include <stdexcept>
#include <vector>

#include "lpquts/graph.hpp"

namespace lpquts {

inline constexpr double kTolLp = 1e-9;
inline constexpr double kTolDual = 1e-7;

/// One packing row a.x <= rhs with 0/1 coefficients stored sparse.
struct SparseRow {
    std::vector<int> vars; // ascending
    double rhs = 1.0;
};

/// max c.x subject to rows and variable bounds [0, 1].
struct LinearProgram {
    int num_vars = 0;
    std::vector<double> objective;
    std::vector<SparseRow> rows; // edge rows first, then cut rows
    int num_edge_rows = 0;
};

struct RlpSolution {
    std::vector<double> x;
    double objective = 0.0;
    std::vector<double> edge_duals;  // aligned with graph edge order
    std::vector<double> cycle_duals; // aligned with cut insertion order
    bool optimal = false;

    /// Objective of the dual solution implied by the row duals; the duals of
    /// the x <= 1 bounds are the nonnegative parts of the reduced weights.
    double dual_objective(const LinearProgram& lp) const {
        double d = 0.0;
        for (int i = 0; i < lp.num_edge_rows; ++i)
            d += edge_duals[i] * lp.rows[i].rhs;
        for (std::size_t i = 0; i < cycle_duals.size(); ++i)
            d += cycle_duals[i] * lp.rows[lp.num_edge_rows + i].rhs;
        std::vector<double> covered(lp.num_vars, 0.0);
        for (std::size_t i = 0; i < lp.rows.size(); ++i) {
            const double y = i < static_cast<std::size_t>(lp.num_edge_rows)
                                 ? edge_duals[i]
                                 : cycle_duals[i - lp.num_edge_rows];
            if (y == 0.0) continue;
            for (int v : lp.rows[i].vars) covered[v] += y;
        }
        for (int j = 0; j < lp.num_vars; ++j)
            d += std::max(0.0, lp.objective[j] - covered[j]);
        return d;
    }
};

/// RLP of the instance: one [0,1] variable per vertex, one row per edge
/// (x_u + x_v <= 1), then one row per accumulated odd-cycle cut
/// (sum over C of x <= (|C|-1)/2). Cuts may be any range whose elements
/// expose a `vertices` member (e.g. OddCycle).
template <typename CycleRange>
LinearProgram build_rlp(const WeightedGraph& g, const CycleRange& cuts) {
    LinearProgram lp;
    lp.num_vars = g.num_vertices();
    lp.objective = g.weights();
    for (const auto& [u, v] : g.edges())
        lp.rows.push_back(SparseRow{{u, v}, 1.0});
    lp.num_edge_rows = g.num_edges();
    for (const auto& c : cuts) {
        SparseRow row;
        row.vars = c.vertices;
        std::sort(row.vars.begin(), row.vars.end());
        for (int v : row.vars)
            if (v < 0 || v >= lp.num_vars)
                throw std::invalid_argument("cut references nonexistent vertex");
        row.rhs = (static_cast<double>(row.vars.size()) - 1.0) / 2.0;
        lp.rows.push_back(std::move(row));
    }
    return lp;
}

namespace detail {
struct CutVertices {
    std::vector<int> vertices;
};
} // namespace detail

inline LinearProgram build_rlp(const WeightedGraph& g) {
    return build_rlp(g, std::vector<detail::CutVertices>{});
}

/// Bounded-variable primal simplex, Dantzig pricing with a Bland fallback
/// after 10*rows*cols pivots. Structural variables live in [0,1], slacks in
/// [0, inf); the all-zero point is feasible so no phase one is needed. Duals
/// are read off the reduced costs of the slack columns and refreshed from a
/// dense factorization of the final basis on small systems.
class SimplexSolver {
public:
    explicit SimplexSolver(const LinearProgram& lp) : lp_(lp) {}

    RlpSolution solve() {
        const int n = lp_.num_vars;
        const int m = static_cast<int>(lp_.rows.size());
        const int total = n + m;
        const double inf = std::numeric_limits<double>::infinity();

        // Dense tableau T = B^-1 [A | I], row-major.
        std::vector<double> T(static_cast<std::size_t>(m) * total, 0.0);
        auto at = [&](int r, int c) -> double& {
            return T[static_cast<std::size_t>(r) * total + c];
        };
        std::vector<double> d(total, 0.0); // reduced costs
        std::vector<double> xval(total, 0.0);
        std::vector<double> ub(total, inf);
        std::vector<int> basic(m);
        std::vector<char> in_basis(total, 0), at_upper(total, 0);

        for (int j = 0; j < n; ++j) {
            d[j] = lp_.objective[j];
            ub[j] = 1.0;
        }
        for (int i = 0; i < m; ++i) {
            const auto& row = lp_.rows[i];
            if (row.rhs < 0.0) throw std::runtime_error("lp: negative rhs unsupported");
            for (int v : row.vars) at(i, v) = 1.0;
            at(i, n + i) = 1.0;
            basic[i] = n + i;
            in_basis[n + i] = 1;
            xval[n + i] = row.rhs;
        }

        const double tol = 1e-10;
        const long long bland_after = 10LL * std::max(1, m) * std::max(1, n);
        const long long hard_limit = 4 * bland_after + 100000;
        long long pivots = 0;

        while (true) {
            const bool bland = pivots >= bland_after;
            if (pivots > hard_limit)
                throw std::runtime_error("lp: pivot limit exceeded (cycling?)");

            // Pricing.
            int q = -1;
            double best = tol;
            for (int j = 0; j < total; ++j) {
                if (in_basis[j]) continue;
                double score = at_upper[j] ? -d[j] : d[j];
                if (score > best) {
                    best = score;
                    q = j;
                    if (bland) break; // smallest eligible index
                }
            }
            if (q < 0) break; // optimal

            const double sigma = at_upper[q] ? -1.0 : 1.0;

            // Ratio test.
            double theta = ub[q]; // bound-flip distance (may be inf for slack)
            int leave_row = -1;
            double leave_bound = 0.0;
            double best_abs = 0.0;
            for (int i = 0; i < m; ++i) {
                const double a = at(i, q);
                const double rate = -sigma * a; // d(basic_i)/d(theta)
                if (std::abs(rate) <= tol) continue;
                const int b = basic[i];
                double limit, hit;
                if (rate < 0.0) {
                    limit = xval[b] / (-rate);
                    hit = 0.0;
                } else {
                    if (ub[b] == inf) continue;
                    limit = (ub[b] - xval[b]) / rate;
                    hit = ub[b];
                }
                if (limit < theta - tol ||
                    (limit < theta + tol && leave_row >= 0 &&
                     (bland ? basic[i] < basic[leave_row] : std::abs(a) > best_abs))) {
                    theta = std::max(0.0, limit);
                    leave_row = i;
                    leave_bound = hit;
                    best_abs = std::abs(a);
                }
            }

            if (leave_row < 0 && theta == inf)
                throw std::runtime_error("lp: unbounded direction (internal error)");

            if (leave_row < 0) {
                // Bound flip of the entering variable.
                for (int i = 0; i < m; ++i) {
                    const double a = at(i, q);
                    if (a != 0.0) xval[basic[i]] -= sigma * theta * a;
                }
                xval[q] = at_upper[q] ? 0.0 : ub[q];
                at_upper[q] = !at_upper[q];
                ++pivots;
                continue;
            }

            // Pivot: q enters, basic[leave_row] leaves.
            for (int i = 0; i < m; ++i) {
                const double a = at(i, q);
                if (a != 0.0) xval[basic[i]] -= sigma * theta * a;
            }
            xval[q] = at_upper[q] ? ub[q] - theta : theta;

            const int p = basic[leave_row];
            xval[p] = leave_bound;
            in_basis[p] = 0;
            at_upper[p] = (leave_bound != 0.0);
            in_basis[q] = 1;
            basic[leave_row] = q;

            const double piv = at(leave_row, q);
            double* rrow = &T[static_cast<std::size_t>(leave_row) * total];
            const double inv = 1.0 / piv;
            for (int c = 0; c < total; ++c) rrow[c] *= inv;
            for (int i = 0; i < m; ++i) {
                if (i == leave_row) continue;
                const double f = at(i, q);
                if (f == 0.0) continue;
                double* irow = &T[static_cast<std::size_t>(i) * total];
                for (int c = 0; c < total; ++c) irow[c] -= f * rrow[c];
            }
            {
                const double f = d[q];
                if (f != 0.0)
                    for (int c = 0; c < total; ++c) d[c] -= f * rrow[c];
            }
            ++pivots;
        }

        if (m > 0 && m <= kRefreshLimit)
            refresh_from_basis(basic, at_upper, xval, d);

        RlpSolution sol;
        sol.x.assign(xval.begin(), xval.begin() + n);
        for (double& v : sol.x) v = std::min(1.0, std::max(0.0, v));
        sol.objective = 0.0;
        for (int j = 0; j < n; ++j) sol.objective += lp_.objective[j] * sol.x[j];
        sol.edge_duals.resize(lp_.num_edge_rows);
        sol.cycle_duals.resize(m - lp_.num_edge_rows);
        for (int i = 0; i < m; ++i) {
            double y = -d[n + i];
            if (y < 0.0) y = 0.0; // dual-feasible up to tol by termination
            if (i < lp_.num_edge_rows)
                sol.edge_duals[i] = y;
            else
                sol.cycle_duals[i - lp_.num_edge_rows] = y;
        }
        sol.optimal = true;
        return sol;
    }

private:
    static constexpr int kRefreshLimit = 600;

    /// Re-derive basic values and duals from an LU factorization of the
    /// final basis, removing pivot-accumulated roundoff.
    void refresh_from_basis(const std::vector<int>& basic,
                            const std::vector<char>& at_upper,
                            std::vector<double>& xval,
                            std::vector<double>& d) const {
        const int n = lp_.num_vars;
        const int m = static_cast<int>(lp_.rows.size());
        std::vector<char> in_basis(n + m, 0);
        for (int i = 0; i < m; ++i) in_basis[basic[i]] = 1;

        // Column c of A-extended for variable j.
        auto column = [&](int j, std::vector<double>& col) {
            std::fill(col.begin(), col.end(), 0.0);
            if (j < n) {
                for (int i = 0; i < m; ++i) {
                    const auto& vars = lp_.rows[i].vars;
                    if (std::binary_search(vars.begin(), vars.end(), j)) col[i] = 1.0;
                }
            } else {
                col[j - n] = 1.0;
            }
        };

        // Dense LU with partial pivoting of B.
        std::vector<double> B(static_cast<std::size_t>(m) * m, 0.0);
        std::vector<double> col(m);
        for (int k = 0; k < m; ++k) {
            column(basic[k], col);
            for (int i = 0; i < m; ++i) B[static_cast<std::size_t>(i) * m + k] = col[i];
        }
        std::vector<int> perm(m);
        for (int i = 0; i < m; ++i) perm[i] = i;
        for (int k = 0; k < m; ++k) {
            int piv = k;
            double best = std::abs(B[static_cast<std::size_t>(perm[k]) * m + k]);
            for (int i = k + 1; i < m; ++i) {
                double v = std::abs(B[static_cast<std::size_t>(perm[i]) * m + k]);
                if (v > best) { best = v; piv = i; }
            }
            if (best == 0.0) return; // singular basis; keep tableau values
            std::swap(perm[k], perm[piv]);
            const double pval = B[static_cast<std::size_t>(perm[k]) * m + k];
            for (int i = k + 1; i < m; ++i) {
                double& f = B[static_cast<std::size_t>(perm[i]) * m + k];
                f /= pval;
                if (f == 0.0) continue;
                for (int c = k + 1; c < m; ++c)
                    B[static_cast<std::size_t>(perm[i]) * m + c] -=
                        f * B[static_cast<std::size_t>(perm[k]) * m + c];
            }
        }
        auto solve_B = [&](std::vector<double>& rhs) {
            std::vector<double> y(m);
            for (int i = 0; i < m; ++i) {
                double s = rhs[perm[i]];
                for (int c = 0; c < i; ++c)
                    s -= B[static_cast<std::size_t>(perm[i]) * m + c] * y[c];
                y[i] = s;
            }
            for (int i = m - 1; i >= 0; --i) {
                double s = y[i];
                for (int c = i + 1; c < m; ++c)
                    s -= B[static_cast<std::size_t>(perm[i]) * m + c] * y[c];
                y[i] = s / B[static_cast<std::size_t>(perm[i]) * m + i];
            }
            rhs = std::move(y);
        };
        auto solve_Bt = [&](std::vector<double>& rhs) {
            // Solve B^T z = rhs using the LU of B: (P^T L U)^T z = U^T L^T P z.
            std::vector<double> y(m);
            for (int i = 0; i < m; ++i) {
                double s = rhs[i];
                for (int c = 0; c < i; ++c)
                    s -= B[static_cast<std::size_t>(perm[c]) * m + i] * y[c];
                y[i] = s / B[static_cast<std::size_t>(perm[i]) * m + i];
            }
            for (int i = m - 1; i >= 0; --i) {
                double s = y[i];
                for (int c = i + 1; c < m; ++c)
                    s -= B[static_cast<std::size_t>(perm[c]) * m + i] * y[c];
                y[i] = s;
            }
            std::vector<double> z(m);
            for (int i = 0; i < m; ++i) z[perm[i]] = y[i];
            rhs = std::move(z);
        };

        // Basic values: B xB = b - sum over nonbasic-at-upper columns.
        std::vector<double> rhs(m);
        for (int i = 0; i < m; ++i) rhs[i] = lp_.rows[i].rhs;
        for (int j = 0; j < n; ++j) {
            if (in_basis[j] || !at_upper[j]) continue;
            column(j, col);
            for (int i = 0; i < m; ++i) rhs[i] -= col[i]; // upper bound is 1
        }
        solve_B(rhs);
        for (int j = 0; j < n + m; ++j)
            if (!in_basis[j]) xval[j] = (j < n && at_upper[j]) ? 1.0 : 0.0;
        for (int i = 0; i < m; ++i) xval[basic[i]] = rhs[i];

        // Duals: B^T y = c_B; reduced costs d_j = c_j - y . A_j.
        std::vector<double> cb(m);
        for (int i = 0; i < m; ++i)
            cb[i] = basic[i] < n ? lp_.objective[basic[i]] : 0.0;
        solve_Bt(cb);
        for (int j = 0; j < n; ++j) {
            double cj = lp_.objective[j];
            for (int i = 0; i < m; ++i) {
                const auto& vars = lp_.rows[i].vars;
                if (cb[i] != 0.0 && std::binary_search(vars.begin(), vars.end(), j))
                    cj -= cb[i];
            }
            d[j] = cj;
        }
        for (int i = 0; i < m; ++i) d[n + i] = -cb[i];
    }

    const LinearProgram& lp_;
};

inline RlpSolution solve_lp(const LinearProgram& lp) {
    return SimplexSolver(lp).solve();
}

/// Edges classified tight by their dual value (positive edge dual).
inline std::vector<Edge> tight_edges(const RlpSolution& sol, const WeightedGraph& g,
                                     double tol_dual = kTolDual) {
    std::vector<Edge> out;
    for (int i = 0; i < g.num_edges(); ++i)
        if (sol.edge_duals[i] > tol_dual) out.push_back(g.edges()[i]);
    return out;
}

/// Alternative tightness rule (x_u + x_v = 1); exposed for experimentation,
/// the two differ under dual degeneracy.
inline std::vector<Edge> tight_edges_by_row(const RlpSolution& sol, const WeightedGraph& g,
                                            double tol = kTolDual) {
    std::vector<Edge> out;
    for (const auto& [u, v] : g.edges())
        if (std::abs(1.0 - sol.x[u] - sol.x[v]) <= tol) out.emplace_back(u, v);
    return out;
}

} // namespace lpquts

#endif
