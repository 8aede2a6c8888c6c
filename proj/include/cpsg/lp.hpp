#pragma once

// Dense bounded-variable simplex for the small linear programs that show up
// in this project (dispatch problems and matrix-game duals, tens of
// variables). Two phases, Dantzig pricing with a Bland fallback once the
// iteration budget is spent, deterministic index-order tie breaking
// throughout.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <string>
#include <vector>

#include "cpsg/errors.hpp"

namespace cpsg {

inline constexpr double kLpFeasTol = 1e-7;   // feasibility, on normalized rows
inline constexpr double kLpOptTol = 1e-9;    // reduced-cost optimality
inline constexpr double kInf = std::numeric_limits<double>::infinity();

enum class Relation { LessEq, Equal, GreaterEq };

struct Constraint {
    std::vector<double> coeffs;
    Relation rel = Relation::LessEq;
    double rhs = 0.0;
};

struct LinearProgram {
    std::vector<double> objective;  // minimized
    std::vector<Constraint> constraints;
    std::vector<double> lower;  // -inf allowed
    std::vector<double> upper;  // +inf allowed

    std::size_t num_vars() const { return objective.size(); }

    static LinearProgram with_vars(std::size_t n) {
        LinearProgram lp;
        lp.objective.assign(n, 0.0);
        lp.lower.assign(n, -kInf);
        lp.upper.assign(n, kInf);
        return lp;
    }

    void add_constraint(std::vector<double> coeffs, Relation rel, double rhs) {
        constraints.push_back({std::move(coeffs), rel, rhs});
    }
};

enum class LpStatus { Optimal, Infeasible, Unbounded };

struct LpSolution {
    LpStatus status = LpStatus::Infeasible;
    std::vector<double> x;
    double objective = 0.0;
    // Rows that phase 1 could not satisfy, by constraint index; only
    // populated when status == Infeasible.
    std::vector<std::size_t> infeasible_rows;
};

namespace lp_detail {

enum class VarStatus { Basic, NonbasicLower, NonbasicUpper };

struct Tableau {
    std::size_t m = 0;                    // rows
    std::size_t n = 0;                    // columns (internal vars)
    std::vector<std::vector<double>> a;   // m x n
    std::vector<double> b;                // m
    std::vector<double> cost;             // n
    std::vector<double> lo, hi;           // n (lo finite = 0, hi may be +inf)
    std::vector<bool> artificial;         // n
};

// Solve M y = rhs by Gaussian elimination with partial pivoting.
// Returns false if M is numerically singular.
inline bool dense_solve(std::vector<std::vector<double>> M, std::vector<double> rhs,
                        std::vector<double>& out) {
    const std::size_t m = rhs.size();
    for (std::size_t col = 0; col < m; ++col) {
        std::size_t piv = col;
        for (std::size_t r = col + 1; r < m; ++r)
            if (std::fabs(M[r][col]) > std::fabs(M[piv][col])) piv = r;
        if (std::fabs(M[piv][col]) < 1e-12) return false;
        std::swap(M[piv], M[col]);
        std::swap(rhs[piv], rhs[col]);
        for (std::size_t r = 0; r < m; ++r) {
            if (r == col) continue;
            const double f = M[r][col] / M[col][col];
            if (f == 0.0) continue;
            for (std::size_t cc = col; cc < m; ++cc) M[r][cc] -= f * M[col][cc];
            rhs[r] -= f * rhs[col];
        }
    }
    out.resize(m);
    for (std::size_t i = 0; i < m; ++i) out[i] = rhs[i] / M[i][i];
    return true;
}

struct SimplexState {
    std::vector<std::size_t> basis;    // m entries, column indices
    std::vector<VarStatus> status;     // n entries
    std::vector<double> x;             // n entries, current point
};

// One simplex run over the given costs. Returns true if optimal was reached,
// false if unbounded. Throws SolverFailure if the iteration cap is exceeded.
inline bool simplex_iterate(const Tableau& t, SimplexState& s,
                            const std::vector<double>& cost, bool phase_two) {
    const std::size_t m = t.m, n = t.n;
    const std::size_t bland_after = 200 + 10 * (n + m);
    const std::size_t max_iter = 2000 + 100 * (n + m);

    std::vector<double> xb, y, d;
    for (std::size_t iter = 0;; ++iter) {
        if (iter > max_iter)
            throw SolverFailure("simplex iteration cap exceeded (" +
                                std::to_string(max_iter) + " iterations)");
        const bool bland = iter >= bland_after;

        // Basis matrix and current basic values.
        std::vector<std::vector<double>> B(m, std::vector<double>(m));
        for (std::size_t i = 0; i < m; ++i)
            for (std::size_t k = 0; k < m; ++k) B[i][k] = t.a[i][s.basis[k]];
        std::vector<double> rhs = t.b;
        for (std::size_t j = 0; j < n; ++j) {
            if (s.status[j] == VarStatus::Basic) continue;
            const double v = s.x[j];
            if (v == 0.0) continue;
            for (std::size_t i = 0; i < m; ++i) rhs[i] -= t.a[i][j] * v;
        }
        if (!dense_solve(B, rhs, xb))
            throw SolverFailure("singular basis matrix in simplex");
        for (std::size_t k = 0; k < m; ++k) s.x[s.basis[k]] = xb[k];

        // Duals: B^T y = c_B.
        std::vector<std::vector<double>> BT(m, std::vector<double>(m));
        for (std::size_t i = 0; i < m; ++i)
            for (std::size_t k = 0; k < m; ++k) BT[i][k] = t.a[k][s.basis[i]];
        std::vector<double> cb(m);
        for (std::size_t k = 0; k < m; ++k) cb[k] = cost[s.basis[k]];
        if (!dense_solve(BT, cb, y))
            throw SolverFailure("singular basis matrix in simplex (duals)");

        // Pricing.
        std::size_t enter = n;
        double best = 0.0;
        for (std::size_t j = 0; j < n; ++j) {
            if (s.status[j] == VarStatus::Basic) continue;
            if (phase_two && t.artificial[j]) continue;
            double dj = cost[j];
            for (std::size_t i = 0; i < m; ++i) dj -= y[i] * t.a[i][j];
            double viol = 0.0;
            if (s.status[j] == VarStatus::NonbasicLower && dj < -kLpOptTol) viol = -dj;
            if (s.status[j] == VarStatus::NonbasicUpper && dj > kLpOptTol) viol = dj;
            if (viol > 0.0) {
                if (bland) { enter = j; break; }
                if (viol > best + 1e-15) { best = viol; enter = j; }
            }
        }
        if (enter == n) return true;  // optimal for this phase

        // Direction of basic variables when entering moves by +t (from lower)
        // or -t (from upper): x_B -= t * sign * B^-1 a_e.
        const double dir = (s.status[enter] == VarStatus::NonbasicLower) ? 1.0 : -1.0;
        std::vector<double> ae(m);
        for (std::size_t i = 0; i < m; ++i) ae[i] = t.a[i][enter];
        if (!dense_solve(B, ae, d))
            throw SolverFailure("singular basis matrix in simplex (direction)");

        // Ratio test. The entering variable is also limited by its own range.
        double limit = t.hi[enter] - t.lo[enter];  // may be +inf
        std::size_t leave = m;                     // m = bound flip
        for (std::size_t k = 0; k < m; ++k) {
            const double delta = -dir * d[k];  // d(x_basic_k)/dt
            const std::size_t bk = s.basis[k];
            double cap = kInf;
            if (delta < -1e-11) cap = (s.x[bk] - t.lo[bk]) / (-delta);
            else if (delta > 1e-11) {
                if (t.hi[bk] >= kInf) continue;
                cap = (t.hi[bk] - s.x[bk]) / delta;
            } else continue;
            if (cap < -1e-9) cap = 0.0;
            if (cap < limit - 1e-12 ||
                (cap < limit + 1e-12 && leave != m && s.basis[k] < s.basis[leave])) {
                limit = std::max(cap, 0.0);
                leave = k;
            }
        }
        if (limit >= kInf) {
            if (!phase_two)
                throw SolverFailure("phase-1 objective unbounded; inconsistent state");
            return false;  // unbounded
        }

        // Apply step.
        const double step = limit * dir;
        s.x[enter] += step;
        for (std::size_t k = 0; k < m; ++k) s.x[s.basis[k]] -= d[k] * step;

        if (leave == m) {
            // Bound flip: entering variable traversed its whole range.
            s.status[enter] = (dir > 0) ? VarStatus::NonbasicUpper : VarStatus::NonbasicLower;
            s.x[enter] = (dir > 0) ? t.hi[enter] : t.lo[enter];
        } else {
            const std::size_t out = s.basis[leave];
            const double delta = -dir * d[leave];
            s.status[out] = (delta < 0.0) ? VarStatus::NonbasicLower : VarStatus::NonbasicUpper;
            s.x[out] = (delta < 0.0) ? t.lo[out] : t.hi[out];
            s.basis[leave] = enter;
            s.status[enter] = VarStatus::Basic;
        }
    }
}

}  // namespace lp_detail

inline LpSolution solve_lp(const LinearProgram& lp) {
    using namespace lp_detail;
    const std::size_t n_orig = lp.num_vars();
    if (lp.lower.size() != n_orig || lp.upper.size() != n_orig)
        throw StructuralError("bound vectors must match objective length");
    for (const auto& c : lp.constraints)
        if (c.coeffs.size() != n_orig)
            throw StructuralError("constraint row length " + std::to_string(c.coeffs.size()) +
                                  " does not match variable count " + std::to_string(n_orig));
    for (std::size_t j = 0; j < n_orig; ++j)
        if (lp.lower[j] > lp.upper[j])
            throw StructuralError("lower bound exceeds upper bound for variable " +
                                  std::to_string(j));

    // Internal variable mapping. Every internal variable has lo = 0.
    //   kind 0: x = lo + z            (finite lower)
    //   kind 1: x = up - z            (only upper finite)
    //   kind 2: x = z_pos - z_neg     (free, split)
    struct Map { int kind; std::size_t col, col2; double shift; };
    std::vector<Map> maps(n_orig);
    std::size_t n = 0;
    for (std::size_t j = 0; j < n_orig; ++j) {
        if (lp.lower[j] > -kInf) maps[j] = {0, n++, 0, lp.lower[j]};
        else if (lp.upper[j] < kInf) maps[j] = {1, n++, 0, lp.upper[j]};
        else { maps[j] = {2, n, n + 1, 0.0}; n += 2; }
    }
    const std::size_t n_struct = n;
    const std::size_t m = lp.constraints.size();

    Tableau t;
    t.m = m;
    t.n = n_struct;
    t.cost.assign(n_struct, 0.0);
    t.lo.assign(n_struct, 0.0);
    t.hi.assign(n_struct, kInf);
    t.a.assign(m, std::vector<double>(n_struct, 0.0));
    t.b.assign(m, 0.0);
    for (std::size_t j = 0; j < n_orig; ++j) {
        const Map& mp = maps[j];
        if (mp.kind == 0) {
            t.cost[mp.col] = lp.objective[j];
            if (lp.upper[j] < kInf) t.hi[mp.col] = lp.upper[j] - lp.lower[j];
        } else if (mp.kind == 1) {
            t.cost[mp.col] = -lp.objective[j];
        } else {
            t.cost[mp.col] = lp.objective[j];
            t.cost[mp.col2] = -lp.objective[j];
        }
    }
    for (std::size_t i = 0; i < m; ++i) {
        const Constraint& c = lp.constraints[i];
        double rhs = c.rhs;
        for (std::size_t j = 0; j < n_orig; ++j) {
            const double a = c.coeffs[j];
            if (a == 0.0) continue;
            const Map& mp = maps[j];
            if (mp.kind == 0) { t.a[i][mp.col] = a; rhs -= a * mp.shift; }
            else if (mp.kind == 1) { t.a[i][mp.col] = -a; rhs -= a * mp.shift; }
            else { t.a[i][mp.col] = a; t.a[i][mp.col2] = -a; }
        }
        t.b[i] = rhs;
    }

    // Slacks.
    std::vector<std::size_t> slack_col(m, SIZE_MAX);
    for (std::size_t i = 0; i < m; ++i) {
        if (lp.constraints[i].rel == Relation::Equal) continue;
        slack_col[i] = t.n;
        for (auto& row : t.a) row.push_back(0.0);
        t.a[i].back() = (lp.constraints[i].rel == Relation::LessEq) ? 1.0 : -1.0;
        t.cost.push_back(0.0);
        t.lo.push_back(0.0);
        t.hi.push_back(kInf);
        ++t.n;
    }

    // Row signs so that b >= 0, then one artificial per row.
    for (std::size_t i = 0; i < m; ++i) {
        if (t.b[i] < 0.0) {
            for (auto& v : t.a[i]) v = -v;
            t.b[i] = -t.b[i];
        }
    }
    std::vector<std::size_t> art_col(m);
    for (std::size_t i = 0; i < m; ++i) {
        art_col[i] = t.n;
        for (auto& row : t.a) row.push_back(0.0);
        t.a[i].back() = 1.0;
        t.cost.push_back(0.0);
        t.lo.push_back(0.0);
        t.hi.push_back(kInf);
        ++t.n;
    }
    t.artificial.assign(t.n, false);
    for (std::size_t i = 0; i < m; ++i) t.artificial[art_col[i]] = true;

    LpSolution sol;
    if (m == 0) {
        // No constraints: each variable sits at its cost-preferred bound.
        sol.x.assign(n_orig, 0.0);
        double obj = 0.0;
        for (std::size_t j = 0; j < n_orig; ++j) {
            const double cj = lp.objective[j];
            double v;
            if (cj > 0.0) v = lp.lower[j];
            else if (cj < 0.0) v = lp.upper[j];
            else v = (lp.lower[j] > -kInf) ? lp.lower[j] : std::min(0.0, lp.upper[j]);
            if (cj != 0.0 && std::fabs(v) >= kInf) {
                sol.status = LpStatus::Unbounded;
                return sol;
            }
            if (std::fabs(v) >= kInf) v = 0.0;
            sol.x[j] = v;
            obj += cj * v;
        }
        sol.status = LpStatus::Optimal;
        sol.objective = obj;
        return sol;
    }

    SimplexState s;
    s.basis = art_col;
    s.status.assign(t.n, VarStatus::NonbasicLower);
    s.x.assign(t.n, 0.0);
    for (std::size_t i = 0; i < m; ++i) s.status[art_col[i]] = VarStatus::Basic;

    // Phase 1: minimize sum of artificials.
    std::vector<double> phase1_cost(t.n, 0.0);
    for (std::size_t i = 0; i < m; ++i) phase1_cost[art_col[i]] = 1.0;
    simplex_iterate(t, s, phase1_cost, false);

    double infeas = 0.0;
    for (std::size_t i = 0; i < m; ++i) infeas += s.x[art_col[i]];
    double bscale = 1.0;
    for (std::size_t i = 0; i < m; ++i) bscale = std::max(bscale, std::fabs(t.b[i]));
    if (infeas > kLpFeasTol * bscale * 10.0) {
        sol.status = LpStatus::Infeasible;
        for (std::size_t i = 0; i < m; ++i)
            if (s.x[art_col[i]] > kLpFeasTol * bscale) sol.infeasible_rows.push_back(i);
        return sol;
    }

    // Freeze artificials at zero for phase 2.
    for (std::size_t i = 0; i < m; ++i) t.hi[art_col[i]] = 0.0;

    // Phase 2.
    if (!simplex_iterate(t, s, t.cost, true)) {
        sol.status = LpStatus::Unbounded;
        return sol;
    }

    // Recover original variables and re-derive the objective from them.
    sol.x.assign(n_orig, 0.0);
    for (std::size_t j = 0; j < n_orig; ++j) {
        const Map& mp = maps[j];
        if (mp.kind == 0) sol.x[j] = mp.shift + s.x[mp.col];
        else if (mp.kind == 1) sol.x[j] = mp.shift - s.x[mp.col];
        else sol.x[j] = s.x[mp.col] - s.x[mp.col2];
    }
    double obj = 0.0;
    for (std::size_t j = 0; j < n_orig; ++j) obj += lp.objective[j] * sol.x[j];

    // Post-check: never report Optimal for an infeasible point.
    for (std::size_t i = 0; i < m; ++i) {
        const Constraint& c = lp.constraints[i];
        double lhs = 0.0, scale = std::max(1.0, std::fabs(c.rhs));
        for (std::size_t j = 0; j < n_orig; ++j) {
            lhs += c.coeffs[j] * sol.x[j];
            scale = std::max(scale, std::fabs(c.coeffs[j]));
        }
        const double viol = (c.rel == Relation::LessEq)    ? lhs - c.rhs
                            : (c.rel == Relation::GreaterEq) ? c.rhs - lhs
                                                             : std::fabs(lhs - c.rhs);
        if (viol > kLpFeasTol * scale * 100.0)
            throw SolverFailure("optimal point failed feasibility post-check on row " +
                                std::to_string(i));
    }
    for (std::size_t j = 0; j < n_orig; ++j) {
        const double span = std::max(1.0, std::max(std::fabs(lp.lower[j]), std::fabs(lp.upper[j])));
        if (sol.x[j] < lp.lower[j] - kLpFeasTol * span ||
            sol.x[j] > lp.upper[j] + kLpFeasTol * span)
            throw SolverFailure("optimal point failed bound post-check on variable " +
                                std::to_string(j));
    }

    sol.status = LpStatus::Optimal;
    sol.objective = obj;
    return sol;
}

}  // namespace cpsg
