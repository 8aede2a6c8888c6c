#pragma once

// Test-only oracles, kept independent of the library solver paths they
// check. The LP oracle enumerates basic solutions: every square subsystem
// of active constraints/bounds is solved by Gaussian elimination and the
// feasible minimum is taken. Only valid for problems whose feasible region
// is bounded (finite boxes guarantee that in the random corpus).

#include <cmath>
#include <cstddef>
#include <limits>
#include <optional>
#include <vector>

#include "cpsg/lp.hpp"

namespace oracle {

inline bool gauss_solve(std::vector<std::vector<double>> M, std::vector<double> rhs,
                        std::vector<double>& out) {
    const std::size_t n = rhs.size();
    for (std::size_t col = 0; col < n; ++col) {
        std::size_t piv = col;
        for (std::size_t r = col + 1; r < n; ++r)
            if (std::fabs(M[r][col]) > std::fabs(M[piv][col])) piv = r;
        if (std::fabs(M[piv][col]) < 1e-10) return false;
        std::swap(M[piv], M[col]);
        std::swap(rhs[piv], rhs[col]);
        for (std::size_t r = 0; r < n; ++r) {
            if (r == col) continue;
            const double f = M[r][col] / M[col][col];
            for (std::size_t c = col; c < n; ++c) M[r][c] -= f * M[col][c];
            rhs[r] -= f * rhs[col];
        }
    }
    out.resize(n);
    for (std::size_t i = 0; i < n; ++i) out[i] = rhs[i] / M[i][i];
    return true;
}

struct VertexResult {
    bool feasible = false;
    double objective = std::numeric_limits<double>::infinity();
    std::vector<double> x;
};

// Rows: all constraints; candidate active rows: inequality constraints and
// finite variable bounds; equalities are always active.
inline VertexResult enumerate_lp_min(const cpsg::LinearProgram& lp) {
    using cpsg::Relation;
    const std::size_t n = lp.num_vars();

    struct Row { std::vector<double> a; double b; };
    std::vector<Row> eq, ineq;  // ineq stored as a.x <= b
    for (const auto& c : lp.constraints) {
        if (c.rel == Relation::Equal) eq.push_back({c.coeffs, c.rhs});
        else if (c.rel == Relation::LessEq) ineq.push_back({c.coeffs, c.rhs});
        else {
            Row r{c.coeffs, -c.rhs};
            for (auto& v : r.a) v = -v;
            ineq.push_back(r);
        }
    }
    for (std::size_t j = 0; j < n; ++j) {
        if (lp.lower[j] > -cpsg::kInf) {
            Row r; r.a.assign(n, 0.0); r.a[j] = -1.0; r.b = -lp.lower[j];
            ineq.push_back(r);
        }
        if (lp.upper[j] < cpsg::kInf) {
            Row r; r.a.assign(n, 0.0); r.a[j] = 1.0; r.b = lp.upper[j];
            ineq.push_back(r);
        }
    }

    VertexResult best;
    if (eq.size() > n) return best;
    const std::size_t need = n - eq.size();
    const std::size_t k = ineq.size();
    if (need > k) return best;

    std::vector<std::size_t> pick(need);
    for (std::size_t i = 0; i < need; ++i) pick[i] = i;

    auto try_subset = [&]() {
        std::vector<std::vector<double>> M;
        std::vector<double> rhs;
        for (const auto& r : eq) { M.push_back(r.a); rhs.push_back(r.b); }
        for (std::size_t i : pick) { M.push_back(ineq[i].a); rhs.push_back(ineq[i].b); }
        std::vector<double> x;
        if (!gauss_solve(M, rhs, x)) return;
        // feasibility of the candidate vertex
        for (const auto& r : eq) {
            double lhs = 0.0, sc = std::max(1.0, std::fabs(r.b));
            for (std::size_t j = 0; j < n; ++j) { lhs += r.a[j] * x[j]; sc = std::max(sc, std::fabs(r.a[j])); }
            if (std::fabs(lhs - r.b) > 1e-6 * sc) return;
        }
        for (const auto& r : ineq) {
            double lhs = 0.0, sc = std::max(1.0, std::fabs(r.b));
            for (std::size_t j = 0; j < n; ++j) { lhs += r.a[j] * x[j]; sc = std::max(sc, std::fabs(r.a[j])); }
            if (lhs - r.b > 1e-6 * sc) return;
        }
        double obj = 0.0;
        for (std::size_t j = 0; j < n; ++j) obj += lp.objective[j] * x[j];
        if (!best.feasible || obj < best.objective) {
            best.feasible = true;
            best.objective = obj;
            best.x = x;
        }
    };

    if (need == 0) {
        try_subset();
        return best;
    }
    while (true) {
        try_subset();
        // next combination
        std::size_t i = need;
        while (i > 0) {
            --i;
            if (pick[i] + (need - i) < k) {
                ++pick[i];
                for (std::size_t j = i + 1; j < need; ++j) pick[j] = pick[j - 1] + 1;
                break;
            }
            if (i == 0) return best;
        }
    }
}

}  // namespace oracle
