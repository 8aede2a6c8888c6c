#pragma once

// Finite zero-sum defender/attacker game over cyber node sets: payoff
// construction from the diffusion model, expected utilities, pure best
// responses, and the mixed equilibrium via the maximin linear program pair.

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <ostream>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "cpsg/diffusion.hpp"
#include "cpsg/errors.hpp"
#include "cpsg/lp.hpp"
#include "cpsg/parse_util.hpp"

namespace cpsg {

inline constexpr double kMixSumTol = 1e-9;
inline constexpr double kNeCertTol = 1e-6;  // on unit-max-entry normalized payoffs

struct StrategySet {
    std::vector<std::string> labels;                 // e.g. line ids
    std::vector<std::set<std::string>> node_sets;    // cyber nodes per strategy

    std::size_t size() const { return node_sets.size(); }

    void validate(const CyberLayer& layer) const {
        if (node_sets.empty()) throw StructuralError("strategy set is empty");
        if (labels.size() != node_sets.size())
            throw StructuralError("strategy labels and node sets differ in length");
        const std::size_t card = node_sets.front().size();
        std::set<std::set<std::string>> seen;
        for (const auto& s : node_sets) {
            if (s.size() != card)
                throw StructuralError("strategies must share one cardinality");
            if (!seen.insert(s).second)
                throw StructuralError("duplicate strategy node set");
            for (const auto& id : s) layer.index(id);
        }
    }
};

struct PayoffMatrix {
    // attacker payoff; row = defender strategy, column = attacker strategy
    std::vector<std::vector<double>> attacker;
    std::vector<std::string> row_labels, col_labels;

    std::size_t rows() const { return attacker.size(); }
    std::size_t cols() const { return attacker.empty() ? 0 : attacker.front().size(); }
    double defender(std::size_t i, std::size_t j) const { return -attacker[i][j]; }

    void validate() const {
        if (attacker.empty() || attacker.front().empty())
            throw StructuralError("payoff matrix is empty");
        for (const auto& row : attacker) {
            if (row.size() != attacker.front().size())
                throw StructuralError("payoff matrix rows differ in length");
            for (double v : row)
                if (!std::isfinite(v)) throw StructuralError("payoff entries must be finite");
        }
    }
};

struct MixedStrategy {
    std::vector<double> prob;

    void validate() const {
        double s = 0.0;
        for (double p : prob) {
            if (p < -kMixSumTol) throw StructuralError("mixed strategy has a negative weight");
            s += p;
        }
        if (std::fabs(s - 1.0) > kMixSumTol)
            throw StructuralError("mixed strategy sums to " + std::to_string(s));
    }

    static MixedStrategy pure(std::size_t n, std::size_t at) {
        MixedStrategy m;
        m.prob.assign(n, 0.0);
        m.prob[at] = 1.0;
        return m;
    }

    static MixedStrategy uniform(std::size_t n) {
        MixedStrategy m;
        m.prob.assign(n, 1.0 / double(n));
        return m;
    }
};

inline PayoffMatrix build_payoff_matrix(const CyberLayer& layer,
                                        const InterconnectionMatrix& R,
                                        const std::vector<double>& f,
                                        const StrategySet& defender,
                                        const StrategySet& attacker) {
    defender.validate(layer);
    attacker.validate(layer);
    if (f.size() != R.num_physical())
        throw StructuralError("cost vector length does not match interconnection columns");
    PayoffMatrix M;
    M.row_labels = defender.labels;
    M.col_labels = attacker.labels;
    M.attacker.assign(defender.size(), std::vector<double>(attacker.size(), 0.0));
    for (std::size_t i = 0; i < defender.size(); ++i) {
        for (std::size_t j = 0; j < attacker.size(); ++j) {
            const auto st = apply_attack_defense(layer, attacker.node_sets[j],
                                                 defender.node_sets[i]);
            M.attacker[i][j] = expected_loss(diffuse(st, R), f);
        }
    }
    M.validate();
    return M;
}

// (defender value, attacker value); attacker value = gd' Ua ga.
inline std::pair<double, double> expected_utility(const PayoffMatrix& M,
                                                  const MixedStrategy& gd,
                                                  const MixedStrategy& ga) {
    M.validate();
    gd.validate();
    ga.validate();
    if (gd.prob.size() != M.rows() || ga.prob.size() != M.cols())
        throw StructuralError("mixed strategy length does not match payoff matrix");
    double ua = 0.0;
    for (std::size_t i = 0; i < M.rows(); ++i)
        for (std::size_t j = 0; j < M.cols(); ++j)
            ua += gd.prob[i] * M.attacker[i][j] * ga.prob[j];
    return {-ua, ua};
}

enum class Player { Defender, Attacker };

struct BestResponse {
    std::size_t index = 0;
    double value = 0.0;               // responder's own expected utility
    std::vector<std::size_t> tied;    // all argmax indices (size > 1 flags a tie)
};

// Pure-strategy best response; lossless in a finite game since some pure
// strategy always attains the maximum over mixtures.
inline BestResponse best_response(const PayoffMatrix& M, Player player,
                                  const MixedStrategy& opponent) {
    M.validate();
    opponent.validate();
    const bool def = player == Player::Defender;
    if (opponent.prob.size() != (def ? M.cols() : M.rows()))
        throw StructuralError("opponent mix length does not match payoff matrix");
    const std::size_t n = def ? M.rows() : M.cols();
    BestResponse br;
    double best = -kInf;
    std::vector<double> vals(n, 0.0);
    for (std::size_t k = 0; k < n; ++k) {
        double v = 0.0;
        if (def)
            for (std::size_t j = 0; j < M.cols(); ++j) v += -M.attacker[k][j] * opponent.prob[j];
        else
            for (std::size_t i = 0; i < M.rows(); ++i) v += M.attacker[i][k] * opponent.prob[i];
        vals[k] = v;
        if (v > best) best = v;
    }
    const double tie_tol = 1e-9 * std::max(1.0, std::fabs(best));
    for (std::size_t k = 0; k < n; ++k)
        if (vals[k] >= best - tie_tol) br.tied.push_back(k);
    br.index = br.tied.front();
    br.value = vals[br.index];
    return br;
}

struct Equilibrium {
    MixedStrategy defender;
    MixedStrategy attacker;
    double defender_value = 0.0;  // attacker value is the negation
    double certificate_residual = 0.0;
};

// Maximin linear program pair on the matrix normalized to unit max entry.
// The returned point is checked: no pure deviation may gain more than
// kNeCertTol (normalized) or the solver refuses to answer.
inline Equilibrium solve_zero_sum_ne(const PayoffMatrix& M) {
    M.validate();
    const std::size_t n = M.rows(), m = M.cols();
    double scale = 0.0;
    for (const auto& row : M.attacker)
        for (double v : row) scale = std::max(scale, std::fabs(v));
    if (scale == 0.0) scale = 1.0;

    // Defender: min v subject to sum_i x_i Ua[i][j] <= v for all j, x simplex.
    auto lp1 = LinearProgram::with_vars(n + 1);
    for (std::size_t i = 0; i < n; ++i) { lp1.lower[i] = 0.0; lp1.upper[i] = 1.0; }
    lp1.objective[n] = 1.0;
    for (std::size_t j = 0; j < m; ++j) {
        std::vector<double> row(n + 1, 0.0);
        for (std::size_t i = 0; i < n; ++i) row[i] = M.attacker[i][j] / scale;
        row[n] = -1.0;
        lp1.add_constraint(std::move(row), Relation::LessEq, 0.0);
    }
    {
        std::vector<double> row(n + 1, 0.0);
        for (std::size_t i = 0; i < n; ++i) row[i] = 1.0;
        lp1.add_constraint(std::move(row), Relation::Equal, 1.0);
    }
    const auto s1 = solve_lp(lp1);
    if (s1.status != LpStatus::Optimal)
        throw SolverFailure("defender maximin program did not solve");

    // Attacker: max w subject to sum_j Ua[i][j] y_j >= w for all i, y simplex.
    auto lp2 = LinearProgram::with_vars(m + 1);
    for (std::size_t j = 0; j < m; ++j) { lp2.lower[j] = 0.0; lp2.upper[j] = 1.0; }
    lp2.objective[m] = -1.0;
    for (std::size_t i = 0; i < n; ++i) {
        std::vector<double> row(m + 1, 0.0);
        for (std::size_t j = 0; j < m; ++j) row[j] = M.attacker[i][j] / scale;
        row[m] = -1.0;
        lp2.add_constraint(std::move(row), Relation::GreaterEq, 0.0);
    }
    {
        std::vector<double> row(m + 1, 0.0);
        for (std::size_t j = 0; j < m; ++j) row[j] = 1.0;
        lp2.add_constraint(std::move(row), Relation::Equal, 1.0);
    }
    const auto s2 = solve_lp(lp2);
    if (s2.status != LpStatus::Optimal)
        throw SolverFailure("attacker maximin program did not solve");

    Equilibrium eq;
    eq.defender.prob.assign(s1.x.begin(), s1.x.begin() + n);
    eq.attacker.prob.assign(s2.x.begin(), s2.x.begin() + m);
    for (auto& p : eq.defender.prob) p = std::max(0.0, p);
    for (auto& p : eq.attacker.prob) p = std::max(0.0, p);
    const double v_att_norm = s1.x[n];
    const double w_att_norm = s2.x[m];
    if (std::fabs(v_att_norm - w_att_norm) > kNeCertTol)
        throw SolverFailure("maximin and minimax values disagree beyond tolerance");
    eq.defender_value = -v_att_norm * scale;

    // No-profitable-deviation certificate on the normalized matrix.
    double worst = 0.0;
    for (std::size_t j = 0; j < m; ++j) {
        double col = 0.0;
        for (std::size_t i = 0; i < n; ++i) col += eq.defender.prob[i] * M.attacker[i][j] / scale;
        worst = std::max(worst, col - v_att_norm);  // attacker could gain
    }
    for (std::size_t i = 0; i < n; ++i) {
        double row = 0.0;
        for (std::size_t j = 0; j < m; ++j) row += M.attacker[i][j] / scale * eq.attacker.prob[j];
        worst = std::max(worst, w_att_norm - row);  // defender could gain
    }
    eq.certificate_residual = worst;
    if (worst > kNeCertTol)
        throw SolverFailure("equilibrium certificate failed: residual " + std::to_string(worst));
    return eq;
}

// CSV with a header row and leading label column; values keep full
// precision so that import reproduces the matrix to better than 1e-9.
inline void write_payoff_csv(const PayoffMatrix& M, std::ostream& out) {
    out << "defender\\attacker";
    for (const auto& c : M.col_labels) out << "," << c;
    out << "\n";
    char buf[40];
    for (std::size_t i = 0; i < M.rows(); ++i) {
        out << M.row_labels[i];
        for (std::size_t j = 0; j < M.cols(); ++j) {
            std::snprintf(buf, sizeof buf, "%.17g", M.attacker[i][j]);
            out << "," << buf;
        }
        out << "\n";
    }
}

inline PayoffMatrix read_payoff_csv(std::istream& in) {
    PayoffMatrix M;
    std::string line;
    if (!std::getline(in, line)) throw ParseError("payoff CSV is empty");
    {
        std::stringstream ss(line);
        std::string cell;
        bool first = true;
        while (std::getline(ss, cell, ',')) {
            if (first) { first = false; continue; }
            M.col_labels.push_back(cell);
        }
    }
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        std::stringstream ss(line);
        std::string cell;
        std::vector<double> row;
        bool first = true;
        while (std::getline(ss, cell, ',')) {
            if (first) { M.row_labels.push_back(cell); first = false; continue; }
            row.push_back(parse::to_double(cell, "payoff entry"));
        }
        if (row.size() != M.col_labels.size())
            throw ParseError("payoff CSV row has wrong width");
        M.attacker.push_back(std::move(row));
    }
    M.validate();
    return M;
}

}  // namespace cpsg
