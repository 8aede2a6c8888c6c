#pragma once

// Bounded-rationality layer: Poisson thinking-level weights, the truncated
// three-type geometric parameterization alpha ∝ (1, tau, tau^2), the three
// attacker type policies, the defender's best reply to the type mixture,
// and the tau sweep comparing that reply against the equilibrium mix.

#include <array>
#include <cmath>
#include <string>
#include <vector>

#include "cpsg/errors.hpp"
#include "cpsg/game.hpp"

namespace cpsg {

struct PoissonLevels {
    double lambda = 1.0;  // mean and variance
    int max_level = 2;

    void validate() const {
        if (!(lambda > 0.0)) throw StructuralError("Poisson parameter must be positive");
        if (max_level < 1) throw StructuralError("max level must be at least 1");
    }
};

inline double poisson_alpha(const PoissonLevels& levels, int k) {
    levels.validate();
    if (k < 0) throw StructuralError("thinking level must be non-negative");
    double fact = 1.0;
    for (int i = 2; i <= k; ++i) fact *= i;
    return std::exp(-levels.lambda) * std::pow(levels.lambda, k) / fact;
}

struct LevelDistribution {
    double tau = 1.0;
    std::array<double, 3> alpha{};  // levels 0..2

    void validate() const {
        const double s = alpha[0] + alpha[1] + alpha[2];
        if (std::fabs(s - 1.0) > 1e-12)
            throw StructuralError("level distribution sums to " + std::to_string(s));
        for (double a : alpha)
            if (a < 0.0) throw StructuralError("level probabilities must be non-negative");
    }
};

// alpha = (1, tau, tau^2) / (1 + tau + tau^2); consecutive-level ratio tau.
// The general Poisson weights above are provided separately; they are not
// used here because a Poisson's consecutive ratio lambda/(k+1) is not
// constant in k, while this truncated model assumes a constant ratio.
inline LevelDistribution truncated_levels(double tau) {
    if (!(tau > 0.0)) throw StructuralError("tau must be positive");
    LevelDistribution d;
    d.tau = tau;
    const double z = 1.0 + tau + tau * tau;
    d.alpha = {1.0 / z, tau / z, tau * tau / z};
    return d;
}

enum class AttackerRationale { Uniform, MaxFlow, MaxCost };

struct AttackerTypePolicy {
    int level = 0;
    MixedStrategy mix;
    AttackerRationale rationale = AttackerRationale::Uniform;
    std::vector<std::size_t> tied;  // >1 entries when an argmax tie was split
};

// Level 0 mixes uniformly. Level 1 reads line loadings and hits the most
// loaded line. Level 2 knows the loss costs and hits the costliest line.
// Argmax ties split uniformly over the tied lines and are flagged.
inline AttackerTypePolicy attacker_policy(int level, const StrategySet& attacker_set,
                                          const std::vector<double>* flows_mw,
                                          const std::vector<double>* costs) {
    const std::size_t n = attacker_set.size();
    if (n == 0) throw StructuralError("attacker strategy set is empty");
    AttackerTypePolicy pol;
    pol.level = level;
    if (level == 0) {
        pol.rationale = AttackerRationale::Uniform;
        pol.mix = MixedStrategy::uniform(n);
        return pol;
    }
    const std::vector<double>* key = nullptr;
    if (level == 1) {
        if (!flows_mw)
            throw StructuralError("insufficient perception data: level 1 needs line flows");
        key = flows_mw;
        pol.rationale = AttackerRationale::MaxFlow;
    } else if (level == 2) {
        if (!costs)
            throw StructuralError("insufficient perception data: level 2 needs loss costs");
        key = costs;
        pol.rationale = AttackerRationale::MaxCost;
    } else {
        throw StructuralError("attacker level must be 0, 1 or 2");
    }
    if (key->size() != n)
        throw StructuralError("perception vector length does not match strategy set");
    double best = -kInf;
    for (double v : *key) best = std::max(best, std::fabs(v));
    const double tol = 1e-9 * std::max(1.0, best);
    for (std::size_t i = 0; i < n; ++i)
        if (std::fabs((*key)[i]) >= best - tol) pol.tied.push_back(i);
    pol.mix.prob.assign(n, 0.0);
    for (auto i : pol.tied) pol.mix.prob[i] = 1.0 / double(pol.tied.size());
    return pol;
}

struct DefenderResponse {
    std::size_t defense = 0;  // pure strategy index (lowest index on ties)
    double value = 0.0;       // defender expected utility against the mixture
    std::vector<std::size_t> tied;
};

inline MixedStrategy type_mixture(const LevelDistribution& dist,
                                  const std::array<AttackerTypePolicy, 3>& policies) {
    dist.validate();
    const std::size_t n = policies[0].mix.prob.size();
    MixedStrategy mix;
    mix.prob.assign(n, 0.0);
    for (int k = 0; k < 3; ++k) {
        if (policies[k].mix.prob.size() != n)
            throw StructuralError("attacker type policies differ in length");
        for (std::size_t j = 0; j < n; ++j)
            mix.prob[j] += dist.alpha[k] * policies[k].mix.prob[j];
    }
    return mix;
}

// Best pure defense against the alpha-weighted mixture of type policies.
// A pure maximizer is sufficient: the blended opponent play is itself one
// mixed strategy, so this is an ordinary best response.
inline DefenderResponse defender_response_to_mixture(
    const PayoffMatrix& M, const LevelDistribution& dist,
    const std::array<AttackerTypePolicy, 3>& policies) {
    const auto mix = type_mixture(dist, policies);
    const auto br = best_response(M, Player::Defender, mix);
    DefenderResponse r;
    r.defense = br.index;
    r.value = br.value;
    r.tied = br.tied;
    return r;
}

struct SweepRow {
    double tau = 0.0;
    std::array<double, 3> alpha{};
    std::size_t ch_defense = 0;
    double ch_value = 0.0;  // best pure defense vs the type mixture
    double ne_value = 0.0;  // equilibrium defender mix vs the same mixture
    double gain = 0.0;      // (ch - ne) / |ne|, improvement of a negative utility
};

inline std::vector<double> log_grid(double lo, double hi, std::size_t count) {
    if (!(lo > 0.0) || !(hi > lo) || count < 2)
        throw StructuralError("tau grid needs 0 < lo < hi and at least two points");
    std::vector<double> g(count);
    const double a = std::log(lo), b = std::log(hi);
    for (std::size_t i = 0; i < count; ++i)
        g[i] = std::exp(a + (b - a) * double(i) / double(count - 1));
    return g;
}

inline std::vector<double> linear_grid(double lo, double hi, std::size_t count) {
    if (!(hi > lo) || count < 2)
        throw StructuralError("tau grid needs lo < hi and at least two points");
    std::vector<double> g(count);
    for (std::size_t i = 0; i < count; ++i)
        g[i] = lo + (hi - lo) * double(i) / double(count - 1);
    return g;
}

inline std::vector<SweepRow> tau_sweep(const PayoffMatrix& M,
                                       const MixedStrategy& ne_defender,
                                       const std::array<AttackerTypePolicy, 3>& policies,
                                       const std::vector<double>& tau_grid) {
    ne_defender.validate();
    if (ne_defender.prob.size() != M.rows())
        throw StructuralError("equilibrium mix length does not match payoff matrix");
    std::vector<SweepRow> rows;
    rows.reserve(tau_grid.size());
    for (double tau : tau_grid) {
        if (!(tau > 0.0) || !std::isfinite(tau))
            throw StructuralError("tau grid values must be positive and finite");
        const auto dist = truncated_levels(tau);
        const auto mix = type_mixture(dist, policies);
        const auto br = best_response(M, Player::Defender, mix);
        SweepRow row;
        row.tau = tau;
        row.alpha = dist.alpha;
        row.ch_defense = br.index;
        row.ch_value = br.value;
        const auto [ud, ua] = expected_utility(M, ne_defender, mix);
        row.ne_value = ud;
        row.gain = (row.ch_value - row.ne_value) / std::fabs(row.ne_value);
        rows.push_back(row);
    }
    return rows;
}

}  // namespace cpsg
