#pragma once

// Cyber-to-physical failure diffusion. A column-stochastic interconnection
// matrix R carries per-node failure probabilities kappa into per-component
// failure probabilities pi = kappa R, and the expected loss is the inner
// product of pi with the component loss costs.

#include <algorithm>
#include <cmath>
#include <map>
#include <set>
#include <string>
#include <vector>

#include "cpsg/errors.hpp"

namespace cpsg {

inline constexpr double kColumnSumTol = 1e-12;

struct CyberLayer {
    std::vector<std::string> node_ids;
    std::vector<double> kappa_base;  // per node, in [0, 1]

    static CyberLayer uniform(std::size_t n, double kappa) {
        CyberLayer cl;
        for (std::size_t i = 1; i <= n; ++i) cl.node_ids.push_back("c" + std::to_string(i));
        cl.kappa_base.assign(n, kappa);
        return cl;
    }

    std::size_t index(const std::string& id) const {
        for (std::size_t i = 0; i < node_ids.size(); ++i)
            if (node_ids[i] == id) return i;
        throw StructuralError("unknown cyber node id: " + id);
    }

    void validate() const {
        if (node_ids.empty()) throw StructuralError("cyber layer needs at least one node");
        if (kappa_base.size() != node_ids.size())
            throw StructuralError("kappa_base length does not match node count");
        std::set<std::string> seen;
        for (const auto& id : node_ids)
            if (!seen.insert(id).second) throw StructuralError("duplicate cyber node id: " + id);
        for (double k : kappa_base)
            if (k < 0.0 || k > 1.0)
                throw StructuralError("baseline failure probability outside [0, 1]");
    }
};

struct InterconnectionMatrix {
    // r[c][p]: probability that physical component p fails given cyber node
    // c has failed. Columns sum to one.
    std::vector<std::vector<double>> r;

    std::size_t num_cyber() const { return r.size(); }
    std::size_t num_physical() const { return r.empty() ? 0 : r.front().size(); }

    void validate() const {
        if (r.empty() || r.front().empty())
            throw StructuralError("interconnection matrix is empty");
        const std::size_t np = r.front().size();
        for (const auto& row : r) {
            if (row.size() != np)
                throw StructuralError("interconnection matrix rows have unequal length");
            for (double v : row)
                if (v < 0.0 || v > 1.0)
                    throw StructuralError("interconnection weight outside [0, 1]");
        }
        for (std::size_t p = 0; p < np; ++p) {
            double s = 0.0;
            for (const auto& row : r) s += row[p];
            if (std::fabs(s - 1.0) > kColumnSumTol)
                throw StructuralError("column " + std::to_string(p) +
                                      " of R sums to " + std::to_string(s) + ", not 1");
        }
    }
};

struct FailureState {
    std::vector<double> kappa;
    std::set<std::string> attacked;
    std::set<std::string> defended;
};

struct PhysicalRisk {
    std::vector<double> pi;
};

// Wide-area weighting rule: the two locally connected nodes of a component
// share local_weight each, every other node carries remote_weight.
inline InterconnectionMatrix build_wide_area_r(
    std::size_t n_cyber, const std::vector<std::string>& line_ids,
    const std::map<std::string, std::pair<std::string, std::string>>& local_map,
    const CyberLayer& layer, double local_weight = 0.25, double remote_weight = 0.05) {
    if (n_cyber < 2) throw StructuralError("wide-area rule needs at least two cyber nodes");
    if (local_weight < 0.0 || remote_weight < 0.0)
        throw StructuralError("interconnection weights must be non-negative");
    const double colsum = 2.0 * local_weight + double(n_cyber - 2) * remote_weight;
    if (std::fabs(colsum - 1.0) > kColumnSumTol)
        throw StructuralError("weight rule violates column-stochasticity: 2*" +
                              std::to_string(local_weight) + " + " +
                              std::to_string(n_cyber - 2) + "*" +
                              std::to_string(remote_weight) + " != 1");

    InterconnectionMatrix R;
    R.r.assign(n_cyber, std::vector<double>(line_ids.size(), remote_weight));
    for (std::size_t p = 0; p < line_ids.size(); ++p) {
        const auto it = local_map.find(line_ids[p]);
        if (it == local_map.end())
            throw StructuralError("no local cyber nodes declared for line " + line_ids[p]);
        if (it->second.first == it->second.second)
            throw StructuralError("line " + line_ids[p] + " lists the same local node twice");
        R.r[layer.index(it->second.first)][p] = local_weight;
        R.r[layer.index(it->second.second)][p] = local_weight;
    }
    R.validate();
    return R;
}

// Attack raises a node's failure probability to one; defense pins it to
// zero and wins over a simultaneous attack.
inline FailureState apply_attack_defense(const CyberLayer& layer,
                                         const std::set<std::string>& attacked,
                                         const std::set<std::string>& defended) {
    layer.validate();
    for (const auto& id : attacked) layer.index(id);
    for (const auto& id : defended) layer.index(id);
    FailureState st;
    st.attacked = attacked;
    st.defended = defended;
    st.kappa = layer.kappa_base;
    for (const auto& id : attacked) st.kappa[layer.index(id)] = 1.0;
    for (const auto& id : defended) st.kappa[layer.index(id)] = 0.0;
    return st;
}

inline PhysicalRisk diffuse(const FailureState& state, const InterconnectionMatrix& R) {
    R.validate();
    if (state.kappa.size() != R.num_cyber())
        throw StructuralError("kappa length " + std::to_string(state.kappa.size()) +
                              " does not match interconnection rows " +
                              std::to_string(R.num_cyber()));
    PhysicalRisk risk;
    risk.pi.assign(R.num_physical(), 0.0);
    for (std::size_t c = 0; c < R.num_cyber(); ++c)
        for (std::size_t p = 0; p < R.num_physical(); ++p)
            risk.pi[p] += R.r[c][p] * state.kappa[c];
    for (double v : risk.pi)
        if (v < -1e-15 || v > 1.0 + 1e-12)
            throw SolverFailure("diffused probability left [0, 1]");
    return risk;
}

inline double expected_loss(const PhysicalRisk& risk, const std::vector<double>& f) {
    if (risk.pi.size() != f.size())
        throw StructuralError("risk vector and cost vector lengths differ");
    double total = 0.0;
    for (std::size_t p = 0; p < f.size(); ++p) {
        if (f[p] < 0.0) throw StructuralError("loss costs must be non-negative");
        total += risk.pi[p] * f[p];
    }
    return total;
}

}  // namespace cpsg
