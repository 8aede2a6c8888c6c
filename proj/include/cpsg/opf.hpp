#pragma once

// DC optimal power flow: minimize total generation cost subject to linear
// flow physics (flow = angle difference / reactance, scaled by base MVA),
// nodal balance, line thermal limits and generator capacity ranges.
// Also the per-line economic loss figure
//   f_i = (V_out_i - V_base) * T_i + CR_i.

#include <cmath>
#include <optional>
#include <string>
#include <vector>

#include "cpsg/grid.hpp"
#include "cpsg/lp.hpp"

namespace cpsg {

inline constexpr double kPowerBalanceTolMw = 1e-6;

namespace opf_detail {

// Variable layout: [theta per bus | output per generator].
inline LinearProgram build_dispatch_lp(const GridCase& gc,
                                       std::optional<std::size_t> outage) {
    const std::size_t nb = gc.buses.size();
    const std::size_t ng = gc.generators.size();
    auto lp = LinearProgram::with_vars(nb + ng);

    for (std::size_t g = 0; g < ng; ++g) {
        lp.objective[nb + g] = gc.generators[g].cost_per_mwh;
        lp.lower[nb + g] = gc.generators[g].pmin_mw;
        lp.upper[nb + g] = gc.generators[g].pmax_mw;
    }
    const std::size_t slack = gc.bus_index(gc.slack_bus);
    lp.lower[slack] = 0.0;
    lp.upper[slack] = 0.0;

    // Nodal balance: sum(gen at bus) - sum(outgoing flow) = load.
    for (std::size_t b = 0; b < nb; ++b) {
        std::vector<double> row(nb + ng, 0.0);
        for (std::size_t g = 0; g < ng; ++g)
            if (gc.bus_index(gc.generators[g].bus) == b) row[nb + g] = 1.0;
        for (std::size_t l = 0; l < gc.lines.size(); ++l) {
            if (outage && *outage == l) continue;
            const double k = gc.base_mva / gc.lines[l].reactance_pu;
            const auto f = gc.bus_index(gc.lines[l].from_bus);
            const auto t = gc.bus_index(gc.lines[l].to_bus);
            if (f == b) { row[f] -= k; row[t] += k; }
            else if (t == b) { row[t] -= k; row[f] += k; }
        }
        lp.add_constraint(std::move(row), Relation::Equal, gc.buses[b].load_mw);
    }

    // Thermal limits, both directions.
    for (std::size_t l = 0; l < gc.lines.size(); ++l) {
        if (outage && *outage == l) continue;
        if (!gc.lines[l].limit_mw) continue;
        const double k = gc.base_mva / gc.lines[l].reactance_pu;
        const auto f = gc.bus_index(gc.lines[l].from_bus);
        const auto t = gc.bus_index(gc.lines[l].to_bus);
        std::vector<double> row(nb + ng, 0.0);
        row[f] = k;
        row[t] = -k;
        lp.add_constraint(row, Relation::LessEq, *gc.lines[l].limit_mw);
        for (auto& v : row) v = -v;
        lp.add_constraint(std::move(row), Relation::LessEq, *gc.lines[l].limit_mw);
    }
    return lp;
}

inline std::string row_name(const GridCase& gc, std::size_t row,
                            std::optional<std::size_t> outage) {
    const std::size_t nb = gc.buses.size();
    if (row < nb) return "balance@" + gc.buses[row].id;
    std::size_t k = row - nb;
    for (std::size_t l = 0; l < gc.lines.size(); ++l) {
        if (outage && *outage == l) continue;
        if (!gc.lines[l].limit_mw) continue;
        if (k == 0) return "limit+@" + gc.lines[l].id;
        if (k == 1) return "limit-@" + gc.lines[l].id;
        k -= 2;
    }
    return "row#" + std::to_string(row);
}

}  // namespace opf_detail

inline DispatchResult solve_dc_opf(const GridCase& gc,
                                   std::optional<std::string> outaged_line = std::nullopt) {
    gc.validate();
    std::optional<std::size_t> outage;
    if (outaged_line) {
        outage = gc.line_index(*outaged_line);
        if (!gc.connected_without(outage))
            throw NetworkSplitError("outage of line " + *outaged_line +
                                    " splits the network");
    }

    const auto lp = opf_detail::build_dispatch_lp(gc, outage);
    const auto sol = solve_lp(lp);
    if (sol.status == LpStatus::Infeasible) {
        std::vector<std::string> rows;
        for (auto r : sol.infeasible_rows) rows.push_back(opf_detail::row_name(gc, r, outage));
        throw InfeasibleError("dispatch infeasible" +
                                  (outaged_line ? " with line " + *outaged_line + " out" : std::string()),
                              rows);
    }
    if (sol.status != LpStatus::Optimal)
        throw SolverFailure("dispatch problem reported unbounded; case data is inconsistent");

    const std::size_t nb = gc.buses.size();
    DispatchResult out;
    out.outaged_line = outaged_line;
    out.total_cost = sol.objective;
    out.angle_rad.assign(sol.x.begin(), sol.x.begin() + nb);
    out.gen_mw.assign(sol.x.begin() + nb, sol.x.end());
    out.flow_mw.assign(gc.lines.size(), 0.0);
    for (std::size_t l = 0; l < gc.lines.size(); ++l) {
        if (outage && *outage == l) continue;
        const auto f = gc.bus_index(gc.lines[l].from_bus);
        const auto t = gc.bus_index(gc.lines[l].to_bus);
        out.flow_mw[l] =
            gc.base_mva * (out.angle_rad[f] - out.angle_rad[t]) / gc.lines[l].reactance_pu;
    }

    // DispatchResult invariants: nodal balance and limit compliance.
    for (std::size_t b = 0; b < nb; ++b) {
        double inj = -gc.buses[b].load_mw;
        for (std::size_t g = 0; g < gc.generators.size(); ++g)
            if (gc.bus_index(gc.generators[g].bus) == b) inj += out.gen_mw[g];
        for (std::size_t l = 0; l < gc.lines.size(); ++l) {
            if (outage && *outage == l) continue;
            if (gc.bus_index(gc.lines[l].from_bus) == b) inj -= out.flow_mw[l];
            if (gc.bus_index(gc.lines[l].to_bus) == b) inj += out.flow_mw[l];
        }
        if (std::fabs(inj) > kPowerBalanceTolMw)
            throw SolverFailure("power balance residual " + std::to_string(inj) +
                                " MW at bus " + gc.buses[b].id);
    }
    for (std::size_t l = 0; l < gc.lines.size(); ++l) {
        if (outage && *outage == l) continue;
        if (gc.lines[l].limit_mw &&
            std::fabs(out.flow_mw[l]) > *gc.lines[l].limit_mw + kPowerBalanceTolMw)
            throw SolverFailure("thermal limit violated on line " + gc.lines[l].id);
    }
    return out;
}

// Economic cost of losing one line: redispatch delta over the repair window
// plus the repair cost itself.
inline double line_loss_cost(const GridCase& gc, const std::string& line_id) {
    const auto& line = gc.lines[gc.line_index(line_id)];
    const double v0 = solve_dc_opf(gc).total_cost;
    double v_out;
    try {
        v_out = solve_dc_opf(gc, line_id).total_cost;
    } catch (const InfeasibleError& e) {
        throw InfeasibleError("unservable contingency: line " + line_id, e.binding_constraints);
    }
    return (v_out - v0) * line.repair_hours + line.repair_cost;
}

inline std::vector<double> cost_vector(const GridCase& gc) {
    std::vector<double> f;
    f.reserve(gc.lines.size());
    const double v0 = solve_dc_opf(gc).total_cost;
    for (const auto& line : gc.lines) {
        try {
            const double v_out = solve_dc_opf(gc, line.id).total_cost;
            f.push_back((v_out - v0) * line.repair_hours + line.repair_cost);
        } catch (const InfeasibleError& e) {
            throw InfeasibleError("unservable contingency: line " + line.id,
                                  e.binding_constraints);
        } catch (const NetworkSplitError&) {
            throw NetworkSplitError("cost vector undefined: outage of line " + line.id +
                                    " splits the network");
        }
    }
    return f;
}

}  // namespace cpsg
