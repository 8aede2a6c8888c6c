#pragma once

// Grid case file format, sectioned plain text:
//
//   [defaults]
//   base_mva = 100
//   slack_bus = b4
//   repair_hours = 12        # per-line default T
//   repair_cost = 80000      # per-line default CR
//
//   [buses]
//   # id  load_mw
//   b1  0
//
//   [lines]
//   # id  from  to  reactance_pu  limit_mw  [repair_hours  repair_cost]
//   p1  b1  b2  0.0281  400  12  80000     # limit 'inf' = unlimited
//
//   [generators]
//   # id  bus  cost_per_mwh  pmin_mw  pmax_mw
//   alta  b1  14  0  40
//
// Unknown sections and keys are rejected.

#include <optional>
#include <string>

#include "cpsg/grid.hpp"
#include "cpsg/parse_util.hpp"

namespace cpsg {

inline GridCase load_grid_case(const std::string& path) {
    GridCase gc;
    double default_T = 0.0, default_CR = 0.0;
    bool saw_defaults = false, saw_slack = false;

    for (const auto& it : parse::read_items(path)) {
        const std::string where = path + ":" + std::to_string(it.line_no);
        if (it.section == "defaults") {
            saw_defaults = true;
            if (it.key == "base_mva") gc.base_mva = parse::to_double(it.value, "base_mva");
            else if (it.key == "slack_bus") { gc.slack_bus = it.value; saw_slack = true; }
            else if (it.key == "repair_hours") default_T = parse::to_double(it.value, "repair_hours");
            else if (it.key == "repair_cost") default_CR = parse::to_double(it.value, "repair_cost");
            else throw ParseError(where + ": unknown key '" + it.key + "' in [defaults]");
        } else if (it.section == "buses") {
            const auto tok = parse::split_ws(it.value);
            if (!it.key.empty() || tok.size() != 2)
                throw ParseError(where + ": bus rows are 'id load_mw'");
            gc.buses.push_back({tok[0], parse::to_double(tok[1], "bus load")});
        } else if (it.section == "lines") {
            const auto tok = parse::split_ws(it.value);
            if (!it.key.empty() || (tok.size() != 5 && tok.size() != 7))
                throw ParseError(where +
                                 ": line rows are 'id from to reactance limit [T CR]'");
            Line l;
            l.id = tok[0];
            l.from_bus = tok[1];
            l.to_bus = tok[2];
            l.reactance_pu = parse::to_double(tok[3], "reactance");
            const double lim = parse::to_double(tok[4], "line limit");
            if (std::isfinite(lim)) l.limit_mw = lim;
            l.repair_hours = tok.size() == 7 ? parse::to_double(tok[5], "repair hours") : default_T;
            l.repair_cost = tok.size() == 7 ? parse::to_double(tok[6], "repair cost") : default_CR;
            gc.lines.push_back(std::move(l));
        } else if (it.section == "generators") {
            const auto tok = parse::split_ws(it.value);
            if (!it.key.empty() || tok.size() != 5)
                throw ParseError(where + ": generator rows are 'id bus cost pmin pmax'");
            gc.generators.push_back({tok[0], tok[1],
                                     parse::to_double(tok[2], "generator cost"),
                                     parse::to_double(tok[3], "pmin"),
                                     parse::to_double(tok[4], "pmax")});
        } else {
            throw ParseError(where + ": unknown section [" + it.section + "]");
        }
    }
    if (!saw_defaults || !saw_slack)
        throw ParseError(path + ": [defaults] with slack_bus is required");
    gc.validate();
    return gc;
}

}  // namespace cpsg
