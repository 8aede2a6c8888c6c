#pragma once

// Scenario file: everything a run needs beyond the grid case itself.
//
//   [scenario]        grid_case, cyber_nodes, kappa_base
//   [interconnection] mode = wide_area | explicit, weights or matrix rows
//   [strategies]      line = cA, cB   (the line's two local cyber nodes)
//   [tau_grid]        min, max, count, spacing = linear | log
//   [output]          directory, formats = csv[, json]
//
// Parsing is strict: unknown sections, keys or malformed rows are errors.

#include <filesystem>
#include <string>
#include <utility>
#include <vector>

#include "cpsg/parse_util.hpp"

namespace cpsg {

struct TauGridSpec {
    double min = 0.05;
    double max = 20.0;
    std::size_t count = 241;
    enum class Spacing { Linear, Log } spacing = Spacing::Log;
};

struct ScenarioConfig {
    std::string scenario_path;
    std::string grid_path;  // resolved relative to the scenario file
    std::size_t cyber_nodes = 0;
    double kappa_base = 0.0;

    enum class RMode { WideArea, Explicit } r_mode = RMode::WideArea;
    double local_weight = 0.25;
    double remote_weight = 0.05;
    std::vector<std::vector<double>> explicit_r;  // one row per cyber node

    // (line id, its two local cyber nodes), in file order
    std::vector<std::pair<std::string, std::pair<std::string, std::string>>> strategies;

    TauGridSpec tau;
    std::string out_dir = "out";
    std::vector<std::string> formats;  // subset of {csv, json}
};

inline ScenarioConfig load_scenario(const std::string& path) {
    ScenarioConfig sc;
    sc.scenario_path = path;
    bool saw_grid = false, saw_nodes = false;

    for (const auto& it : parse::read_items(path)) {
        const std::string where = path + ":" + std::to_string(it.line_no);
        if (it.section == "scenario") {
            if (it.key == "grid_case") {
                const auto base = std::filesystem::path(path).parent_path();
                sc.grid_path = (base / it.value).string();
                saw_grid = true;
            } else if (it.key == "cyber_nodes") {
                const long n = parse::to_long(it.value, "cyber_nodes");
                if (n < 1) throw ParseError(where + ": cyber_nodes must be at least 1");
                sc.cyber_nodes = std::size_t(n);
                saw_nodes = true;
            } else if (it.key == "kappa_base") {
                sc.kappa_base = parse::to_double(it.value, "kappa_base");
                if (sc.kappa_base < 0.0 || sc.kappa_base > 1.0)
                    throw ParseError(where + ": kappa_base must lie in [0, 1]");
            } else {
                throw ParseError(where + ": unknown key '" + it.key + "' in [scenario]");
            }
        } else if (it.section == "interconnection") {
            if (it.key == "mode") {
                if (it.value == "wide_area") sc.r_mode = ScenarioConfig::RMode::WideArea;
                else if (it.value == "explicit") sc.r_mode = ScenarioConfig::RMode::Explicit;
                else throw ParseError(where + ": mode is 'wide_area' or 'explicit'");
            } else if (it.key == "local_weight") {
                sc.local_weight = parse::to_double(it.value, "local_weight");
            } else if (it.key == "remote_weight") {
                sc.remote_weight = parse::to_double(it.value, "remote_weight");
            } else if (it.key.empty()) {
                // matrix row for explicit mode
                std::vector<double> row;
                for (const auto& tok : parse::split_ws(it.value))
                    row.push_back(parse::to_double(tok, "interconnection row"));
                sc.explicit_r.push_back(std::move(row));
            } else {
                throw ParseError(where + ": unknown key '" + it.key + "' in [interconnection]");
            }
        } else if (it.section == "strategies") {
            if (it.key.empty())
                throw ParseError(where + ": strategies are 'line = nodeA, nodeB'");
            const auto nodes = parse::split_commas(it.value);
            if (nodes.size() != 2 || nodes[0].empty() || nodes[1].empty())
                throw ParseError(where + ": each line needs exactly two local cyber nodes");
            if (nodes[0] == nodes[1])
                throw ParseError(where + ": local cyber nodes must be distinct");
            sc.strategies.push_back({it.key, {nodes[0], nodes[1]}});
        } else if (it.section == "tau_grid") {
            if (it.key == "min") sc.tau.min = parse::to_double(it.value, "tau min");
            else if (it.key == "max") sc.tau.max = parse::to_double(it.value, "tau max");
            else if (it.key == "count") {
                const long n = parse::to_long(it.value, "tau count");
                if (n < 2) throw ParseError(where + ": tau grid needs at least two points");
                sc.tau.count = std::size_t(n);
            } else if (it.key == "spacing") {
                if (it.value == "linear") sc.tau.spacing = TauGridSpec::Spacing::Linear;
                else if (it.value == "log") sc.tau.spacing = TauGridSpec::Spacing::Log;
                else throw ParseError(where + ": spacing is 'linear' or 'log'");
            } else {
                throw ParseError(where + ": unknown key '" + it.key + "' in [tau_grid]");
            }
        } else if (it.section == "output") {
            if (it.key == "directory") sc.out_dir = it.value;
            else if (it.key == "formats") {
                for (const auto& f : parse::split_commas(it.value)) {
                    if (f != "csv" && f != "json")
                        throw ParseError(where + ": formats are 'csv' and 'json'");
                    sc.formats.push_back(f);
                }
            } else {
                throw ParseError(where + ": unknown key '" + it.key + "' in [output]");
            }
        } else {
            throw ParseError(where + ": unknown section [" + it.section + "]");
        }
    }

    if (!saw_grid || !saw_nodes)
        throw ParseError(path + ": [scenario] needs grid_case and cyber_nodes");
    if (!std::filesystem::exists(sc.grid_path))
        throw ParseError(path + ": grid case file not found: " + sc.grid_path);
    if (sc.strategies.empty())
        throw ParseError(path + ": [strategies] must declare at least one line");
    if (!(sc.tau.min > 0.0) || !(sc.tau.max > sc.tau.min))
        throw ParseError(path + ": tau grid bounds must satisfy 0 < min < max");
    if (sc.r_mode == ScenarioConfig::RMode::Explicit &&
        sc.explicit_r.size() != sc.cyber_nodes)
        throw ParseError(path + ": explicit interconnection needs one row per cyber node");
    if (sc.formats.empty()) sc.formats.push_back("csv");
    return sc;
}

}  // namespace cpsg
