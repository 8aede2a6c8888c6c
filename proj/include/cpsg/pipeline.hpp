#pragma once

// End-to-end orchestration: dispatch -> loss costs -> interconnection ->
// payoffs -> equilibrium -> tau sweep, with per-stage artifact emission.
// Stages always run in that order; a failing stage moves everything
// written so far into a quarantine subdirectory and rethrows.

#include <array>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <type_traits>
#include <vector>

#include <json.hpp>

#include "cpsg/csv.hpp"
#include "cpsg/diffusion.hpp"
#include "cpsg/game.hpp"
#include "cpsg/grid_io.hpp"
#include "cpsg/hierarchy.hpp"
#include "cpsg/opf.hpp"
#include "cpsg/scenario.hpp"

namespace cpsg {

enum class Stage { Opf, Costs, Payoffs, Ne, ChSweep };

inline const char* stage_name(Stage s) {
    switch (s) {
        case Stage::Opf: return "opf";
        case Stage::Costs: return "costs";
        case Stage::Payoffs: return "payoffs";
        case Stage::Ne: return "ne";
        case Stage::ChSweep: return "ch-sweep";
    }
    return "?";
}

struct PipelineResult {
    GridCase grid;
    DispatchResult base;
    std::vector<double> contingency_value;  // per line
    std::vector<double> costs;              // f, per line
    CyberLayer layer;
    InterconnectionMatrix R;
    StrategySet strategies;                 // shared by both players
    PayoffMatrix payoffs;
    Equilibrium equilibrium;
    std::array<AttackerTypePolicy, 3> policies;
    std::vector<SweepRow> sweep;
    std::vector<std::string> stages_run;
};

struct RunContext {
    ScenarioConfig config;
    std::string config_hash;  // over scenario + grid bytes
    std::string version;
};

inline RunContext make_context(const std::string& scenario_path, const std::string& version) {
    RunContext ctx;
    ctx.config = load_scenario(scenario_path);
    auto h = csvio::fnv1a64(csvio::file_bytes(scenario_path));
    h = csvio::fnv1a64(csvio::file_bytes(ctx.config.grid_path), h);
    ctx.config_hash = csvio::hash_hex(h);
    ctx.version = version;
    return ctx;
}

namespace pipeline_detail {

inline CyberLayer make_layer(const ScenarioConfig& sc) {
    return CyberLayer::uniform(sc.cyber_nodes, sc.kappa_base);
}

inline StrategySet make_strategies(const ScenarioConfig& sc, const CyberLayer& layer) {
    StrategySet s;
    for (const auto& [line, pair] : sc.strategies) {
        s.labels.push_back(line);
        s.node_sets.push_back({pair.first, pair.second});
    }
    s.validate(layer);
    return s;
}

inline InterconnectionMatrix make_r(const ScenarioConfig& sc, const GridCase& grid,
                                    const CyberLayer& layer) {
    std::vector<std::string> line_ids;
    for (const auto& l : grid.lines) line_ids.push_back(l.id);
    if (sc.r_mode == ScenarioConfig::RMode::Explicit) {
        InterconnectionMatrix R;
        R.r = sc.explicit_r;
        R.validate();
        if (R.num_physical() != line_ids.size())
            throw StructuralError("explicit interconnection matrix has " +
                                  std::to_string(R.num_physical()) + " columns for " +
                                  std::to_string(line_ids.size()) + " lines");
        return R;
    }
    std::map<std::string, std::pair<std::string, std::string>> local;
    for (const auto& [line, pair] : sc.strategies) {
        grid.line_index(line);  // label must name a grid line
        local[line] = pair;
    }
    return build_wide_area_r(sc.cyber_nodes, line_ids, local, layer, sc.local_weight,
                             sc.remote_weight);
}

// Per-strategy perception vectors (|flow| and loss cost of the labeled line).
inline std::vector<double> strategy_keyed(const GridCase& grid, const StrategySet& s,
                                          const std::vector<double>& per_line) {
    std::vector<double> out;
    for (const auto& label : s.labels) out.push_back(per_line[grid.line_index(label)]);
    return out;
}

}  // namespace pipeline_detail

// Compute (no emission). `upto` is the last stage executed; `on_stage` runs
// after each completed stage with the result accumulated so far.
template <typename StageHook = std::nullptr_t>
inline PipelineResult run_pipeline(const RunContext& ctx, Stage upto = Stage::ChSweep,
                                   StageHook&& on_stage = nullptr) {
    const auto& sc = ctx.config;
    auto notify = [&](Stage st, const PipelineResult& res) {
        if constexpr (!std::is_same_v<std::decay_t<StageHook>, std::nullptr_t>)
            on_stage(st, res);
    };
    PipelineResult res;
    res.grid = load_grid_case(sc.grid_path);
    res.layer = pipeline_detail::make_layer(sc);
    res.strategies = pipeline_detail::make_strategies(sc, res.layer);

    res.base = solve_dc_opf(res.grid);
    for (const auto& line : res.grid.lines)
        res.contingency_value.push_back(solve_dc_opf(res.grid, line.id).total_cost);
    res.stages_run.push_back(stage_name(Stage::Opf));
    notify(Stage::Opf, res);
    if (upto == Stage::Opf) return res;

    res.costs.reserve(res.grid.lines.size());
    for (std::size_t l = 0; l < res.grid.lines.size(); ++l)
        res.costs.push_back((res.contingency_value[l] - res.base.total_cost) *
                                res.grid.lines[l].repair_hours +
                            res.grid.lines[l].repair_cost);
    res.stages_run.push_back(stage_name(Stage::Costs));
    notify(Stage::Costs, res);
    if (upto == Stage::Costs) return res;

    res.R = pipeline_detail::make_r(sc, res.grid, res.layer);
    res.payoffs = build_payoff_matrix(res.layer, res.R, res.costs, res.strategies,
                                      res.strategies);
    res.stages_run.push_back(stage_name(Stage::Payoffs));
    notify(Stage::Payoffs, res);
    if (upto == Stage::Payoffs) return res;

    res.equilibrium = solve_zero_sum_ne(res.payoffs);
    res.stages_run.push_back(stage_name(Stage::Ne));
    notify(Stage::Ne, res);
    if (upto == Stage::Ne) return res;

    std::vector<double> abs_flows(res.base.flow_mw.size());
    for (std::size_t l = 0; l < abs_flows.size(); ++l)
        abs_flows[l] = std::fabs(res.base.flow_mw[l]);
    const auto omega = pipeline_detail::strategy_keyed(res.grid, res.strategies, abs_flows);
    const auto fkey = pipeline_detail::strategy_keyed(res.grid, res.strategies, res.costs);
    res.policies = {attacker_policy(0, res.strategies, nullptr, nullptr),
                    attacker_policy(1, res.strategies, &omega, nullptr),
                    attacker_policy(2, res.strategies, nullptr, &fkey)};
    const auto grid_pts = sc.tau.spacing == TauGridSpec::Spacing::Log
                              ? log_grid(sc.tau.min, sc.tau.max, sc.tau.count)
                              : linear_grid(sc.tau.min, sc.tau.max, sc.tau.count);
    res.sweep = tau_sweep(res.payoffs, res.equilibrium.defender, res.policies, grid_pts);
    res.stages_run.push_back(stage_name(Stage::ChSweep));
    notify(Stage::ChSweep, res);
    return res;
}

namespace pipeline_detail {

using csvio::format_full;
using csvio::format_sig;

inline void emit_opf(const PipelineResult& r, csvio::ArtifactWriter& w, bool json_too);
inline void emit_costs(const PipelineResult& r, csvio::ArtifactWriter& w, bool json_too);
inline void emit_payoffs(const PipelineResult& r, csvio::ArtifactWriter& w, bool json_too);
inline void emit_ne(const PipelineResult& r, csvio::ArtifactWriter& w, bool json_too);
inline void emit_sweep(const PipelineResult& r, csvio::ArtifactWriter& w, bool json_too);

inline void emit_opf(const PipelineResult& r, csvio::ArtifactWriter& w, bool json_too) {
    {
        auto out = w.open("flows.csv");
        out << "line_id,flow_mw,abs_flow_mw\n";
        for (std::size_t l = 0; l < r.grid.lines.size(); ++l)
            out << r.grid.lines[l].id << "," << format_sig(r.base.flow_mw[l]) << ","
                << format_sig(std::fabs(r.base.flow_mw[l])) << "\n";
    }
    {
        auto out = w.open("dispatch.csv");
        out << "generator,output_mw,marginal_cost\n";
        for (std::size_t g = 0; g < r.grid.generators.size(); ++g)
            out << r.grid.generators[g].id << "," << format_sig(r.base.gen_mw[g]) << ","
                << format_sig(r.grid.generators[g].cost_per_mwh) << "\n";
        out << "total_cost," << format_sig(r.base.total_cost) << ",\n";
    }
    {
        auto out = w.open("contingency.csv");
        out << "line_id,value_function,base_value,delta\n";
        for (std::size_t l = 0; l < r.grid.lines.size(); ++l)
            out << r.grid.lines[l].id << "," << format_sig(r.contingency_value[l]) << ","
                << format_sig(r.base.total_cost) << ","
                << format_sig(r.contingency_value[l] - r.base.total_cost) << "\n";
    }
    if (json_too) {
        nlohmann::ordered_json j;
        j["config_hash"] = w.config_hash();
        j["base_value"] = r.base.total_cost;
        for (std::size_t l = 0; l < r.grid.lines.size(); ++l) {
            j["flows"][r.grid.lines[l].id] = r.base.flow_mw[l];
            j["contingency_value"][r.grid.lines[l].id] = r.contingency_value[l];
        }
        auto out = w.open("opf.json");
        out << j.dump(2) << "\n";
    }
}

inline void emit_costs(const PipelineResult& r, csvio::ArtifactWriter& w, bool json_too) {
    {
        auto out = w.open("costs.csv");
        out << "line_id,delta_cost_per_hour,repair_hours,repair_cost,total_cost\n";
        for (std::size_t l = 0; l < r.grid.lines.size(); ++l)
            out << r.grid.lines[l].id << ","
                << format_sig(r.contingency_value[l] - r.base.total_cost) << ","
                << format_sig(r.grid.lines[l].repair_hours) << ","
                << format_sig(r.grid.lines[l].repair_cost) << ","
                << format_sig(r.costs[l]) << "\n";
    }
    {
        auto out = w.open("costs_plot.csv");
        out << "line_id,cost\n";
        for (std::size_t l = 0; l < r.grid.lines.size(); ++l)
            out << r.grid.lines[l].id << "," << format_sig(r.costs[l]) << "\n";
    }
    if (json_too) {
        nlohmann::ordered_json j;
        j["config_hash"] = w.config_hash();
        for (std::size_t l = 0; l < r.grid.lines.size(); ++l)
            j["costs"][r.grid.lines[l].id] = r.costs[l];
        auto out = w.open("costs.json");
        out << j.dump(2) << "\n";
    }
}

inline void emit_payoffs(const PipelineResult& r, csvio::ArtifactWriter& w, bool json_too) {
    {
        auto out = w.open("payoffs.csv");
        write_payoff_csv(r.payoffs, out);
    }
    if (json_too) {
        nlohmann::ordered_json j;
        j["config_hash"] = w.config_hash();
        j["rows"] = r.payoffs.row_labels;
        j["cols"] = r.payoffs.col_labels;
        j["attacker_payoff"] = r.payoffs.attacker;
        auto out = w.open("payoffs.json");
        out << j.dump(2) << "\n";
    }
}

inline void emit_ne(const PipelineResult& r, csvio::ArtifactWriter& w, bool json_too) {
    {
        auto out = w.open("ne.csv");
        out << "strategy,defender_prob,attacker_prob,game_value,certificate_residual\n";
        for (std::size_t i = 0; i < r.strategies.size(); ++i)
            out << r.strategies.labels[i] << ","
                << format_full(r.equilibrium.defender.prob[i]) << ","
                << format_full(r.equilibrium.attacker.prob[i]) << ","
                << format_sig(r.equilibrium.defender_value) << ","
                << format_sig(r.equilibrium.certificate_residual) << "\n";
    }
    if (json_too) {
        nlohmann::ordered_json j;
        j["config_hash"] = w.config_hash();
        j["defender_mix"] = r.equilibrium.defender.prob;
        j["attacker_mix"] = r.equilibrium.attacker.prob;
        j["defender_value"] = r.equilibrium.defender_value;
        j["certificate_residual"] = r.equilibrium.certificate_residual;
        auto out = w.open("ne.json");
        out << j.dump(2) << "\n";
    }
}

inline void emit_sweep(const PipelineResult& r, csvio::ArtifactWriter& w, bool json_too) {
    {
        auto out = w.open("sweep.csv");
        out << "# gain = (ch_value - ne_value) / |ne_value|; less-negative utility is better\n";
        out << "tau,alpha0,alpha1,alpha2,ch_defense,ch_value,ne_value,gain\n";
        for (const auto& row : r.sweep)
            out << format_sig(row.tau) << "," << format_sig(row.alpha[0]) << ","
                << format_sig(row.alpha[1]) << "," << format_sig(row.alpha[2]) << ","
                << r.strategies.labels[row.ch_defense] << "," << format_sig(row.ch_value)
                << "," << format_sig(row.ne_value) << "," << format_sig(row.gain) << "\n";
    }
    if (json_too) {
        nlohmann::ordered_json j;
        j["config_hash"] = w.config_hash();
        for (const auto& row : r.sweep) {
            nlohmann::ordered_json o;
            o["tau"] = row.tau;
            o["alpha"] = row.alpha;
            o["ch_defense"] = r.strategies.labels[row.ch_defense];
            o["ch_value"] = row.ch_value;
            o["ne_value"] = row.ne_value;
            o["gain"] = row.gain;
            j["rows"].push_back(o);
        }
        auto out = w.open("sweep.json");
        out << j.dump(2) << "\n";
    }
}

}  // namespace pipeline_detail

// Compute up to `upto` and emit the artifacts of every completed stage into
// ctx.config.out_dir (or `out_override`). On failure, everything written so
// far moves to <out>/quarantine/ and the error propagates. The run report
// is the only artifact carrying wall-clock time.
inline PipelineResult run_and_emit(const RunContext& ctx, Stage upto,
                                   std::optional<std::string> out_override = std::nullopt,
                                   std::optional<std::string> format_override = std::nullopt,
                                   std::string timestamp_utc = "") {
    const auto& sc = ctx.config;
    const std::filesystem::path out_dir = out_override ? *out_override : sc.out_dir;
    bool json_too = false;
    if (format_override) json_too = *format_override == "json";
    else
        for (const auto& f : sc.formats)
            if (f == "json") json_too = true;

    csvio::ArtifactWriter writer(out_dir, ctx.config_hash, ctx.version);
    auto write_report = [&](const std::string& status, const std::vector<std::string>& stages) {
        nlohmann::ordered_json j;
        j["tool"] = "cpsg";
        j["version"] = ctx.version;
        j["config_hash"] = ctx.config_hash;
        j["scenario"] = std::filesystem::path(sc.scenario_path).filename().string();
        j["timestamp_utc"] = timestamp_utc;
        j["status"] = status;
        j["stages"] = stages;
        auto out = writer.open("run_report.json");
        out << j.dump(2) << "\n";
    };

    try {
        // Emit each stage's artifacts as soon as the stage completes, so a
        // failed run leaves the finished stages' files for quarantine.
        const auto emit_hook = [&](Stage st, const PipelineResult& r) {
            switch (st) {
                case Stage::Opf: pipeline_detail::emit_opf(r, writer, json_too); break;
                case Stage::Costs: pipeline_detail::emit_costs(r, writer, json_too); break;
                case Stage::Payoffs: pipeline_detail::emit_payoffs(r, writer, json_too); break;
                case Stage::Ne: pipeline_detail::emit_ne(r, writer, json_too); break;
                case Stage::ChSweep: pipeline_detail::emit_sweep(r, writer, json_too); break;
            }
        };
        PipelineResult res = run_pipeline(ctx, upto, emit_hook);
        write_report("ok", res.stages_run);
        return res;
    } catch (...) {
        // Quarantine whatever was already written.
        const auto qdir = out_dir / "quarantine";
        std::filesystem::create_directories(qdir);
        for (const auto& name : writer.written()) {
            std::error_code ec;
            std::filesystem::rename(out_dir / name, qdir / name, ec);
        }
        try {
            csvio::ArtifactWriter qwriter(qdir, ctx.config_hash, ctx.version);
            nlohmann::ordered_json j;
            j["tool"] = "cpsg";
            j["version"] = ctx.version;
            j["config_hash"] = ctx.config_hash;
            j["timestamp_utc"] = timestamp_utc;
            j["status"] = "failed";
            auto out = qwriter.open("run_report.json");
            out << j.dump(2) << "\n";
        } catch (...) {
        }
        throw;
    }
}

}  // namespace cpsg
