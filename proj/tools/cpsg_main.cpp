// cpsg: cyber-physical security game analysis over a grid scenario.
//
//   cpsg opf      --config <scenario>   dispatch, flows, contingency values
//   cpsg costs    --config <scenario>   per-line loss costs
//   cpsg payoffs  --config <scenario>   defender/attacker payoff matrix
//   cpsg ne       --config <scenario>   mixed equilibrium of the zero-sum game
//   cpsg ch-sweep --config <scenario>   bounded-rationality tau sweep
//   cpsg all      --config <scenario>   the full pipeline
//
// Flags select commands and output handling only; all physics and game
// parameters come from the scenario file.

#include <chrono>
#include <cstdio>
#include <ctime>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "cpsg/pipeline.hpp"

#ifndef CPSG_VERSION
#define CPSG_VERSION "0.0.0"
#endif

namespace {

std::string utc_now() {
    const auto now = std::chrono::system_clock::now();
    const std::time_t t = std::chrono::system_clock::to_time_t(now);
    std::tm tm{};
    gmtime_r(&t, &tm);
    char buf[32];
    std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
    return buf;
}

double display(double v, bool thousands) { return thousands ? v / 1000.0 : v; }

void print_summary(const cpsg::PipelineResult& r, cpsg::Stage upto, bool thousands) {
    using cpsg::Stage;
    const char* unit = thousands ? " (thousands)" : "";
    std::printf("base dispatch cost: %.6g%s per hour\n",
                display(r.base.total_cost, thousands), unit);
    std::printf("line flows (MW):");
    for (std::size_t l = 0; l < r.grid.lines.size(); ++l)
        std::printf(" %s=%.6g", r.grid.lines[l].id.c_str(), r.base.flow_mw[l]);
    std::printf("\n");
    if (upto == Stage::Opf) return;
    std::printf("loss costs%s:", unit);
    for (std::size_t l = 0; l < r.grid.lines.size(); ++l)
        std::printf(" %s=%.6g", r.grid.lines[l].id.c_str(), display(r.costs[l], thousands));
    std::printf("\n");
    if (upto == Stage::Costs) return;
    if (upto == Stage::Payoffs) return;
    std::printf("equilibrium value (defender)%s: %.6g\n",
                unit, display(r.equilibrium.defender_value, thousands));
    std::printf("defender mix:");
    for (std::size_t i = 0; i < r.strategies.size(); ++i)
        std::printf(" %s=%.4f", r.strategies.labels[i].c_str(),
                    r.equilibrium.defender.prob[i]);
    std::printf("\nattacker mix:");
    for (std::size_t i = 0; i < r.strategies.size(); ++i)
        std::printf(" %s=%.4f", r.strategies.labels[i].c_str(),
                    r.equilibrium.attacker.prob[i]);
    std::printf("\n");
    if (upto == Stage::Ne) return;
    std::size_t switches = 0;
    for (std::size_t i = 1; i < r.sweep.size(); ++i)
        if (r.sweep[i].ch_defense != r.sweep[i - 1].ch_defense) ++switches;
    std::printf("tau sweep: %zu points, %zu defense switch(es)\n", r.sweep.size(), switches);
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"cyber-physical security game analysis"};
    app.require_subcommand(1);
    app.fallthrough();  // global flags may follow the subcommand

    std::string config_path;
    std::optional<std::string> out_dir;
    std::string format;
    bool thousands = false;

    app.add_option("--config", config_path, "scenario file")->required();
    app.add_option("--out", out_dir, "output directory (default: from scenario)");
    app.add_option("--format", format, "artifact format: csv or json (json adds mirrors)")
        ->check(CLI::IsMember({"csv", "json"}));
    app.add_flag("--thousands", thousands, "display currency divided by 1,000");

    auto* cmd_opf = app.add_subcommand("opf", "dispatch, flows and contingency values");
    auto* cmd_costs = app.add_subcommand("costs", "per-line loss costs");
    auto* cmd_payoffs = app.add_subcommand("payoffs", "payoff matrix");
    auto* cmd_ne = app.add_subcommand("ne", "zero-sum equilibrium");
    auto* cmd_sweep = app.add_subcommand("ch-sweep", "bounded-rationality tau sweep");
    app.add_subcommand("all", "full pipeline");

    CLI11_PARSE(app, argc, argv);

    cpsg::Stage upto = cpsg::Stage::ChSweep;
    if (cmd_opf->parsed()) upto = cpsg::Stage::Opf;
    else if (cmd_costs->parsed()) upto = cpsg::Stage::Costs;
    else if (cmd_payoffs->parsed()) upto = cpsg::Stage::Payoffs;
    else if (cmd_ne->parsed()) upto = cpsg::Stage::Ne;
    else if (cmd_sweep->parsed()) upto = cpsg::Stage::ChSweep;

    try {
        const auto ctx = cpsg::make_context(config_path, CPSG_VERSION);
        const auto result = cpsg::run_and_emit(
            ctx, upto, out_dir,
            format.empty() ? std::nullopt : std::optional<std::string>(format), utc_now());
        print_summary(result, upto, thousands);
        const std::string dir = out_dir ? *out_dir : ctx.config.out_dir;
        std::printf("artifacts written to %s (config %s)\n", dir.c_str(),
                    ctx.config_hash.c_str());
        return 0;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 1;
    }
}
