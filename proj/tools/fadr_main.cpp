// Command-line front end: derive transmit parameters from gateway
// measurements, simulate single cells, and sweep allocator comparisons.

#include <cmath>
#include <cstdio>
#include <iostream>
#include <limits>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "fadr/allocation.hpp"
#include "fadr/config.hpp"
#include "fadr/csv.hpp"
#include "fadr/harness.hpp"
#include "fadr/metrics.hpp"
#include "fadr/simulator.hpp"
#include "fadr/study.hpp"

namespace {

using namespace fadr;

std::string read_input(const std::string& path) {
    if (path == "-") {
        std::ostringstream ss;
        ss << std::cin.rdbuf();
        return ss.str();
    }
    return read_text_file(path);
}

void write_output(const std::string& path, const std::string& text) {
    if (path == "-") {
        std::fwrite(text.data(), 1, text.size(), stdout);
        return;
    }
    write_text_file(path, text);
}

// Shared experiment surface: preset defaults, then the config file,
// then every --set, so the command line always wins.
ExperimentSpec build_spec(const std::string& config_path,
                          const std::vector<std::string>& overrides) {
    ExperimentSpec spec = desk_preset();
    if (!config_path.empty()) apply_options(spec, load_key_values(config_path));
    for (const std::string& item : overrides) {
        const std::size_t eq = item.find('=');
        if (eq == std::string::npos)
            throw std::invalid_argument("--set expects key=value, got '" + item + "'");
        apply_option(spec, item.substr(0, eq), item.substr(eq + 1));
    }
    return spec;
}

int cmd_allocate(const std::string& input, const std::string& output,
                 const std::string& allocator_name, double bootstrap_tp,
                 const std::string& config_path, const std::vector<std::string>& overrides) {
    const ExperimentSpec spec = build_spec(config_path, overrides);
    const SimConfig& base = spec.base;
    const double measure_tp =
        std::isnan(bootstrap_tp)
            ? base.bootstrap_tp_dbm.value_or(base.levels.levels_dbm.back())
            : bootstrap_tp;
    const std::vector<NodeSnapshot> snaps = parse_snapshot_csv(read_input(input), measure_tp);

    AllocationResult result;
    switch (allocator_from_string(allocator_name)) {
        case AllocatorKind::fadr:
            result = fadr_allocation(snaps, base.levels, base.cir, base.group_size);
            break;
        case AllocatorKind::reynders:
            result = reynders_allocation(snaps, base.levels, base.cir);
            break;
        case AllocatorKind::sn5:
            result = sn5_allocation(snaps, base.radio, base.levels);
            break;
        case AllocatorKind::fixed:
            result = fixed_allocation(snaps,
                                      base.fixed_tp_dbm.value_or(base.levels.levels_dbm.back()));
            break;
    }
    write_output(output, allocation_csv(result));
    if (!result.feasible)
        std::fprintf(stderr,
                     "note: received powers spread beyond the mutual-capture margin\n");
    return 0;
}

int cmd_run(std::uint32_t nodes, std::uint64_t seed, const std::string& allocator_name,
            const std::string& output, const std::string& log_path,
            const std::string& alloc_path, bool report, const std::string& config_path,
            const std::vector<std::string>& overrides) {
    const ExperimentSpec spec = build_spec(config_path, overrides);
    SimConfig cfg = spec.base;
    cfg.node_count = nodes;
    cfg.seed = seed;
    cfg.allocator = allocator_from_string(allocator_name);
    cfg.record_log = !log_path.empty();
    validate(cfg);

    const RunResult result = run(cfg);
    write_output(output, per_node_csv(result));
    if (!log_path.empty()) write_output(log_path, transmission_log_csv(result.log));
    if (!alloc_path.empty()) {
        AllocationResult alloc;
        alloc.feasible = result.allocation_feasible;
        for (const NodeState& n : result.nodes)
            alloc.assignments.push_back({n.node_id, n.sf, n.tp_dbm, n.reachable});
        write_output(alloc_path, allocation_csv(alloc));
    }
    if (report) {
        const MetricsReport metrics = build_report(result, cfg, spec.energy, spec.distance_bin_m);
        std::fprintf(stderr, "nodes: %zu\n", result.nodes.size());
        std::fprintf(stderr, "overall delivery ratio: %.6f\n", metrics.overall_der);
        if (metrics.fairness)
            std::fprintf(stderr, "fairness index: %.6f\n", *metrics.fairness);
        std::fprintf(stderr, "transmit energy: %.3f J\n", metrics.total_energy_j);
        std::fprintf(stderr, "allocation within capture margin: %s\n",
                     result.allocation_feasible ? "yes" : "no");
    }
    return 0;
}

int cmd_sweep(const std::string& out_dir, const std::string& config_path,
              const std::vector<std::string>& overrides) {
    const ExperimentSpec spec = build_spec(config_path, overrides);
    const ExperimentResults results = run_experiment(spec);
    write_experiment_files(spec, results, out_dir);
    std::fprintf(stderr, "wrote %zu cells to %s\n", results.cells.size(), out_dir.c_str());
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"LoRaWAN cell simulator with fairness-oriented data-rate "
                 "and power allocation"};
    app.require_subcommand(1);

    std::string config_path;
    std::vector<std::string> overrides;
    app.add_option("--config", config_path, "key=value file applied over the built-in preset")
        ->expected(1);
    app.add_option("--set", overrides, "override one option (key=value), repeatable");

    auto* allocate = app.add_subcommand(
        "allocate", "derive SF/TP assignments from a node_id,rssi_dbm snapshot");
    allocate->fallthrough(); // shared --config / --set parse from anywhere
    std::string input = "-";
    std::string alloc_output = "-";
    std::string allocator_name = "fadr";
    double bootstrap_tp = std::numeric_limits<double>::quiet_NaN();
    allocate->add_option("--input", input, "snapshot CSV path, '-' for stdin");
    allocate->add_option("--output", alloc_output, "allocation CSV path, '-' for stdout");
    allocate->add_option("--allocator", allocator_name, "fadr | reynders | sn5 | fixed");
    allocate->add_option("--measure-tp", bootstrap_tp,
                         "transmit power used for the snapshot (dBm); default from options");

    auto* run_cmd = app.add_subcommand("run", "simulate one cell and dump per-node results");
    run_cmd->fallthrough();
    std::uint32_t nodes = 100;
    std::uint64_t seed = 1;
    std::string run_allocator = "fadr";
    std::string run_output = "-";
    std::string log_path;
    std::string alloc_path;
    bool report = false;
    run_cmd->add_option("--nodes", nodes, "population size");
    run_cmd->add_option("--seed", seed, "simulation seed");
    run_cmd->add_option("--allocator", run_allocator, "fadr | reynders | sn5 | fixed");
    run_cmd->add_option("--output", run_output, "per-node CSV path, '-' for stdout");
    run_cmd->add_option("--log", log_path, "also write the transmission log CSV here");
    run_cmd->add_option("--alloc-output", alloc_path, "also write the allocation CSV here");
    run_cmd->add_flag("--report", report, "print summary metrics to stderr");

    auto* sweep = app.add_subcommand(
        "sweep", "run the allocator x population x seed grid and write figure CSVs");
    sweep->fallthrough();
    std::string out_dir;
    sweep->add_option("--out", out_dir, "output directory")->required();

    auto* options_cmd = app.add_subcommand("options", "list every --set / config-file key");

    CLI11_PARSE(app, argc, argv);

    try {
        if (options_cmd->parsed()) {
            std::fputs(option_help().c_str(), stdout);
            return 0;
        }
        if (allocate->parsed())
            return cmd_allocate(input, alloc_output, allocator_name, bootstrap_tp, config_path,
                                overrides);
        if (run_cmd->parsed())
            return cmd_run(nodes, seed, run_allocator, run_output, log_path, alloc_path, report,
                           config_path, overrides);
        if (sweep->parsed()) return cmd_sweep(out_dir, config_path, overrides);
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 1;
    }
    return 0;
}
