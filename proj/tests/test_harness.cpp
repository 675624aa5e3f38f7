#include <doctest.h>

#include <stdexcept>
#include <cmath>
#include <filesystem>
#include <map>
#include <string>
#include <vector>

#include "fadr/config.hpp"
#include "fadr/csv.hpp"
#include "fadr/harness.hpp"

using namespace fadr;

namespace {

constexpr double kTol = 1e-9;

ExperimentSpec tiny_spec() {
    ExperimentSpec spec;
    spec.allocators = {AllocatorKind::sn5, AllocatorKind::fixed};
    spec.node_counts = {30, 60};
    spec.seeds = {11, 12};
    spec.base.cell_radius_m = 190.0;
    spec.base.min_distance_m = 30.0;
    spec.base.sim_time_s = 600.0;
    spec.base.channel_count = 1;
    spec.distance_bin_m = 50.0;
    spec.distance_profile_nodes = 60;
    spec.jobs = 1;
    return spec;
}

std::vector<std::vector<std::string>> parse_rows(const std::string& csv) {
    std::vector<std::vector<std::string>> rows;
    for (const std::string& line : split_lines(csv)) rows.push_back(split_csv_line(line));
    return rows;
}

} // namespace

TEST_CASE("aggregate: hand-checked mean and sample deviation") {
    const std::vector<double> v{1.0, 2.0, 3.0, 4.0};
    const Aggregate a = aggregate(v);
    CHECK(std::abs(a.mean - 2.5) < kTol);
    CHECK(std::abs(a.stddev - std::sqrt(5.0 / 3.0)) < kTol);

    const std::vector<double> one{7.0};
    CHECK(aggregate(one).mean == 7.0);
    CHECK(aggregate(one).stddev == 0.0);

    CHECK_THROWS_AS(aggregate(std::vector<double>{}), std::invalid_argument);
}

TEST_CASE("experiment grid: order, shape, and value sanity") {
    const ExperimentSpec spec = tiny_spec();
    const ExperimentResults results = run_experiment(spec);
    REQUIRE(results.cells.size() == 8);

    std::size_t i = 0;
    for (AllocatorKind a : spec.allocators) {
        for (std::uint32_t n : spec.node_counts) {
            for (std::uint64_t s : spec.seeds) {
                const CellResult& c = results.cells[i++];
                CHECK(c.allocator == a);
                CHECK(c.node_count == n);
                CHECK(c.seed == s);
                CHECK(c.overall_der >= 0.0);
                CHECK(c.overall_der <= 1.0);
                CHECK(c.energy_j > 0.0);
                if (!std::isnan(c.fairness)) {
                    CHECK(c.fairness > 0.0);
                    CHECK(c.fairness <= 1.0 + kTol);
                }
            }
        }
    }

    ExperimentSpec bad = spec;
    bad.allocators.clear();
    CHECK_THROWS_AS(run_experiment(bad), std::invalid_argument);
    bad = spec;
    bad.jobs = 0;
    CHECK_THROWS_AS(run_experiment(bad), std::invalid_argument);
}

TEST_CASE("experiment grid: parallel and repeated runs are byte-identical") {
    ExperimentSpec spec = tiny_spec();
    const ExperimentResults serial = run_experiment(spec);
    const ExperimentResults again = run_experiment(spec);
    spec.jobs = 4;
    const ExperimentResults parallel = run_experiment(spec);

    CHECK(summary_csv(serial) == summary_csv(again));
    CHECK(summary_csv(serial) == summary_csv(parallel));
    CHECK(figure_metric_csv(serial, FigureMetric::fairness) ==
          figure_metric_csv(parallel, FigureMetric::fairness));
    CHECK(der_vs_distance_csv(spec, serial) == der_vs_distance_csv(spec, parallel));
}

TEST_CASE("summary csv mirrors the cell list") {
    const ExperimentSpec spec = tiny_spec();
    const ExperimentResults results = run_experiment(spec);
    const auto rows = parse_rows(summary_csv(results));
    REQUIRE(rows.size() == results.cells.size() + 1);
    CHECK(rows[0] == std::vector<std::string>{"allocator", "node_count", "seed", "fairness",
                                              "overall_der", "energy_j"});
    for (std::size_t i = 0; i < results.cells.size(); ++i) {
        const CellResult& c = results.cells[i];
        const auto& row = rows[i + 1];
        REQUIRE(row.size() == 6);
        CHECK(row[0] == to_string(c.allocator));
        CHECK(row[1] == std::to_string(c.node_count));
        CHECK(row[2] == std::to_string(c.seed));
        CHECK(parse_double(row[4]) == c.overall_der); // shortest round-trip text
        CHECK(parse_double(row[5]) == c.energy_j);
    }
}

TEST_CASE("figure csv aggregates seeds per allocator and size") {
    const ExperimentSpec spec = tiny_spec();
    const ExperimentResults results = run_experiment(spec);
    const auto rows = parse_rows(figure_metric_csv(results, FigureMetric::overall_der));
    REQUIRE(rows.size() == 5); // header + 2 allocators x 2 sizes
    CHECK(rows[0] == std::vector<std::string>{"allocator", "node_count", "mean", "stddev"});

    std::size_t r = 1;
    for (AllocatorKind a : spec.allocators) {
        for (std::uint32_t n : spec.node_counts) {
            std::vector<double> values;
            for (const CellResult& c : results.cells)
                if (c.allocator == a && c.node_count == n) values.push_back(c.overall_der);
            const Aggregate agg = aggregate(values);
            const auto& row = rows[r++];
            REQUIRE(row.size() == 4);
            CHECK(row[0] == to_string(a));
            CHECK(row[1] == std::to_string(n));
            CHECK(parse_double(row[2]) == agg.mean);
            CHECK(parse_double(row[3]) == agg.stddev);
        }
    }
}

TEST_CASE("distance csv: only the profile size, seed-aggregated per bin") {
    const ExperimentSpec spec = tiny_spec();
    const ExperimentResults results = run_experiment(spec);
    const auto rows = parse_rows(der_vs_distance_csv(spec, results));
    REQUIRE(rows.size() > 1);
    CHECK(rows[0] ==
          std::vector<std::string>{"allocator", "distance_bin_m", "mean_der", "stddev_der"});

    // Recompute one series by hand: per-seed bin means for sn5 at 60 nodes.
    std::map<double, std::vector<double>> expected;
    for (const CellResult& c : results.cells) {
        if (c.allocator != AllocatorKind::sn5 || c.node_count != 60) continue;
        for (const DistanceBin& bin : c.der_by_distance)
            expected[bin.center_m].push_back(bin.mean_der);
    }
    REQUIRE(!expected.empty());

    std::size_t matched = 0;
    bool seen_fixed = false;
    for (std::size_t i = 1; i < rows.size(); ++i) {
        const auto& row = rows[i];
        REQUIRE(row.size() == 4);
        const double center = parse_double(row[1]);
        // Bin centers sit at odd multiples of half the width.
        CHECK(std::abs(std::remainder(center, 25.0)) < kTol);
        if (row[0] == "sn5") {
            CHECK_FALSE(seen_fixed); // series are contiguous, first-seen order
            REQUIRE(expected.count(center) == 1);
            const Aggregate agg = aggregate(expected[center]);
            CHECK(parse_double(row[2]) == agg.mean);
            CHECK(parse_double(row[3]) == agg.stddev);
            ++matched;
        } else {
            CHECK(row[0] == "fixed");
            seen_fixed = true;
        }
    }
    CHECK(matched == expected.size());
    CHECK(seen_fixed);
}

TEST_CASE("per-node, log, and allocation csv schemas") {
    SimConfig cfg;
    cfg.node_count = 25;
    cfg.cell_radius_m = 190.0;
    cfg.min_distance_m = 30.0;
    cfg.sim_time_s = 900.0;
    cfg.seed = 3;
    const RunResult result = run(cfg);

    const auto node_rows = parse_rows(per_node_csv(result));
    REQUIRE(node_rows.size() == result.nodes.size() + 1);
    CHECK(node_rows[0] == std::vector<std::string>{"node_id", "x_m", "y_m", "distance_m", "sf",
                                                   "tp_dbm", "sent", "received", "der"});
    const NodeState& n0 = result.nodes[0];
    const auto& row = node_rows[1];
    CHECK(parse_int(row[0]) == n0.node_id);
    CHECK(parse_double(row[1]) == n0.x_m);
    CHECK(parse_double(row[3]) == n0.distance_m);
    CHECK(parse_int(row[4]) == n0.sf);
    CHECK(parse_int(row[6]) == static_cast<std::int64_t>(n0.sent));
    CHECK(parse_int(row[7]) == static_cast<std::int64_t>(n0.received));
    CHECK(std::abs(parse_double(row[8]) - der(n0.received, n0.sent)) < kTol);

    const auto log_rows = parse_rows(transmission_log_csv(result.log));
    REQUIRE(log_rows.size() == result.log.size() + 1);
    CHECK(log_rows[0] ==
          std::vector<std::string>{"node_id", "start_s", "sf", "tp_dbm", "rssi_dbm", "fate"});
    CHECK((log_rows[1][5] == "received" || log_rows[1][5] == "lost_collision" ||
           log_rows[1][5] == "lost_sensitivity"));

    const std::vector<NodeSnapshot> snaps = bootstrap_rssi(result.nodes, cfg);
    const AllocationResult alloc = fadr_allocation(snaps, PowerLevelSet::default_levels(), 6.0, 50);
    const auto alloc_rows = parse_rows(allocation_csv(alloc));
    REQUIRE(alloc_rows.size() == alloc.assignments.size() + 1);
    CHECK(alloc_rows[0] == std::vector<std::string>{"node_id", "sf", "tp_dbm", "feasible"});
    CHECK((alloc_rows[1][3] == "true" || alloc_rows[1][3] == "false"));
}

TEST_CASE("snapshot csv parsing") {
    const std::string text = "node_id,rssi_dbm\n0,-120.5\n7,-98\n2,-134.25\n";
    const std::vector<NodeSnapshot> snaps = parse_snapshot_csv(text, 14.0);
    REQUIRE(snaps.size() == 3);
    CHECK(snaps[0].node_id == 0);
    CHECK(snaps[0].measured_rssi_dbm == -120.5);
    CHECK(std::abs(snaps[0].gain_db - (-134.5)) < kTol);
    CHECK(snaps[1].node_id == 7);
    CHECK(snaps[2].node_id == 2);

    CHECK_THROWS_AS(parse_snapshot_csv("id,rssi\n0,-120\n", 14.0), std::invalid_argument);
    CHECK_THROWS_AS(parse_snapshot_csv("node_id,rssi_dbm\n0\n", 14.0), std::invalid_argument);
    CHECK_THROWS_AS(parse_snapshot_csv("node_id,rssi_dbm\n0,abc\n", 14.0), std::invalid_argument);
    CHECK_THROWS_AS(parse_snapshot_csv("node_id,rssi_dbm\n-1,-120\n", 14.0), std::invalid_argument);
    CHECK_THROWS_AS(parse_snapshot_csv("", 14.0), std::invalid_argument);
}

TEST_CASE("experiment files land on disk and round-trip") {
    const ExperimentSpec spec = tiny_spec();
    const ExperimentResults results = run_experiment(spec);
    const std::filesystem::path dir =
        std::filesystem::temp_directory_path() / "fadr_harness_test_out";
    std::filesystem::remove_all(dir);
    write_experiment_files(spec, results, dir);
    for (const char* name :
         {"summary.csv", "fairness.csv", "overall_der.csv", "energy.csv", "der_vs_distance.csv"}) {
        CAPTURE(name);
        CHECK(std::filesystem::exists(dir / name));
    }
    CHECK(read_text_file(dir / "summary.csv") == summary_csv(results));
    CHECK(read_text_file(dir / "energy.csv") == figure_metric_csv(results, FigureMetric::energy));
    std::filesystem::remove_all(dir);

    CHECK_THROWS_AS(read_text_file(dir / "summary.csv"), std::runtime_error);
}

TEST_CASE("key=value parsing: comments, repeats, and malformed lines") {
    const auto kv = parse_key_values("# a comment\n"
                                     "nodes = 100, 200 # trailing note\n"
                                     "\n"
                                     "sim_time=3600\r\n"
                                     "nodes = 300\n");
    REQUIRE(kv.size() == 2);
    CHECK(kv.at("nodes") == "300");
    CHECK(kv.at("sim_time") == "3600");

    CHECK_THROWS_AS(parse_key_values("just words\n"), std::invalid_argument);
    CHECK_THROWS_AS(parse_key_values("= value\n"), std::invalid_argument);
    CHECK(parse_key_values("").empty());
    CHECK(parse_key_values("# only comments\n\n").empty());
}

TEST_CASE("options: every key lands in the right field") {
    ExperimentSpec spec;

    apply_option(spec, "allocators", "fixed, fadr");
    REQUIRE(spec.allocators.size() == 2);
    CHECK(spec.allocators[0] == AllocatorKind::fixed);
    CHECK(spec.allocators[1] == AllocatorKind::fadr);

    apply_option(spec, "nodes", "50,150");
    CHECK(spec.node_counts == std::vector<std::uint32_t>{50, 150});

    apply_option(spec, "seeds", "9, 4");
    CHECK(spec.seeds == std::vector<std::uint64_t>{9, 4});
    apply_option(spec, "seed_count", "3");
    CHECK(spec.seeds == std::vector<std::uint64_t>{1, 2, 3});

    apply_option(spec, "sim_time", "1800.5");
    CHECK(spec.base.sim_time_s == 1800.5);
    apply_option(spec, "payload", "51");
    CHECK(spec.base.payload_bytes == 51);
    apply_option(spec, "interval", "120");
    CHECK(spec.base.mean_interval_s == 120.0);
    apply_option(spec, "radius", "250");
    CHECK(spec.base.cell_radius_m == 250.0);
    apply_option(spec, "min_distance", "25");
    CHECK(spec.base.min_distance_m == 25.0);
    apply_option(spec, "channels", "8");
    CHECK(spec.base.channel_count == 8);
    apply_option(spec, "cir_db", "9");
    CHECK(spec.base.cir.at(7, 9) == 9.0);
    apply_option(spec, "group_size", "25");
    CHECK(spec.base.group_size == 25);
    apply_option(spec, "regime", "capture");
    CHECK(spec.base.regime == Regime::capture);
    apply_option(spec, "bootstrap", "4");
    CHECK(spec.base.bootstrap_packets == 4);
    apply_option(spec, "bootstrap_tp", "12");
    CHECK(spec.base.bootstrap_tp_dbm == 12.0);
    apply_option(spec, "fixed_tp", "8");
    CHECK(spec.base.fixed_tp_dbm == 8.0);
    apply_option(spec, "sigma", "7.8");
    CHECK(spec.base.radio.shadowing_sigma_db == 7.8);
    apply_option(spec, "bandwidth", "250000");
    CHECK(spec.base.radio.bandwidth_hz == 250000.0);
    apply_option(spec, "coding_rate", "2");
    CHECK(spec.base.radio.coding_rate == 2);
    apply_option(spec, "preamble", "10");
    CHECK(spec.base.radio.preamble_symbols == 10);
    apply_option(spec, "voltage", "3.3");
    CHECK(spec.energy.supply_voltage_v == 3.3);
    apply_option(spec, "bin_width", "40");
    CHECK(spec.distance_bin_m == 40.0);
    apply_option(spec, "profile_nodes", "500");
    CHECK(spec.distance_profile_nodes == 500);
    apply_option(spec, "jobs", "6");
    CHECK(spec.jobs == 6);

    apply_option(spec, "power_levels", "2:14:1");
    REQUIRE(spec.base.levels.levels_dbm.size() == 13);
    CHECK(spec.base.levels.levels_dbm.front() == 2.0);
    CHECK(spec.base.levels.levels_dbm.back() == 14.0);
    apply_option(spec, "power_levels", "5, 8, 11");
    CHECK(spec.base.levels.levels_dbm == std::vector<double>{5.0, 8.0, 11.0});

    apply_option(spec, "sensitivity", "-130");
    for (double s : spec.base.radio.sensitivity_dbm) CHECK(s == -130.0);
    apply_option(spec, "sensitivity", "-123,-126,-129,-132,-134.5,-137");
    CHECK(spec.base.radio.sensitivity_dbm[0] == -123.0);
    CHECK(spec.base.radio.sensitivity_dbm[5] == -137.0);

    apply_option(spec, "energy_table", "2:0.02, 14:0.05");
    REQUIRE(spec.energy.tx_current_a.size() == 2);
    CHECK(spec.energy.tx_current_a[1] == std::pair<double, double>{14.0, 0.05});
}

TEST_CASE("options: rejections") {
    ExperimentSpec spec;
    CHECK_THROWS_AS(apply_option(spec, "warp_factor", "9"), std::invalid_argument);
    CHECK_THROWS_AS(apply_option(spec, "nodes", "ten"), std::invalid_argument);
    CHECK_THROWS_AS(apply_option(spec, "nodes", "0"), std::invalid_argument);
    CHECK_THROWS_AS(apply_option(spec, "payload", "300"), std::invalid_argument);
    CHECK_THROWS_AS(apply_option(spec, "coding_rate", "5"), std::invalid_argument);
    CHECK_THROWS_AS(apply_option(spec, "regime", "duplex"), std::invalid_argument);
    CHECK_THROWS_AS(apply_option(spec, "allocators", "psychic"), std::invalid_argument);
    CHECK_THROWS_AS(apply_option(spec, "power_levels", "14:2:1"), std::invalid_argument);
    CHECK_THROWS_AS(apply_option(spec, "power_levels", "2:14"), std::invalid_argument);
    CHECK_THROWS_AS(apply_option(spec, "sensitivity", "-1,-2"), std::invalid_argument);
    CHECK_THROWS_AS(apply_option(spec, "energy_table", "broken"), std::invalid_argument);
    CHECK_THROWS_AS(apply_option(spec, "nodes", ""), std::invalid_argument);
    CHECK_THROWS_AS(apply_option(spec, "jobs", "0"), std::invalid_argument);
}

TEST_CASE("options: a map applies wholesale") {
    ExperimentSpec spec;
    apply_options(spec, {{"nodes", "42"}, {"sim_time", "60"}, {"channels", "2"}});
    CHECK(spec.node_counts == std::vector<std::uint32_t>{42});
    CHECK(spec.base.sim_time_s == 60.0);
    CHECK(spec.base.channel_count == 2);
}

TEST_CASE("option help mentions every accepted key") {
    const std::string help = option_help();
    for (const char* key :
         {"allocators", "nodes", "seeds", "seed_count", "sim_time", "payload", "interval",
          "radius", "min_distance", "channels", "cir_db", "group_size", "power_levels", "regime",
          "bootstrap", "bootstrap_tp", "fixed_tp", "sigma", "bandwidth", "coding_rate", "preamble",
          "sensitivity", "voltage", "energy_table", "bin_width", "profile_nodes", "jobs"}) {
        CAPTURE(key);
        CHECK(help.find(key) != std::string::npos);
    }
}

TEST_CASE("reference preset pins the reproducible cell") {
    const ExperimentSpec spec = desk_preset();
    CHECK(spec.allocators == std::vector<AllocatorKind>{AllocatorKind::fadr,
                                                        AllocatorKind::reynders,
                                                        AllocatorKind::sn5});
    CHECK(spec.node_counts == std::vector<std::uint32_t>{100, 500, 1000, 2000});
    CHECK(spec.seeds == std::vector<std::uint64_t>{1, 2, 3, 4, 5});
    CHECK(spec.base.cell_radius_m == 190.0);
    CHECK(spec.base.min_distance_m == 30.0);
    CHECK(spec.base.channel_count == 10);
    CHECK(spec.base.sim_time_s == 7200.0);
    CHECK(spec.distance_bin_m == 20.0);
    CHECK(spec.distance_profile_nodes == 1000);
    CHECK(spec.jobs >= 1);
    // Every node in the preset cell clears the floor at the lowest power.
    const double worst_rx = -path_loss_db(spec.base.radio, spec.base.cell_radius_m) +
                            spec.base.levels.levels_dbm.front();
    CHECK(worst_rx >= spec.base.radio.sensitivity_dbm[kSfCount - 1]);
}
