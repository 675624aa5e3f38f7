#pragma once

#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <vector>

#include "fadr/metrics.hpp"
#include "fadr/simulator.hpp"

namespace fadr {

// A grid of simulation cells: every allocator x node count x seed
// combination runs on a copy of `base` and is reduced to summary
// metrics.
struct ExperimentSpec {
    std::vector<AllocatorKind> allocators{AllocatorKind::fadr, AllocatorKind::reynders,
                                          AllocatorKind::sn5};
    std::vector<std::uint32_t> node_counts{100, 500, 1000};
    std::vector<std::uint64_t> seeds{1, 2, 3, 4, 5};
    SimConfig base;
    EnergyModel energy;
    double distance_bin_m = 100.0;
    // Node count whose runs feed the DER-vs-distance profile.
    std::uint32_t distance_profile_nodes = 1000;
    int jobs = 1;
};

struct CellResult {
    AllocatorKind allocator = AllocatorKind::fadr;
    std::uint32_t node_count = 0;
    std::uint64_t seed = 0;
    double fairness = 0.0; // NaN when no node delivered anything
    double overall_der = 0.0;
    double energy_j = 0.0;
    bool allocation_feasible = true;
    std::vector<DistanceBin> der_by_distance;
};

struct ExperimentResults {
    // One entry per (allocator, node_count, seed), in spec order.
    std::vector<CellResult> cells;
};

// Runs every cell. Results are identical for any jobs >= 1; cells are
// independent, so workers only race for the next index.
ExperimentResults run_experiment(const ExperimentSpec& spec);

struct Aggregate {
    double mean = 0.0;
    double stddev = 0.0; // sample standard deviation, 0 for n == 1
};
Aggregate aggregate(std::span<const double> values);

// --- CSV surfaces (schemas are part of the tool contract) ---

// allocator,node_count,seed,fairness,overall_der,energy_j
std::string summary_csv(const ExperimentResults& results);

enum class FigureMetric { fairness, overall_der, energy };

// allocator,node_count,mean,stddev — seed-aggregated metric curves.
std::string figure_metric_csv(const ExperimentResults& results, FigureMetric metric);

// allocator,distance_bin_m,mean_der,stddev_der — per-bin DER at the
// distance-profile node count, aggregated across seeds.
std::string der_vs_distance_csv(const ExperimentSpec& spec, const ExperimentResults& results);

// node_id,x_m,y_m,distance_m,sf,tp_dbm,sent,received,der
std::string per_node_csv(const RunResult& result);

// node_id,start_s,sf,tp_dbm,rssi_dbm,fate
std::string transmission_log_csv(std::span<const Transmission> log);

// node_id,sf,tp_dbm,feasible
std::string allocation_csv(const AllocationResult& result);

// Parses "node_id,rssi_dbm" rows (header required); gains are inferred
// against the given measurement power.
std::vector<NodeSnapshot> parse_snapshot_csv(std::string_view text, double bootstrap_tp_dbm);

// Writes summary.csv, fairness.csv, overall_der.csv, energy.csv, and
// der_vs_distance.csv into dir (created if missing).
void write_experiment_files(const ExperimentSpec& spec, const ExperimentResults& results,
                            const std::filesystem::path& dir);

void write_text_file(const std::filesystem::path& path, std::string_view text);
std::string read_text_file(const std::filesystem::path& path);

} // namespace fadr
