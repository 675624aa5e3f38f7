#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "fadr/collision.hpp"
#include "fadr/simulator.hpp"

namespace fadr {

// Delivery ratio; a node that never transmitted has ratio 0.
double der(std::uint64_t received, std::uint64_t sent);

// Jain's index (sum x)^2 / (n * sum x^2) in [1/n, 1]: 1 for perfectly
// equal shares, 1/n when one participant holds everything. Returns
// nullopt for all-zero input (no allocation to judge). Throws
// std::invalid_argument on empty or negative input.
std::optional<double> jain_fairness(std::span<const double> values);

// Transmit-current model: a piecewise-linear (tp_dbm -> amperes) table.
struct EnergyModel {
    // Strictly ascending tp, positive current.
    std::vector<std::pair<double, double>> tx_current_a{
        {2.0, 0.024}, {5.0, 0.025}, {8.0, 0.031}, {11.0, 0.036}, {14.0, 0.044}};
    double supply_voltage_v = 3.0;

    void validate() const;
    // Linear interpolation between anchors. Throws std::invalid_argument
    // for tp outside the table hull: a config that transmits at a power
    // the model cannot price is an error, not a guess.
    double current_a(double tp_dbm) const;
};

// Transmit energy (joules) summed over a transmission log:
// duration * current(tp) * voltage per entry.
double energy_j(std::span<const Transmission> log, const EnergyModel& model);

// Same total from per-node counters: every transmission of a node
// costs airtime(sf) * current(tp) * voltage.
double energy_j(std::span<const NodeState> nodes, const RadioConfig& radio, int payload_bytes,
                const EnergyModel& model);

struct DistanceBin {
    double center_m = 0.0;
    int node_count = 0;
    double mean_der = 0.0;
};

// Per-node DER averaged within fixed-width distance bins
// [i*w, (i+1)*w); empty bins are omitted, centers sit at (i + 0.5)*w.
std::vector<DistanceBin> der_vs_distance(std::span<const NodeState> nodes,
                                         double bin_width_m = 100.0);

struct MetricsReport {
    std::vector<double> der_per_node; // indexed by node_id
    // Jain's index over nodes that transmitted at least once; nullopt
    // when nothing was delivered (or nothing sent).
    std::optional<double> fairness;
    double overall_der = 0.0; // total received / total sent
    double total_energy_j = 0.0;
    std::vector<DistanceBin> der_by_distance;
};

MetricsReport build_report(const RunResult& result, const SimConfig& cfg,
                           const EnergyModel& model, double bin_width_m = 100.0);

} // namespace fadr
