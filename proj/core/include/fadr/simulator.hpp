#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include "fadr/allocation.hpp"
#include "fadr/collision.hpp"
#include "fadr/radio.hpp"
#include "fadr/study.hpp"

namespace fadr {

enum class AllocatorKind {
    fadr,
    reynders,
    sn5,
    fixed,
};

std::string_view to_string(AllocatorKind kind);
AllocatorKind allocator_from_string(std::string_view name);

// One simulated cell: a gateway at the origin serving node_count nodes
// placed uniformly at random on a disk, each transmitting with
// exponential inter-arrival gaps on a shared set of channels.
struct SimConfig {
    std::uint32_t node_count = 100;
    double cell_radius_m = 3000.0;
    // Gains are evaluated at max(distance, min_distance_m); positions
    // are untouched. Keeps the path-loss model out of its near-field
    // singularity.
    double min_distance_m = 1.0;
    int payload_bytes = 80;
    double mean_interval_s = 60.0;
    double sim_time_s = 86400.0;
    int channel_count = 1;

    // Gateway-side measurement packets sent before time zero,
    // collision-free. The fair and power-control allocators need at
    // least one; zero makes sensitivity- or distance-driven schemes
    // use true gains directly.
    int bootstrap_packets = 1;
    // Bootstrap / fixed-study transmit power; defaults to the highest
    // level in `levels` when unset.
    std::optional<double> bootstrap_tp_dbm;
    std::optional<double> fixed_tp_dbm;

    AllocatorKind allocator = AllocatorKind::fadr;
    int group_size = 50;
    Regime regime = Regime::full;

    std::uint64_t seed = 1;
    bool record_log = true;

    RadioConfig radio;
    PowerLevelSet levels = PowerLevelSet::default_levels();
    CirMatrix cir = CirMatrix::uniform(6.0);
};

// Throws std::invalid_argument describing the first violated field.
void validate(const SimConfig& cfg);

struct NodeState {
    std::uint32_t node_id = 0;
    double x_m = 0.0;
    double y_m = 0.0;
    double distance_m = 0.0;
    double gain_db = 0.0; // static part: -path_loss(clamped distance)
    int sf = kMinSf;
    double tp_dbm = 0.0;
    bool reachable = true;
    std::uint64_t sent = 0;
    std::uint64_t received = 0;
    std::uint64_t lost_collision = 0;
    std::uint64_t lost_sensitivity = 0;
};

struct RunResult {
    std::vector<NodeState> nodes; // sorted by node_id
    // Every finalized transmission in (start_s, node_id) order; empty
    // when the run was configured without a log.
    std::vector<Transmission> log;
    bool allocation_feasible = true;
};

// Positions drawn uniformly over the disk from the placement stream;
// SF/TP fields are left untouched. Deterministic in (seed, count,
// radius): node k consumes draws 2k and 2k+1.
std::vector<NodeState> place_nodes(const SimConfig& cfg);

// Gateway-side gain estimates: each node's bootstrap packets are
// received collision-free at the bootstrap power, shadowed per packet;
// the measured RSSI is their mean. With zero shadowing (or zero
// packets) the estimate equals the true gain.
std::vector<NodeSnapshot> bootstrap_rssi(std::span<const NodeState> nodes,
                                         const SimConfig& cfg);

// Place, bootstrap, allocate, then simulate [0, sim_time_s): every
// transmission that starts inside the window is carried to completion
// and adjudicated against all overlapping traffic on its channel under
// the regime-shaped matrix, with the sensitivity floor taking
// precedence over collision loss. Counters satisfy
// sent == received + lost_collision + lost_sensitivity per node.
RunResult run(const SimConfig& cfg);

} // namespace fadr
