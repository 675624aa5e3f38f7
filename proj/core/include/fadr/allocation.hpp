#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "fadr/collision.hpp"
#include "fadr/radio.hpp"

namespace fadr {

// One node as the gateway sees it after bootstrap: a measured uplink
// power and the channel gain inferred from it.
struct NodeSnapshot {
    std::uint32_t node_id = 0;
    double measured_rssi_dbm = 0.0;
    double gain_db = 0.0; // measured_rssi_dbm - bootstrap tx power
};

// Discrete transmit-power menu in dBm.
struct PowerLevelSet {
    std::vector<double> levels_dbm;

    // 2..14 dBm in 1 dB steps.
    static PowerLevelSet default_levels();

    // Throws std::invalid_argument unless there are at least two
    // levels in strictly ascending order.
    void validate() const;
};

// Fraction of nodes assigned to each SF, indexed by sf_index.
struct SfDistribution {
    std::array<double, kSfCount> fraction{};
};

// Collision-minimizing SF mix: the share of SF s is proportional to
// s / 2^s, which equalizes per-class channel load (airtime roughly
// doubles per SF step while the class shrinks to match).
SfDistribution optimal_sf_distribution();

// Apportion `seats` integer seats to match `fractions`: every class
// gets the floor of its exact share, and leftover seats go to the
// largest fractional remainders (ties favor the lower index).
std::vector<int> largest_remainder_counts(int seats, std::span<const double> fractions);

struct Assignment {
    std::uint32_t node_id = 0;
    int sf = kMinSf;
    double tp_dbm = 0.0;
    // False when no SF/TP combination clears the sensitivity floor;
    // such nodes carry the best-effort (SF12, max TP) setting.
    bool reachable = true;
};

struct AllocationResult {
    std::vector<Assignment> assignments; // sorted by node_id
    // True when the power ladder keeps every pair of received powers
    // within the mutual-capture margin. SF-only or sensitivity-driven
    // schemes report true.
    bool feasible = true;
};

struct SfAssignment {
    std::uint32_t node_id = 0;
    int sf = kMinSf;
};

// Group-wise SF assignment of the fair scheme: nodes sorted by
// measured RSSI descending (ties by node_id) are cut into consecutive
// groups of group_size; each group receives the optimal SF mix via
// largest remainder, except that SF12 is pinned to exactly one seat in
// any group of two or more (the remaining seats follow the SF7..11
// shares renormalized). A single-node group gets SF7. Returned sorted
// by node_id.
std::vector<SfAssignment> fadr_sf_allocation(std::span<const NodeSnapshot> nodes,
                                             int group_size = 50);

struct PowerAssignment {
    std::uint32_t node_id = 0;
    double tp_dbm = 0.0;
};

struct PowerAllocationResult {
    std::vector<PowerAssignment> assignments; // sorted by node_id
    bool feasible = true;
    // Final max - min received power at the gateway (dB).
    double spread_db = 0.0;
};

// Power ladder of the fair scheme. With nodes sorted by gain
// descending, picks the lowest level Pow_m for the strongest node and
// the smallest level Pow_M that lifts the weakest to within cir_m_db
// of it, then walks intermediate levels across the middle so every
// received power lands inside the band spanned by the two and within
// cir_m_db of the boundary rungs. When no level can lift the weakest
// node high enough, the highest level is used and the result is marked
// infeasible; the flag also drops whenever the final spread exceeds
// cir_m_db.
PowerAllocationResult fadr_power_allocation(std::span<const NodeSnapshot> nodes,
                                            const PowerLevelSet& levels, double cir_m_db);
PowerAllocationResult fadr_power_allocation(std::span<const NodeSnapshot> nodes,
                                            const PowerLevelSet& levels, const CirMatrix& cir);

// Both halves of the fair scheme combined.
AllocationResult fadr_allocation(std::span<const NodeSnapshot> nodes,
                                 const PowerLevelSet& levels, double cir_m_db,
                                 int group_size = 50);
AllocationResult fadr_allocation(std::span<const NodeSnapshot> nodes,
                                 const PowerLevelSet& levels, const CirMatrix& cir,
                                 int group_size = 50);

// Throughput-greedy baseline: per node, the smallest SF and then the
// smallest level whose received power clears that SF's sensitivity.
AllocationResult sn5_allocation(std::span<const NodeSnapshot> nodes,
                                const RadioConfig& radio, const PowerLevelSet& levels);

// Power-control baseline: SFs follow the optimal mix over the whole
// population (strongest nodes get the lowest SFs, no SF12 pin); the
// reference is the weakest SF8 node at the maximum level (weakest node
// overall when no SF8 seat exists), and every node transmits at the
// largest level that keeps its received power from exceeding the
// reference by more than cir_m_db — as loud as possible without
// suppressing the node most at risk. Weak nodes cap at the maximum
// level; if even the lowest level overshoots, the lowest level is
// used.
AllocationResult reynders_allocation(std::span<const NodeSnapshot> nodes,
                                     const PowerLevelSet& levels, double cir_m_db);
AllocationResult reynders_allocation(std::span<const NodeSnapshot> nodes,
                                     const PowerLevelSet& levels, const CirMatrix& cir);

} // namespace fadr
