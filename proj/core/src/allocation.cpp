#include "fadr/allocation.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <unordered_set>

namespace fadr {

namespace {

void validate_nodes(std::span<const NodeSnapshot> nodes, const char* who) {
    if (nodes.empty())
        throw std::invalid_argument(std::string(who) + ": node set must be non-empty");
    std::unordered_set<std::uint32_t> seen;
    seen.reserve(nodes.size());
    for (const NodeSnapshot& n : nodes) {
        if (!std::isfinite(n.gain_db))
            throw std::invalid_argument(std::string(who) + ": non-finite gain");
        if (!seen.insert(n.node_id).second)
            throw std::invalid_argument(std::string(who) + ": duplicate node_id " +
                                        std::to_string(n.node_id));
    }
}

// Strongest first; equal keys fall back to node_id so the order is a
// total one.
std::vector<NodeSnapshot> sorted_by_rssi(std::span<const NodeSnapshot> nodes) {
    std::vector<NodeSnapshot> v(nodes.begin(), nodes.end());
    std::sort(v.begin(), v.end(), [](const NodeSnapshot& a, const NodeSnapshot& b) {
        if (a.measured_rssi_dbm != b.measured_rssi_dbm)
            return a.measured_rssi_dbm > b.measured_rssi_dbm;
        return a.node_id < b.node_id;
    });
    return v;
}

std::vector<NodeSnapshot> sorted_by_gain(std::span<const NodeSnapshot> nodes) {
    std::vector<NodeSnapshot> v(nodes.begin(), nodes.end());
    std::sort(v.begin(), v.end(), [](const NodeSnapshot& a, const NodeSnapshot& b) {
        if (a.gain_db != b.gain_db) return a.gain_db > b.gain_db;
        return a.node_id < b.node_id;
    });
    return v;
}

void require_positive_margin(double cir_m_db, const char* who) {
    if (!(cir_m_db > 0.0))
        throw std::invalid_argument(std::string(who) + ": capture margin must be > 0 dB");
}

// Seat counts for one RSSI group: SF12 pinned to a single seat for
// groups of two or more, the rest apportioned over SF7..11.
std::array<int, kSfCount> group_seat_counts(int size, const SfDistribution& dist) {
    std::array<int, kSfCount> counts{};
    if (size == 1) {
        counts[0] = 1;
        return counts;
    }
    std::array<double, kSfCount - 1> sub{};
    for (int i = 0; i + 1 < kSfCount; ++i) sub[static_cast<std::size_t>(i)] = dist.fraction[static_cast<std::size_t>(i)];
    const std::vector<int> lower = largest_remainder_counts(size - 1, sub);
    for (int i = 0; i + 1 < kSfCount; ++i) counts[static_cast<std::size_t>(i)] = lower[static_cast<std::size_t>(i)];
    counts[kSfCount - 1] = 1;
    return counts;
}

std::vector<Assignment> sorted_assignments(std::vector<Assignment> v) {
    std::sort(v.begin(), v.end(),
              [](const Assignment& a, const Assignment& b) { return a.node_id < b.node_id; });
    return v;
}

} // namespace

PowerLevelSet PowerLevelSet::default_levels() {
    PowerLevelSet s;
    s.levels_dbm.reserve(13);
    for (int p = 2; p <= 14; ++p) s.levels_dbm.push_back(static_cast<double>(p));
    return s;
}

void PowerLevelSet::validate() const {
    if (levels_dbm.size() < 2)
        throw std::invalid_argument("PowerLevelSet: need at least two levels");
    for (std::size_t i = 0; i < levels_dbm.size(); ++i) {
        if (!std::isfinite(levels_dbm[i]))
            throw std::invalid_argument("PowerLevelSet: non-finite level");
        if (i > 0 && !(levels_dbm[i] > levels_dbm[i - 1]))
            throw std::invalid_argument("PowerLevelSet: levels must be strictly ascending");
    }
}

SfDistribution optimal_sf_distribution() {
    SfDistribution d;
    double total = 0.0;
    for (int sf = kMinSf; sf <= kMaxSf; ++sf) {
        const double w = sf / std::exp2(sf);
        d.fraction[static_cast<std::size_t>(sf_index(sf))] = w;
        total += w;
    }
    for (double& f : d.fraction) f /= total;
    return d;
}

std::vector<int> largest_remainder_counts(int seats, std::span<const double> fractions) {
    if (seats < 0) throw std::invalid_argument("largest_remainder_counts: seats must be >= 0");
    if (fractions.empty())
        throw std::invalid_argument("largest_remainder_counts: fractions must be non-empty");
    double total = 0.0;
    for (double f : fractions) {
        if (!std::isfinite(f) || f < 0.0)
            throw std::invalid_argument("largest_remainder_counts: fractions must be >= 0");
        total += f;
    }
    if (!(total > 0.0))
        throw std::invalid_argument("largest_remainder_counts: fractions must not all be zero");

    const std::size_t n = fractions.size();
    std::vector<int> counts(n, 0);
    std::vector<double> remainder(n, 0.0);
    int assigned = 0;
    for (std::size_t i = 0; i < n; ++i) {
        const double exact = seats * fractions[i] / total;
        counts[i] = static_cast<int>(std::floor(exact));
        remainder[i] = exact - counts[i];
        assigned += counts[i];
    }
    std::vector<std::size_t> order(n);
    for (std::size_t i = 0; i < n; ++i) order[i] = i;
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        if (remainder[a] != remainder[b]) return remainder[a] > remainder[b];
        return a < b;
    });
    for (int k = 0; k < seats - assigned; ++k) ++counts[order[static_cast<std::size_t>(k)]];
    return counts;
}

std::vector<SfAssignment> fadr_sf_allocation(std::span<const NodeSnapshot> nodes,
                                             int group_size) {
    validate_nodes(nodes, "fadr_sf_allocation");
    if (group_size < 1)
        throw std::invalid_argument("fadr_sf_allocation: group_size must be >= 1");

    const std::vector<NodeSnapshot> order = sorted_by_rssi(nodes);
    const SfDistribution dist = optimal_sf_distribution();
    const int n = static_cast<int>(order.size());

    std::vector<SfAssignment> out;
    out.reserve(order.size());
    for (int begin = 0; begin < n; begin += group_size) {
        const int size = std::min(group_size, n - begin);
        const std::array<int, kSfCount> counts = group_seat_counts(size, dist);
        int pos = begin;
        for (int s = 0; s < kSfCount; ++s)
            for (int k = 0; k < counts[static_cast<std::size_t>(s)]; ++k)
                out.push_back({order[static_cast<std::size_t>(pos++)].node_id, kMinSf + s});
    }
    std::sort(out.begin(), out.end(),
              [](const SfAssignment& a, const SfAssignment& b) { return a.node_id < b.node_id; });
    return out;
}

PowerAllocationResult fadr_power_allocation(std::span<const NodeSnapshot> nodes,
                                            const PowerLevelSet& levels, double cir_m_db) {
    validate_nodes(nodes, "fadr_power_allocation");
    levels.validate();
    require_positive_margin(cir_m_db, "fadr_power_allocation");

    const std::vector<NodeSnapshot> order = sorted_by_gain(nodes);
    const std::vector<double>& lv = levels.levels_dbm;
    const std::ptrdiff_t n = static_cast<std::ptrdiff_t>(order.size());
    const auto gain = [&](std::ptrdiff_t i) { return order[static_cast<std::size_t>(i)].gain_db; };

    const double pow_m = lv.front();
    double pow_M = lv.back();
    bool lift_found = false;
    for (std::size_t i = 1; i < lv.size(); ++i) {
        if (gain(0) + pow_m - (gain(n - 1) + lv[i]) <= cir_m_db) {
            pow_M = lv[i];
            lift_found = true;
            break;
        }
    }

    const double floor_rx = std::min(gain(n - 1) + pow_M, gain(0) + pow_m);
    const double ceil_rx = std::max(gain(n - 1) + pow_M, gain(0) + pow_m);

    std::vector<double> tp(order.size(), std::numeric_limits<double>::quiet_NaN());

    // Strongest prefix that already sits at or above the band floor on
    // the lowest level. The floor never exceeds gain(0) + pow_m, so the
    // prefix is non-empty.
    std::ptrdiff_t i0 = -1;
    for (std::ptrdiff_t i = 0; i < n; ++i) {
        if (gain(i) + pow_m >= floor_rx) i0 = i;
        else break;
    }
    for (std::ptrdiff_t i = 0; i <= i0; ++i) tp[static_cast<std::size_t>(i)] = pow_m;

    // Last node that would still overshoot the floor by more than the
    // margin on the high level; everyone weaker can take pow_M as-is.
    std::ptrdiff_t i_n = i0;
    for (std::ptrdiff_t i = i0 + 1; i < n; ++i)
        if (gain(i) + pow_M - floor_rx > cir_m_db) i_n = i;
    for (std::ptrdiff_t i = i_n + 1; i < n; ++i) tp[static_cast<std::size_t>(i)] = pow_M;

    // Walk the intermediate levels (ascending) across the middle run.
    // A level is spent on the longest contiguous run it keeps within
    // the margin of the band edges and of the first pow_M node.
    const double ref_rx = gain(i_n) + pow_M;
    std::ptrdiff_t idx = i0 + 1;
    for (double p : lv) {
        if (!(p > pow_m && p < pow_M)) continue;
        if (idx > i_n) break;
        const double rx = gain(idx) + p;
        if (std::abs(rx - floor_rx) <= cir_m_db && std::abs(rx - ceil_rx) <= cir_m_db &&
            std::abs(rx - ref_rx) <= cir_m_db) {
            std::ptrdiff_t last = idx;
            while (last + 1 <= i_n && std::abs(gain(last + 1) + p - ref_rx) <= cir_m_db) ++last;
            for (std::ptrdiff_t j = idx; j <= last; ++j) tp[static_cast<std::size_t>(j)] = p;
            idx = last + 1;
        }
    }
    // Middle nodes left without a fitting intermediate level.
    for (std::ptrdiff_t i = i0 + 1; i <= i_n; ++i)
        if (std::isnan(tp[static_cast<std::size_t>(i)])) tp[static_cast<std::size_t>(i)] = pow_M;

    double lo = std::numeric_limits<double>::infinity();
    double hi = -std::numeric_limits<double>::infinity();
    for (std::ptrdiff_t i = 0; i < n; ++i) {
        const double rx = gain(i) + tp[static_cast<std::size_t>(i)];
        lo = std::min(lo, rx);
        hi = std::max(hi, rx);
    }

    PowerAllocationResult result;
    result.spread_db = hi - lo;
    result.feasible = lift_found && result.spread_db <= cir_m_db + 1e-9;
    result.assignments.reserve(order.size());
    for (std::ptrdiff_t i = 0; i < n; ++i)
        result.assignments.push_back(
            {order[static_cast<std::size_t>(i)].node_id, tp[static_cast<std::size_t>(i)]});
    std::sort(result.assignments.begin(), result.assignments.end(),
              [](const PowerAssignment& a, const PowerAssignment& b) {
                  return a.node_id < b.node_id;
              });
    return result;
}

PowerAllocationResult fadr_power_allocation(std::span<const NodeSnapshot> nodes,
                                            const PowerLevelSet& levels, const CirMatrix& cir) {
    return fadr_power_allocation(nodes, levels, cir.min_threshold_db());
}

AllocationResult fadr_allocation(std::span<const NodeSnapshot> nodes,
                                 const PowerLevelSet& levels, double cir_m_db, int group_size) {
    const std::vector<SfAssignment> sfs = fadr_sf_allocation(nodes, group_size);
    const PowerAllocationResult powers = fadr_power_allocation(nodes, levels, cir_m_db);

    AllocationResult result;
    result.feasible = powers.feasible;
    result.assignments.reserve(sfs.size());
    for (std::size_t i = 0; i < sfs.size(); ++i) {
        // Both halves are sorted by node_id over the same node set.
        result.assignments.push_back(
            {sfs[i].node_id, sfs[i].sf, powers.assignments[i].tp_dbm, true});
    }
    return result;
}

AllocationResult fadr_allocation(std::span<const NodeSnapshot> nodes,
                                 const PowerLevelSet& levels, const CirMatrix& cir,
                                 int group_size) {
    return fadr_allocation(nodes, levels, cir.min_threshold_db(), group_size);
}

AllocationResult sn5_allocation(std::span<const NodeSnapshot> nodes, const RadioConfig& radio,
                                const PowerLevelSet& levels) {
    validate_nodes(nodes, "sn5_allocation");
    levels.validate();

    AllocationResult result;
    result.assignments.reserve(nodes.size());
    for (const NodeSnapshot& node : nodes) {
        Assignment a{node.node_id, kMaxSf, levels.levels_dbm.back(), false};
        for (int sf = kMinSf; sf <= kMaxSf && !a.reachable; ++sf) {
            for (double p : levels.levels_dbm) {
                if (is_reachable(radio, sf, received_power_dbm(p, node.gain_db))) {
                    a.sf = sf;
                    a.tp_dbm = p;
                    a.reachable = true;
                    break;
                }
            }
        }
        result.assignments.push_back(a);
    }
    result.assignments = sorted_assignments(std::move(result.assignments));
    return result;
}

AllocationResult reynders_allocation(std::span<const NodeSnapshot> nodes,
                                     const PowerLevelSet& levels, double cir_m_db) {
    validate_nodes(nodes, "reynders_allocation");
    levels.validate();
    require_positive_margin(cir_m_db, "reynders_allocation");

    const std::vector<NodeSnapshot> order = sorted_by_gain(nodes);
    const std::vector<double>& lv = levels.levels_dbm;
    const int n = static_cast<int>(order.size());

    const SfDistribution dist = optimal_sf_distribution();
    const std::vector<int> counts =
        largest_remainder_counts(n, std::span<const double>(dist.fraction));

    std::vector<int> sf_at(order.size(), kMinSf);
    {
        int pos = 0;
        for (int s = 0; s < kSfCount; ++s)
            for (int k = 0; k < counts[static_cast<std::size_t>(s)]; ++k)
                sf_at[static_cast<std::size_t>(pos++)] = kMinSf + s;
    }

    // The protected node: weakest gain inside the SF8 block, or the
    // weakest node overall when the apportionment gave SF8 no seats.
    double ref_gain = order[static_cast<std::size_t>(n - 1)].gain_db;
    if (counts[1] > 0) {
        const int sf8_end = counts[0] + counts[1];
        ref_gain = order[static_cast<std::size_t>(sf8_end - 1)].gain_db;
    }
    const double ref_rx = ref_gain + lv.back();
    const double cap_rx = ref_rx + cir_m_db;

    AllocationResult result;
    result.assignments.reserve(order.size());
    double lo = std::numeric_limits<double>::infinity();
    double hi = -std::numeric_limits<double>::infinity();
    for (int i = 0; i < n; ++i) {
        const NodeSnapshot& node = order[static_cast<std::size_t>(i)];
        // Largest level that keeps this node at or below cap_rx.
        const double bound = cap_rx - node.gain_db;
        auto it = std::upper_bound(lv.begin(), lv.end(), bound);
        const double tp = it == lv.begin() ? lv.front() : *(it - 1);
        const double rx = received_power_dbm(tp, node.gain_db);
        lo = std::min(lo, rx);
        hi = std::max(hi, rx);
        result.assignments.push_back({node.node_id, sf_at[static_cast<std::size_t>(i)], tp, true});
    }
    result.feasible = hi - lo <= cir_m_db + 1e-9;
    result.assignments = sorted_assignments(std::move(result.assignments));
    return result;
}

AllocationResult reynders_allocation(std::span<const NodeSnapshot> nodes,
                                     const PowerLevelSet& levels, const CirMatrix& cir) {
    return reynders_allocation(nodes, levels, cir.min_threshold_db());
}

} // namespace fadr
