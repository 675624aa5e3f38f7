#include "fadr/study.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>
#include <unordered_set>

namespace fadr {

std::string_view to_string(Regime regime) {
    switch (regime) {
        case Regime::aloha: return "aloha";
        case Regime::capture: return "capture";
        case Regime::full: return "full";
    }
    return "unknown";
}

Regime regime_from_string(std::string_view name) {
    if (name == "aloha") return Regime::aloha;
    if (name == "capture") return Regime::capture;
    if (name == "full") return Regime::full;
    throw std::invalid_argument("unknown regime '" + std::string(name) +
                                "' (expected aloha, capture, or full)");
}

CirMatrix regime_matrix(const CirMatrix& base, Regime regime) {
    constexpr double inf = std::numeric_limits<double>::infinity();
    CirMatrix m = base;
    switch (regime) {
        case Regime::full:
            break;
        case Regime::capture:
            for (int s = 0; s < kSfCount; ++s)
                for (int i = 0; i < kSfCount; ++i)
                    if (s != i) m.threshold_db[static_cast<std::size_t>(s)][static_cast<std::size_t>(i)] = inf;
            break;
        case Regime::aloha:
            for (auto& row : m.threshold_db) row.fill(inf);
            break;
    }
    return m;
}

AllocationResult fixed_allocation(std::span<const NodeSnapshot> nodes, double tp_dbm) {
    if (nodes.empty())
        throw std::invalid_argument("fixed_allocation: node set must be non-empty");
    if (!std::isfinite(tp_dbm))
        throw std::invalid_argument("fixed_allocation: tp must be finite");
    std::unordered_set<std::uint32_t> seen;
    for (const NodeSnapshot& n : nodes)
        if (!seen.insert(n.node_id).second)
            throw std::invalid_argument("fixed_allocation: duplicate node_id");

    std::vector<NodeSnapshot> order(nodes.begin(), nodes.end());
    std::sort(order.begin(), order.end(), [](const NodeSnapshot& a, const NodeSnapshot& b) {
        if (a.gain_db != b.gain_db) return a.gain_db > b.gain_db;
        return a.node_id < b.node_id;
    });

    const int n = static_cast<int>(order.size());
    AllocationResult result;
    result.assignments.reserve(order.size());
    int pos = 0;
    for (int s = 0; s < kSfCount; ++s) {
        const int block = n / kSfCount + (s < n % kSfCount ? 1 : 0);
        for (int k = 0; k < block; ++k) {
            result.assignments.push_back(
                {order[static_cast<std::size_t>(pos++)].node_id, kMinSf + s, tp_dbm, true});
        }
    }
    std::sort(result.assignments.begin(), result.assignments.end(),
              [](const Assignment& a, const Assignment& b) { return a.node_id < b.node_id; });
    return result;
}

} // namespace fadr
