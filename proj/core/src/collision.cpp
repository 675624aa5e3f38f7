#include "fadr/collision.hpp"

#include <stdexcept>

namespace fadr {

std::string_view to_string(Fate fate) {
    switch (fate) {
        case Fate::pending: return "pending";
        case Fate::received: return "received";
        case Fate::lost_collision: return "lost_collision";
        case Fate::lost_sensitivity: return "lost_sensitivity";
    }
    return "unknown";
}

CirMatrix CirMatrix::uniform(double db) {
    CirMatrix m;
    for (auto& row : m.threshold_db) row.fill(db);
    return m;
}

namespace {
std::size_t checked_index(int sf, const char* what) {
    if (sf < kMinSf || sf > kMaxSf)
        throw std::invalid_argument(std::string("CirMatrix: ") + what + " sf out of [7, 12]");
    return static_cast<std::size_t>(sf_index(sf));
}
} // namespace

double CirMatrix::at(int signal_sf, int interferer_sf) const {
    return threshold_db[checked_index(signal_sf, "signal")][checked_index(interferer_sf, "interferer")];
}

double& CirMatrix::at(int signal_sf, int interferer_sf) {
    return threshold_db[checked_index(signal_sf, "signal")][checked_index(interferer_sf, "interferer")];
}

double CirMatrix::min_threshold_db() const {
    double m = threshold_db[0][0];
    for (const auto& row : threshold_db)
        for (double v : row)
            if (v < m) m = v;
    return m;
}

bool overlaps(const Transmission& a, const Transmission& b) {
    return a.channel == b.channel && a.start_s < b.end_s && b.start_s < a.end_s;
}

PairwiseFate pairwise_fate(const Transmission& a, const Transmission& b, const CirMatrix& cir) {
    if (a.sf == b.sf) {
        const double thr = cir.at(a.sf, b.sf);
        const double diff = a.rssi_dbm - b.rssi_dbm;
        if (diff > 0.0 && diff >= thr) return {true, false};
        if (diff < 0.0 && -diff >= thr) return {false, true};
        return {false, false};
    }
    const bool a_lost = b.rssi_dbm - a.rssi_dbm >= cir.at(a.sf, b.sf);
    const bool b_lost = a.rssi_dbm - b.rssi_dbm >= cir.at(b.sf, a.sf);
    return {!a_lost, !b_lost};
}

Fate resolve(const Transmission& tx, std::span<const Transmission> concurrent,
             const CirMatrix& cir) {
    for (const Transmission& other : concurrent) {
        if (&other == &tx || !overlaps(tx, other)) continue;
        if (!pairwise_fate(tx, other, cir).a_survives) return Fate::lost_collision;
    }
    return Fate::received;
}

} // namespace fadr
