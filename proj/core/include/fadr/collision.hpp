#pragma once

#include <array>
#include <cstdint>
#include <span>
#include <string_view>

#include "fadr/radio.hpp"

namespace fadr {

enum class Fate : std::uint8_t {
    pending,
    received,
    lost_collision,
    lost_sensitivity,
};

std::string_view to_string(Fate fate);

// Co-channel rejection thresholds (dB), threshold_db[signal][interferer]
// indexed by sf_index. An interferer suppresses the signal when
// interferer_rx - signal_rx >= threshold; +infinity entries mean the
// pair never suppresses (perfectly orthogonal, or capture disabled).
struct CirMatrix {
    std::array<std::array<double, kSfCount>, kSfCount> threshold_db{};

    static CirMatrix uniform(double db = 6.0);

    double at(int signal_sf, int interferer_sf) const;
    double& at(int signal_sf, int interferer_sf);

    // Smallest entry; allocation schemes use it as the single margin
    // CIR_m that keeps any pair of received powers mutually safe.
    double min_threshold_db() const;
};

struct Transmission {
    std::uint32_t node_id = 0;
    int sf = kMinSf;
    int channel = 0;
    double start_s = 0.0;
    double end_s = 0.0;
    double tp_dbm = 0.0;
    double rssi_dbm = 0.0;
    Fate fate = Fate::pending;
};

// Same channel and overlapping half-open intervals [start, end).
bool overlaps(const Transmission& a, const Transmission& b);

// Survival of each side of one overlapping pair, ignoring every other
// transmission: {a survives this pair, b survives this pair}.
//
// Same SF: the stronger side survives when its margin is at least the
// capture threshold; otherwise both are lost. Equal powers have no
// stronger side, so a non-positive threshold still kills both.
// Cross SF: each side is lost independently when the other exceeds its
// rejection threshold; below-threshold pairs coexist.
struct PairwiseFate {
    bool a_survives = false;
    bool b_survives = false;
};
PairwiseFate pairwise_fate(const Transmission& a, const Transmission& b, const CirMatrix& cir);

// Fate of tx given every transmission overlapping it: received iff it
// survives each overlapping pair. Entries that do not overlap tx are
// ignored. Collision adjudication only; the sensitivity floor is
// applied by the caller and takes precedence.
Fate resolve(const Transmission& tx, std::span<const Transmission> concurrent,
             const CirMatrix& cir);

} // namespace fadr
