#pragma once

#include <array>

namespace fadr {

inline constexpr int kMinSf = 7;
inline constexpr int kMaxSf = 12;
inline constexpr int kSfCount = kMaxSf - kMinSf + 1;

constexpr int sf_index(int sf) { return sf - kMinSf; }

// Physical-layer parameters: LoRa modulation timing, receiver
// sensitivity per spreading factor, and a log-distance path-loss model
// calibrated for dense building environments.
struct RadioConfig {
    double bandwidth_hz = 125000.0;
    int coding_rate = 1;          // k in 4/(4+k); 1 means CR 4/5
    int preamble_symbols = 8;
    bool explicit_header = true;
    bool crc_enabled = true;
    // Low-data-rate optimization engages automatically for symbol
    // times >= 16 ms (SF11/SF12 at 125 kHz).
    bool auto_low_dr_optimize = true;

    // Sensitivity floor (dBm) indexed by sf_index.
    std::array<double, kSfCount> sensitivity_dbm{
        -140.0, -140.0, -140.0, -140.0, -140.0, -140.0};

    // path_loss(d) = ref_loss_db + 10 * exponent * log10(d / ref_distance_m)
    double ref_distance_m = 40.0;
    double ref_loss_db = 127.41;
    double path_loss_exponent = 2.08;
    double shadowing_sigma_db = 0.0;
};

// Whether low-data-rate optimization is active for this SF under cfg.
bool low_dr_optimize(const RadioConfig& cfg, int sf);

// Time on air (seconds) for one uplink of payload_bytes at the given SF.
// Throws std::invalid_argument for sf outside [7, 12] or payload < 1.
double airtime_s(const RadioConfig& cfg, int sf, int payload_bytes);

// Log-distance path loss (dB). Throws std::domain_error for d <= 0.
double path_loss_db(const RadioConfig& cfg, double distance_m);

inline double received_power_dbm(double tp_dbm, double gain_db) {
    return tp_dbm + gain_db;
}

// True when rx_dbm clears the sensitivity floor for sf.
bool is_reachable(const RadioConfig& cfg, int sf, double rx_dbm);

// Static channel gain of one node: gain_db = -path_loss(distance).
struct ChannelGain {
    double gain_db = 0.0;
};

} // namespace fadr
