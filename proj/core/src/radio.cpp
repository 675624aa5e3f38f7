#include "fadr/radio.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace fadr {

bool low_dr_optimize(const RadioConfig& cfg, int sf) {
    if (!cfg.auto_low_dr_optimize) return false;
    // Symbol time 2^sf / BW >= 16 ms.
    const double t_sym = std::exp2(sf) / cfg.bandwidth_hz;
    return t_sym >= 0.016;
}

double airtime_s(const RadioConfig& cfg, int sf, int payload_bytes) {
    if (sf < kMinSf || sf > kMaxSf)
        throw std::invalid_argument("airtime_s: sf must be in [7, 12], got " + std::to_string(sf));
    if (payload_bytes < 1)
        throw std::invalid_argument("airtime_s: payload_bytes must be >= 1");
    if (cfg.coding_rate < 1 || cfg.coding_rate > 4)
        throw std::invalid_argument("airtime_s: coding_rate index must be in [1, 4]");

    const double t_sym = std::exp2(sf) / cfg.bandwidth_hz;
    const double t_preamble = (cfg.preamble_symbols + 4.25) * t_sym;

    const int de = low_dr_optimize(cfg, sf) ? 1 : 0;
    const int ih = cfg.explicit_header ? 0 : 1;
    const int crc = cfg.crc_enabled ? 1 : 0;
    const double num = 8.0 * payload_bytes - 4.0 * sf + 28.0 + 16.0 * crc - 20.0 * ih;
    const double den = 4.0 * (sf - 2 * de);
    const double payload_symbols =
        8.0 + std::max(std::ceil(num / den) * (cfg.coding_rate + 4), 0.0);

    return t_preamble + payload_symbols * t_sym;
}

double path_loss_db(const RadioConfig& cfg, double distance_m) {
    if (!(distance_m > 0.0))
        throw std::domain_error("path_loss_db: distance must be > 0");
    return cfg.ref_loss_db +
           10.0 * cfg.path_loss_exponent * std::log10(distance_m / cfg.ref_distance_m);
}

bool is_reachable(const RadioConfig& cfg, int sf, double rx_dbm) {
    if (sf < kMinSf || sf > kMaxSf)
        throw std::invalid_argument("is_reachable: sf must be in [7, 12]");
    return rx_dbm >= cfg.sensitivity_dbm[static_cast<std::size_t>(sf_index(sf))];
}

} // namespace fadr
