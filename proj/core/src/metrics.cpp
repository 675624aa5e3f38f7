#include "fadr/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <stdexcept>

#include "fadr/radio.hpp"

namespace fadr {

double der(std::uint64_t received, std::uint64_t sent) {
    if (sent == 0) return 0.0;
    return static_cast<double>(received) / static_cast<double>(sent);
}

std::optional<double> jain_fairness(std::span<const double> values) {
    if (values.empty()) throw std::invalid_argument("jain_fairness: empty input");
    double sum = 0.0;
    double sum_sq = 0.0;
    for (double v : values) {
        if (!(v >= 0.0)) throw std::invalid_argument("jain_fairness: values must be >= 0");
        sum += v;
        sum_sq += v * v;
    }
    if (sum_sq == 0.0) return std::nullopt;
    return sum * sum / (static_cast<double>(values.size()) * sum_sq);
}

void EnergyModel::validate() const {
    if (tx_current_a.empty()) throw std::invalid_argument("EnergyModel: empty current table");
    if (!(supply_voltage_v > 0.0))
        throw std::invalid_argument("EnergyModel: supply voltage must be > 0");
    for (std::size_t i = 0; i < tx_current_a.size(); ++i) {
        const auto& [tp, amps] = tx_current_a[i];
        if (!std::isfinite(tp) || !(amps > 0.0))
            throw std::invalid_argument("EnergyModel: entries need finite tp and positive current");
        if (i > 0 && !(tp > tx_current_a[i - 1].first))
            throw std::invalid_argument("EnergyModel: tp anchors must be strictly ascending");
    }
}

double EnergyModel::current_a(double tp_dbm) const {
    const auto& table = tx_current_a;
    if (table.empty()) throw std::invalid_argument("EnergyModel: empty current table");
    if (tp_dbm < table.front().first || tp_dbm > table.back().first)
        throw std::invalid_argument("EnergyModel: tp " + std::to_string(tp_dbm) +
                                    " dBm outside the current table hull");
    auto hi = std::lower_bound(table.begin(), table.end(), tp_dbm,
                               [](const auto& row, double v) { return row.first < v; });
    if (hi->first == tp_dbm) return hi->second;
    auto lo = hi - 1;
    const double t = (tp_dbm - lo->first) / (hi->first - lo->first);
    return lo->second + t * (hi->second - lo->second);
}

double energy_j(std::span<const Transmission> log, const EnergyModel& model) {
    model.validate();
    double total = 0.0;
    for (const Transmission& tx : log)
        total += (tx.end_s - tx.start_s) * model.current_a(tx.tp_dbm) * model.supply_voltage_v;
    return total;
}

double energy_j(std::span<const NodeState> nodes, const RadioConfig& radio, int payload_bytes,
                const EnergyModel& model) {
    model.validate();
    double total = 0.0;
    for (const NodeState& node : nodes) {
        if (node.sent == 0) continue;
        total += static_cast<double>(node.sent) * airtime_s(radio, node.sf, payload_bytes) *
                 model.current_a(node.tp_dbm) * model.supply_voltage_v;
    }
    return total;
}

std::vector<DistanceBin> der_vs_distance(std::span<const NodeState> nodes, double bin_width_m) {
    if (!(bin_width_m > 0.0))
        throw std::invalid_argument("der_vs_distance: bin width must be > 0");
    std::map<long long, std::pair<int, double>> bins; // index -> (count, der sum)
    for (const NodeState& node : nodes) {
        const long long idx = static_cast<long long>(std::floor(node.distance_m / bin_width_m));
        auto& [count, sum] = bins[idx];
        ++count;
        sum += der(node.received, node.sent);
    }
    std::vector<DistanceBin> out;
    out.reserve(bins.size());
    for (const auto& [idx, acc] : bins)
        out.push_back({(idx + 0.5) * bin_width_m, acc.first, acc.second / acc.first});
    return out;
}

MetricsReport build_report(const RunResult& result, const SimConfig& cfg,
                           const EnergyModel& model, double bin_width_m) {
    MetricsReport report;
    report.der_per_node.reserve(result.nodes.size());

    std::vector<double> active_ders;
    active_ders.reserve(result.nodes.size());
    std::uint64_t total_sent = 0;
    std::uint64_t total_received = 0;
    for (const NodeState& node : result.nodes) {
        const double d = der(node.received, node.sent);
        report.der_per_node.push_back(d);
        if (node.sent > 0) active_ders.push_back(d);
        total_sent += node.sent;
        total_received += node.received;
    }
    report.fairness = active_ders.empty() ? std::nullopt : jain_fairness(active_ders);
    report.overall_der = der(total_received, total_sent);
    report.total_energy_j = energy_j(result.nodes, cfg.radio, cfg.payload_bytes, model);
    report.der_by_distance = der_vs_distance(result.nodes, bin_width_m);
    return report;
}

} // namespace fadr
