#include "fadr/config.hpp"

#include <algorithm>
#include <cstdint>
#include <stdexcept>
#include <thread>

#include "fadr/csv.hpp"

namespace fadr {

namespace {

std::string_view trim(std::string_view s) {
    while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
    while (!s.empty() && (s.back() == ' ' || s.back() == '\t')) s.remove_suffix(1);
    return s;
}

std::vector<std::string> split_list(std::string_view value) {
    std::vector<std::string> items;
    std::size_t begin = 0;
    while (begin <= value.size()) {
        std::size_t end = value.find(',', begin);
        if (end == std::string_view::npos) end = value.size();
        const std::string_view item = trim(value.substr(begin, end - begin));
        if (item.empty()) throw std::invalid_argument("empty list element");
        items.emplace_back(item);
        begin = end + 1;
        if (end == value.size()) break;
    }
    return items;
}

std::int64_t to_int(const std::string& key, std::string_view value, std::int64_t lo,
                    std::int64_t hi) {
    std::int64_t v = 0;
    try {
        v = parse_int(value);
    } catch (const std::exception&) {
        throw std::invalid_argument(key + ": expected an integer, got '" + std::string(value) + "'");
    }
    if (v < lo || v > hi)
        throw std::invalid_argument(key + ": " + std::to_string(v) + " outside [" +
                                    std::to_string(lo) + ", " + std::to_string(hi) + "]");
    return v;
}

double to_double(const std::string& key, std::string_view value) {
    try {
        return parse_double(value);
    } catch (const std::exception&) {
        throw std::invalid_argument(key + ": expected a number, got '" + std::string(value) + "'");
    }
}

// "lo:hi:step" ladder or explicit comma list.
PowerLevelSet parse_levels(const std::string& key, const std::string& value) {
    PowerLevelSet set;
    if (value.find(':') != std::string::npos) {
        std::vector<std::string> parts;
        std::size_t begin = 0;
        while (true) {
            const std::size_t colon = value.find(':', begin);
            if (colon == std::string::npos) {
                parts.push_back(value.substr(begin));
                break;
            }
            parts.push_back(value.substr(begin, colon - begin));
            begin = colon + 1;
        }
        if (parts.size() != 3)
            throw std::invalid_argument(key + ": ladder form is lo:hi:step");
        const double lo = to_double(key, parts[0]);
        const double hi = to_double(key, parts[1]);
        const double step = to_double(key, parts[2]);
        if (!(step > 0.0) || !(hi > lo))
            throw std::invalid_argument(key + ": ladder needs hi > lo and step > 0");
        for (double p = lo; p <= hi + 1e-9; p += step) set.levels_dbm.push_back(p);
    } else {
        for (const std::string& item : split_list(value))
            set.levels_dbm.push_back(to_double(key, item));
    }
    set.validate();
    return set;
}

} // namespace

std::map<std::string, std::string> parse_key_values(std::string_view text) {
    std::map<std::string, std::string> kv;
    std::size_t begin = 0;
    std::size_t line_no = 0;
    while (begin <= text.size()) {
        std::size_t end = text.find('\n', begin);
        if (end == std::string_view::npos) end = text.size();
        std::string_view line = text.substr(begin, end - begin);
        ++line_no;
        begin = end + 1;

        const std::size_t hash = line.find('#');
        if (hash != std::string_view::npos) line = line.substr(0, hash);
        line = trim(line);
        if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
        if (line.empty()) {
            if (end == text.size()) break;
            continue;
        }
        const std::size_t eq = line.find('=');
        if (eq == std::string_view::npos)
            throw std::invalid_argument("config line " + std::to_string(line_no) +
                                        ": expected key = value");
        const std::string key(trim(line.substr(0, eq)));
        const std::string value(trim(line.substr(eq + 1)));
        if (key.empty())
            throw std::invalid_argument("config line " + std::to_string(line_no) + ": empty key");
        kv[key] = value;
        if (end == text.size()) break;
    }
    return kv;
}

std::map<std::string, std::string> load_key_values(const std::filesystem::path& path) {
    return parse_key_values(read_text_file(path));
}

void apply_option(ExperimentSpec& spec, const std::string& key, const std::string& value) {
    if (key == "allocators") {
        spec.allocators.clear();
        for (const std::string& item : split_list(value))
            spec.allocators.push_back(allocator_from_string(item));
    } else if (key == "nodes") {
        spec.node_counts.clear();
        for (const std::string& item : split_list(value))
            spec.node_counts.push_back(static_cast<std::uint32_t>(to_int(key, item, 1, 1u << 30)));
    } else if (key == "seeds") {
        spec.seeds.clear();
        for (const std::string& item : split_list(value))
            spec.seeds.push_back(static_cast<std::uint64_t>(to_int(key, item, 0, INT64_MAX)));
    } else if (key == "seed_count") {
        const std::int64_t n = to_int(key, value, 1, 1 << 20);
        spec.seeds.clear();
        for (std::int64_t s = 1; s <= n; ++s) spec.seeds.push_back(static_cast<std::uint64_t>(s));
    } else if (key == "sim_time") {
        spec.base.sim_time_s = to_double(key, value);
    } else if (key == "payload") {
        spec.base.payload_bytes = static_cast<int>(to_int(key, value, 1, 255));
    } else if (key == "interval") {
        spec.base.mean_interval_s = to_double(key, value);
    } else if (key == "radius") {
        spec.base.cell_radius_m = to_double(key, value);
    } else if (key == "min_distance") {
        spec.base.min_distance_m = to_double(key, value);
    } else if (key == "channels") {
        spec.base.channel_count = static_cast<int>(to_int(key, value, 1, 1 << 16));
    } else if (key == "cir_db") {
        spec.base.cir = CirMatrix::uniform(to_double(key, value));
    } else if (key == "group_size") {
        spec.base.group_size = static_cast<int>(to_int(key, value, 1, 1 << 30));
    } else if (key == "power_levels") {
        spec.base.levels = parse_levels(key, value);
    } else if (key == "regime") {
        spec.base.regime = regime_from_string(value);
    } else if (key == "bootstrap") {
        spec.base.bootstrap_packets = static_cast<int>(to_int(key, value, 0, 1 << 20));
    } else if (key == "bootstrap_tp") {
        spec.base.bootstrap_tp_dbm = to_double(key, value);
    } else if (key == "fixed_tp") {
        spec.base.fixed_tp_dbm = to_double(key, value);
    } else if (key == "sigma") {
        spec.base.radio.shadowing_sigma_db = to_double(key, value);
    } else if (key == "bandwidth") {
        spec.base.radio.bandwidth_hz = to_double(key, value);
    } else if (key == "coding_rate") {
        spec.base.radio.coding_rate = static_cast<int>(to_int(key, value, 1, 4));
    } else if (key == "preamble") {
        spec.base.radio.preamble_symbols = static_cast<int>(to_int(key, value, 0, 1 << 16));
    } else if (key == "sensitivity") {
        const std::vector<std::string> items = split_list(value);
        if (items.size() == 1) {
            spec.base.radio.sensitivity_dbm.fill(to_double(key, items[0]));
        } else if (items.size() == kSfCount) {
            for (int i = 0; i < kSfCount; ++i)
                spec.base.radio.sensitivity_dbm[static_cast<std::size_t>(i)] =
                    to_double(key, items[static_cast<std::size_t>(i)]);
        } else {
            throw std::invalid_argument("sensitivity: give one value or six (SF7..SF12)");
        }
    } else if (key == "voltage") {
        spec.energy.supply_voltage_v = to_double(key, value);
    } else if (key == "energy_table") {
        // tp:amps pairs, e.g. 2:0.024,5:0.025,...
        spec.energy.tx_current_a.clear();
        for (const std::string& item : split_list(value)) {
            const std::size_t colon = item.find(':');
            if (colon == std::string::npos)
                throw std::invalid_argument("energy_table: entries look like tp:amps");
            spec.energy.tx_current_a.emplace_back(to_double(key, item.substr(0, colon)),
                                                  to_double(key, item.substr(colon + 1)));
        }
        spec.energy.validate();
    } else if (key == "bin_width") {
        spec.distance_bin_m = to_double(key, value);
    } else if (key == "profile_nodes") {
        spec.distance_profile_nodes = static_cast<std::uint32_t>(to_int(key, value, 1, 1u << 30));
    } else if (key == "jobs") {
        spec.jobs = static_cast<int>(to_int(key, value, 1, 1 << 12));
    } else {
        throw std::invalid_argument("unknown option '" + key + "'");
    }
}

void apply_options(ExperimentSpec& spec, const std::map<std::string, std::string>& options) {
    for (const auto& [key, value] : options) apply_option(spec, key, value);
}

std::string option_help() {
    return "allocators     list            fadr,reynders,sn5,fixed\n"
           "nodes          list of ints    population sizes to sweep\n"
           "seeds          list of ints    explicit seed list\n"
           "seed_count     int             shorthand for seeds 1..N\n"
           "sim_time       seconds         simulated horizon\n"
           "payload        bytes           uplink payload size\n"
           "interval       seconds         mean send interval per node\n"
           "radius         meters          cell radius\n"
           "min_distance   meters          near-mast gain clamp\n"
           "channels       int             number of uplink channels\n"
           "cir_db         dB              uniform co-channel rejection threshold\n"
           "group_size     int             RSSI group size for the fair allocator\n"
           "power_levels   lo:hi:step|list transmit power menu (dBm)\n"
           "regime         name            aloha | capture | full\n"
           "bootstrap      int             measurement packets per node\n"
           "bootstrap_tp   dBm             measurement transmit power\n"
           "fixed_tp       dBm             power used by the fixed allocator\n"
           "sigma          dB              shadowing standard deviation\n"
           "bandwidth      Hz              LoRa bandwidth\n"
           "coding_rate    1..4            k in coding rate 4/(4+k)\n"
           "preamble       symbols         preamble length\n"
           "sensitivity    dBm|6 values    receiver floor, uniform or per SF\n"
           "voltage        volts           radio supply voltage\n"
           "energy_table   tp:amps list    transmit current anchors\n"
           "bin_width      meters          DER-vs-distance bin width\n"
           "profile_nodes  int             node count feeding the distance profile\n"
           "jobs           int             worker threads for sweeps\n";
}

ExperimentSpec desk_preset() {
    ExperimentSpec spec;
    spec.allocators = {AllocatorKind::fadr, AllocatorKind::reynders, AllocatorKind::sn5};
    spec.node_counts = {100, 500, 1000, 2000};
    spec.seeds = {1, 2, 3, 4, 5};
    spec.base.cell_radius_m = 190.0;
    spec.base.min_distance_m = 30.0;
    // A fully provisioned gateway. Ten uplink channels put the two-hour
    // comparison in the load band where power-control baselines separate
    // cleanly: busy enough that allocation quality shows, light enough
    // that no allocator is buried by queue-collapse losses.
    spec.base.channel_count = 10;
    spec.base.sim_time_s = 7200.0;
    spec.distance_bin_m = 20.0;
    spec.distance_profile_nodes = 1000;
    spec.jobs = static_cast<int>(std::max(1u, std::thread::hardware_concurrency()));
    return spec;
}

} // namespace fadr
