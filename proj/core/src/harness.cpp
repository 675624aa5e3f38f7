#include "fadr/harness.hpp"

#include <atomic>
#include <cmath>
#include <fstream>
#include <limits>
#include <map>
#include <mutex>
#include <sstream>
#include <stdexcept>
#include <thread>

#include "fadr/csv.hpp"

namespace fadr {

namespace {

CellResult run_cell(const ExperimentSpec& spec, AllocatorKind allocator, std::uint32_t node_count,
                    std::uint64_t seed) {
    SimConfig cfg = spec.base;
    cfg.allocator = allocator;
    cfg.node_count = node_count;
    cfg.seed = seed;
    cfg.record_log = false; // metrics come from counters

    const RunResult result = run(cfg);
    const MetricsReport report = build_report(result, cfg, spec.energy, spec.distance_bin_m);

    CellResult cell;
    cell.allocator = allocator;
    cell.node_count = node_count;
    cell.seed = seed;
    cell.fairness = report.fairness.value_or(std::numeric_limits<double>::quiet_NaN());
    cell.overall_der = report.overall_der;
    cell.energy_j = report.total_energy_j;
    cell.allocation_feasible = result.allocation_feasible;
    cell.der_by_distance = report.der_by_distance;
    return cell;
}

} // namespace

ExperimentResults run_experiment(const ExperimentSpec& spec) {
    if (spec.allocators.empty() || spec.node_counts.empty() || spec.seeds.empty())
        throw std::invalid_argument("run_experiment: allocators, node_counts, and seeds must be non-empty");
    if (spec.jobs < 1) throw std::invalid_argument("run_experiment: jobs must be >= 1");
    spec.energy.validate();

    struct Cell {
        AllocatorKind allocator;
        std::uint32_t node_count;
        std::uint64_t seed;
    };
    std::vector<Cell> grid;
    grid.reserve(spec.allocators.size() * spec.node_counts.size() * spec.seeds.size());
    for (AllocatorKind a : spec.allocators)
        for (std::uint32_t n : spec.node_counts)
            for (std::uint64_t s : spec.seeds) grid.push_back({a, n, s});

    ExperimentResults results;
    results.cells.resize(grid.size());

    const int jobs = std::min<int>(spec.jobs, static_cast<int>(grid.size()));
    if (jobs <= 1) {
        for (std::size_t i = 0; i < grid.size(); ++i)
            results.cells[i] = run_cell(spec, grid[i].allocator, grid[i].node_count, grid[i].seed);
        return results;
    }

    std::atomic<std::size_t> next{0};
    std::atomic<bool> failed{false};
    std::string error;
    std::mutex error_mutex;
    std::vector<std::thread> workers;
    workers.reserve(static_cast<std::size_t>(jobs));
    for (int w = 0; w < jobs; ++w) {
        workers.emplace_back([&] {
            while (true) {
                const std::size_t i = next.fetch_add(1);
                if (i >= grid.size() || failed.load()) return;
                try {
                    results.cells[i] =
                        run_cell(spec, grid[i].allocator, grid[i].node_count, grid[i].seed);
                } catch (const std::exception& e) {
                    std::lock_guard<std::mutex> lock(error_mutex);
                    if (!failed.exchange(true)) error = e.what();
                    return;
                }
            }
        });
    }
    for (std::thread& t : workers) t.join();
    if (failed.load()) throw std::runtime_error("run_experiment: " + error);
    return results;
}

Aggregate aggregate(std::span<const double> values) {
    if (values.empty()) throw std::invalid_argument("aggregate: empty input");
    Aggregate a;
    for (double v : values) a.mean += v;
    a.mean /= static_cast<double>(values.size());
    if (values.size() > 1) {
        double ss = 0.0;
        for (double v : values) ss += (v - a.mean) * (v - a.mean);
        a.stddev = std::sqrt(ss / static_cast<double>(values.size() - 1));
    }
    return a;
}

std::string summary_csv(const ExperimentResults& results) {
    std::string out = "allocator,node_count,seed,fairness,overall_der,energy_j\n";
    for (const CellResult& c : results.cells) {
        append_row(out, {std::string(to_string(c.allocator)), std::to_string(c.node_count),
                         std::to_string(c.seed), format_double(c.fairness),
                         format_double(c.overall_der), format_double(c.energy_j)});
    }
    return out;
}

std::string figure_metric_csv(const ExperimentResults& results, FigureMetric metric) {
    // Preserve first-seen order of (allocator, node_count) pairs.
    std::vector<std::pair<AllocatorKind, std::uint32_t>> keys;
    std::map<std::pair<int, std::uint32_t>, std::vector<double>> groups;
    for (const CellResult& c : results.cells) {
        const std::pair<int, std::uint32_t> key{static_cast<int>(c.allocator), c.node_count};
        auto [it, inserted] = groups.try_emplace(key);
        if (inserted) keys.push_back({c.allocator, c.node_count});
        switch (metric) {
            case FigureMetric::fairness: it->second.push_back(c.fairness); break;
            case FigureMetric::overall_der: it->second.push_back(c.overall_der); break;
            case FigureMetric::energy: it->second.push_back(c.energy_j); break;
        }
    }
    std::string out = "allocator,node_count,mean,stddev\n";
    for (const auto& [allocator, node_count] : keys) {
        const auto& values = groups[{static_cast<int>(allocator), node_count}];
        const Aggregate agg = aggregate(values);
        append_row(out, {std::string(to_string(allocator)), std::to_string(node_count),
                         format_double(agg.mean), format_double(agg.stddev)});
    }
    return out;
}

std::string der_vs_distance_csv(const ExperimentSpec& spec, const ExperimentResults& results) {
    // bin center -> per-seed mean DERs, one series per allocator.
    std::vector<AllocatorKind> order;
    std::map<int, std::map<double, std::vector<double>>> series;
    for (const CellResult& c : results.cells) {
        if (c.node_count != spec.distance_profile_nodes) continue;
        auto [it, inserted] = series.try_emplace(static_cast<int>(c.allocator));
        if (inserted) order.push_back(c.allocator);
        for (const DistanceBin& bin : c.der_by_distance)
            it->second[bin.center_m].push_back(bin.mean_der);
    }
    std::string out = "allocator,distance_bin_m,mean_der,stddev_der\n";
    for (AllocatorKind allocator : order) {
        for (const auto& [center, values] : series[static_cast<int>(allocator)]) {
            const Aggregate agg = aggregate(values);
            append_row(out, {std::string(to_string(allocator)), format_double(center),
                             format_double(agg.mean), format_double(agg.stddev)});
        }
    }
    return out;
}

std::string per_node_csv(const RunResult& result) {
    std::string out = "node_id,x_m,y_m,distance_m,sf,tp_dbm,sent,received,der\n";
    for (const NodeState& n : result.nodes) {
        append_row(out, {std::to_string(n.node_id), format_double(n.x_m), format_double(n.y_m),
                         format_double(n.distance_m), std::to_string(n.sf),
                         format_double(n.tp_dbm), std::to_string(n.sent),
                         std::to_string(n.received), format_double(der(n.received, n.sent))});
    }
    return out;
}

std::string transmission_log_csv(std::span<const Transmission> log) {
    std::string out = "node_id,start_s,sf,tp_dbm,rssi_dbm,fate\n";
    for (const Transmission& tx : log) {
        append_row(out, {std::to_string(tx.node_id), format_double(tx.start_s),
                         std::to_string(tx.sf), format_double(tx.tp_dbm),
                         format_double(tx.rssi_dbm), std::string(to_string(tx.fate))});
    }
    return out;
}

std::string allocation_csv(const AllocationResult& result) {
    std::string out = "node_id,sf,tp_dbm,feasible\n";
    const char* feasible = result.feasible ? "true" : "false";
    for (const Assignment& a : result.assignments) {
        append_row(out, {std::to_string(a.node_id), std::to_string(a.sf), format_double(a.tp_dbm),
                         feasible});
    }
    return out;
}

std::vector<NodeSnapshot> parse_snapshot_csv(std::string_view text, double bootstrap_tp_dbm) {
    const std::vector<std::string> lines = split_lines(text);
    if (lines.empty() || split_csv_line(lines.front()) != std::vector<std::string>{"node_id", "rssi_dbm"})
        throw std::invalid_argument("snapshot csv: expected header 'node_id,rssi_dbm'");
    std::vector<NodeSnapshot> snaps;
    snaps.reserve(lines.size() - 1);
    for (std::size_t i = 1; i < lines.size(); ++i) {
        const std::vector<std::string> fields = split_csv_line(lines[i]);
        if (fields.size() != 2)
            throw std::invalid_argument("snapshot csv: line " + std::to_string(i + 1) +
                                        " needs 2 fields");
        const std::int64_t id = parse_int(fields[0]);
        if (id < 0 || id > std::numeric_limits<std::uint32_t>::max())
            throw std::invalid_argument("snapshot csv: node_id out of range");
        const double rssi = parse_double(fields[1]);
        snaps.push_back({static_cast<std::uint32_t>(id), rssi, rssi - bootstrap_tp_dbm});
    }
    return snaps;
}

void write_experiment_files(const ExperimentSpec& spec, const ExperimentResults& results,
                            const std::filesystem::path& dir) {
    std::filesystem::create_directories(dir);
    write_text_file(dir / "summary.csv", summary_csv(results));
    write_text_file(dir / "fairness.csv", figure_metric_csv(results, FigureMetric::fairness));
    write_text_file(dir / "overall_der.csv", figure_metric_csv(results, FigureMetric::overall_der));
    write_text_file(dir / "energy.csv", figure_metric_csv(results, FigureMetric::energy));
    write_text_file(dir / "der_vs_distance.csv", der_vs_distance_csv(spec, results));
}

void write_text_file(const std::filesystem::path& path, std::string_view text) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot open for writing: " + path.string());
    out.write(text.data(), static_cast<std::streamsize>(text.size()));
    if (!out) throw std::runtime_error("write failed: " + path.string());
}

std::string read_text_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open: " + path.string());
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

} // namespace fadr
