#include "chainsim/cli.hpp"

#include <algorithm>
#include <atomic>
#include <filesystem>
#include <fstream>
#include <mutex>
#include <sstream>
#include <stdexcept>
#include <thread>

namespace fs = std::filesystem;

namespace chainsim::cli {

namespace {

const char* event_kind_name(EventKind k) {
    switch (k) {
    case EventKind::Accept: return "accept";
    case EventKind::Duplicate: return "duplicate";
    case EventKind::FilterDrop: return "filter_drop";
    case EventKind::Relay: return "relay";
    case EventKind::Inject: return "inject";
    case EventKind::Mint: return "mint";
    case EventKind::TipSwitch: return "tip_switch";
    }
    return "?";
}

std::ofstream open_out(const fs::path& path) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot open '" + path.string() + "' for writing");
    return out;
}

void write_events_csv(const EventLog& log, const fs::path& path) {
    auto out = open_out(path);
    out << "step,kind,node,peer,msg\n";
    for (const Event& e : log.events) {
        out << e.step << ',' << event_kind_name(e.kind) << ',' << e.node << ',';
        if (e.peer == kInvalidNode)
            out << '-';
        else
            out << e.peer;
        out << ',' << e.msg << '\n';
    }
    if (!out) throw std::runtime_error("write failed for '" + path.string() + "'");
}

void write_chain_csv(const SimState& s, const fs::path& path) {
    auto out = open_out(path);
    out << "node_id,tip_id,height\n";
    for (NodeId i = 0; i < s.config.nodes; ++i)
        out << i << ',' << s.agents[i].ledger.tip() << ',' << s.agents[i].ledger.tip_height() << '\n';
    if (!out) throw std::runtime_error("write failed for '" + path.string() + "'");
}

} // namespace

void write_summary(const SimState& s, std::ostream& out) {
    const SimConfig& c = s.config;
    out << "nodes=" << c.nodes << '\n';
    out << "end_clock=" << c.end_clock << '\n';
    out << "master_seed=" << c.master_seed << '\n';
    out << "attack_enabled=" << (c.attack.enabled ? 1 : 0) << '\n';
    out << "attack_count=" << s.attack.count() << '\n';
    out << "attack_target=" << c.attack.target << '\n';
    out << "sybil_complete=" << (is_sybil_complete(*s.overlay, s.attack) ? 1 : 0) << '\n';
    out << "overlay_edges=" << s.overlay->edge_count() << '\n';
    out << "overlay_mean_degree=" << format_double(s.overlay->mean_degree()) << '\n';
    out << "transactions_emitted=" << s.tx_emitted << '\n';
    out << "blocks_mined=" << s.metrics.mint_steps.size() << '\n';
    out << "mean_block_interval=" << format_double(mean_block_interval(s.metrics.mint_steps)) << '\n';
    out << "messages_injected=" << s.metrics.records.size() << '\n';

    std::uint64_t target_tx_records = 0;
    std::uint32_t min_reach = 0, max_reach = 0;
    bool first = true;
    for (const auto& r : s.metrics.records) {
        if (r.origin != c.tx.origin || r.kind != MsgKind::Transaction) continue;
        ++target_tx_records;
        min_reach = first ? r.reached : std::min(min_reach, r.reached);
        max_reach = first ? r.reached : std::max(max_reach, r.reached);
        first = false;
    }
    out << "target_origin=" << c.tx.origin << '\n';
    out << "target_tx_records=" << target_tx_records << '\n';
    if (target_tx_records > 0) {
        out << "mean_target_tx_coverage="
            << format_double(average_coverage(s.metrics.records, c.tx.origin, MsgKind::Transaction))
            << '\n';
        out << "min_target_tx_coverage=" << min_reach << '\n';
        out << "max_target_tx_coverage=" << max_reach << '\n';
    }
    out << "envelopes_sent=" << s.metrics.totals.sent << '\n';
    out << "envelopes_delivered=" << s.metrics.totals.delivered << '\n';
    out << "receptions_accepted=" << s.metrics.totals.accepted << '\n';
    out << "receptions_duplicate=" << s.metrics.totals.duplicates << '\n';
    out << "receptions_filtered=" << s.metrics.totals.filtered << '\n';
    out << "tip_switches=" << s.metrics.totals.tip_switches << '\n';
    out << "orphans_held=" << s.metrics.totals.orphans_held << '\n';
    out << "in_flight_at_end=" << in_flight_count(s) << '\n';
}

SimState run_single(const SimConfig& cfg, const std::string& out_dir, const RunFlags& flags) {
    fs::create_directories(out_dir);

    RunOptions options;
    options.collect_events = flags.events;
    options.progress_interval = flags.progress;
    SimState state = run(cfg, options);

    write_coverage_csv(state.metrics.records, (fs::path(out_dir) / "coverage.csv").string());
    {
        auto out = open_out(fs::path(out_dir) / "summary.txt");
        write_summary(state, out);
        if (!out) throw std::runtime_error("write failed for summary.txt");
    }
    {
        auto out = open_out(fs::path(out_dir) / "effective.cfg");
        out << render_config(cfg);
        if (!out) throw std::runtime_error("write failed for effective.cfg");
    }
    if (flags.events) write_events_csv(state.events, fs::path(out_dir) / "events.csv");
    if (flags.chain_dump) write_chain_csv(state, fs::path(out_dir) / "chain.csv");
    return state;
}

std::vector<std::uint32_t> default_grid(std::uint32_t nodes) {
    std::vector<std::uint32_t> grid{0};
    const std::uint32_t half = nodes / 2;
    for (std::uint32_t decade = 1; decade < half; decade *= 10)
        for (std::uint32_t m : {1u, 2u, 5u}) {
            const std::uint64_t v = static_cast<std::uint64_t>(m) * decade;
            if (v < half) grid.push_back(static_cast<std::uint32_t>(v));
        }
    const std::uint32_t step = std::max<std::uint32_t>(1, nodes / 40);
    for (std::uint64_t v = half; v < nodes; v += step) grid.push_back(static_cast<std::uint32_t>(v));
    grid.push_back(nodes - 1);
    std::sort(grid.begin(), grid.end());
    grid.erase(std::unique(grid.begin(), grid.end()), grid.end());
    return grid;
}

namespace {

struct PointFile {
    std::vector<double> means; // one per seed
};

fs::path point_path(const std::string& out_dir, std::uint32_t count) {
    return fs::path(out_dir) / ("point_" + std::to_string(count) + ".csv");
}

bool load_point(const fs::path& path, std::uint32_t seeds, PointFile& out) {
    std::ifstream in(path);
    if (!in) return false;
    std::string line;
    if (!std::getline(in, line)) return false;
    out.means.clear();
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        std::istringstream ss(line);
        std::uint32_t seed_idx;
        std::uint64_t master, attack;
        double mean;
        char c;
        if (!(ss >> seed_idx >> c >> master >> c >> attack >> c >> mean)) return false;
        out.means.push_back(mean);
    }
    return out.means.size() == seeds;
}

PointFile compute_point(const SimConfig& base, std::uint32_t count, std::uint32_t seeds,
                        const fs::path& path) {
    PointFile pf;
    std::ostringstream body;
    body << "seed_index,master_seed,attack_seed,mean_reached\n";
    for (std::uint32_t i = 0; i < seeds; ++i) {
        SimConfig cfg = base;
        cfg.attack.enabled = true;
        cfg.attack.count = count;
        cfg.master_seed = base.master_seed + i;
        cfg.attack.seed = base.attack.seed + i;
        SimState state = run(cfg);
        const double mean = average_coverage(state.metrics.records, cfg.attack.target,
                                             MsgKind::Transaction);
        pf.means.push_back(mean);
        body << i << ',' << cfg.master_seed << ',' << cfg.attack.seed << ',' << format_double(mean)
             << '\n';
    }
    auto out = open_out(path);
    out << body.str();
    if (!out) throw std::runtime_error("write failed for '" + path.string() + "'");
    return pf;
}

} // namespace

SweepOutcome run_sweep(const SimConfig& base, std::vector<std::uint32_t> grid, std::uint32_t seeds,
                       const std::string& out_dir, std::uint32_t jobs) {
    if (seeds < 1) throw std::invalid_argument("sweep: seeds must be >= 1");
    if (base.tx.count < 1) throw ConfigError("config error: sweep requires TX_COUNT >= 1");
    for (std::uint32_t g : grid)
        if (g > base.nodes - 1)
            throw std::invalid_argument("sweep: grid value " + std::to_string(g) +
                                        " exceeds NODES - 1");
    fs::create_directories(out_dir);

    SweepOutcome outcome;
    outcome.points.resize(grid.size());
    std::vector<std::uint8_t> done(grid.size(), 0);

    // Reuse completed points found on disk.
    for (std::size_t i = 0; i < grid.size(); ++i) {
        PointFile pf;
        if (load_point(point_path(out_dir, grid[i]), seeds, pf)) {
            outcome.points[i] = {grid[i], seeds, mean_of(pf.means), stdev_of(pf.means)};
            done[i] = 1;
            ++outcome.resumed;
        }
    }

    std::atomic<std::size_t> next{0};
    std::atomic<std::uint32_t> computed{0};
    std::mutex error_mutex;
    std::exception_ptr first_error;
    auto work = [&] {
        for (;;) {
            const std::size_t i = next.fetch_add(1);
            if (i >= grid.size()) return;
            if (done[i]) continue;
            try {
                PointFile pf = compute_point(base, grid[i], seeds, point_path(out_dir, grid[i]));
                outcome.points[i] = {grid[i], seeds, mean_of(pf.means), stdev_of(pf.means)};
                computed.fetch_add(1);
            } catch (...) {
                std::lock_guard<std::mutex> lock(error_mutex);
                if (!first_error) first_error = std::current_exception();
                return;
            }
        }
    };

    const std::uint32_t nthreads = std::max<std::uint32_t>(1, std::min<std::uint32_t>(jobs, grid.size()));
    if (nthreads == 1) {
        work();
    } else {
        std::vector<std::thread> pool;
        for (std::uint32_t t = 0; t < nthreads; ++t) pool.emplace_back(work);
        for (auto& t : pool) t.join();
    }
    if (first_error) std::rethrow_exception(first_error);
    outcome.computed = computed.load();

    write_sweep_csv(outcome.points, (fs::path(out_dir) / "sweep.csv").string());
    return outcome;
}

ReportOutcome write_report(const std::string& sweep_csv, std::uint32_t nodes, bool gnuplot,
                           const std::string& out_dir) {
    std::vector<SweepPoint> points = read_sweep_csv(sweep_csv);
    if (points.empty()) throw std::runtime_error("report: no data rows in '" + sweep_csv + "'");
    std::sort(points.begin(), points.end(),
              [](const SweepPoint& a, const SweepPoint& b) { return a.attacker_count < b.attacker_count; });
    fs::create_directories(out_dir);

    ReportOutcome res;
    res.threshold = 0.05 * static_cast<double>(nodes);
    for (const auto& p : points) {
        if (p.mean_reached < res.threshold) {
            res.cutoff_found = true;
            res.cutoff = p.attacker_count;
            break;
        }
    }

    const fs::path data = fs::path(out_dir) / (gnuplot ? "report.dat" : "report.csv");
    {
        auto out = open_out(data);
        const char sep = gnuplot ? ' ' : ',';
        if (gnuplot)
            out << "# attacker_fraction coverage_fraction\n";
        else
            out << "attacker_fraction,coverage_fraction\n";
        for (const auto& p : points) {
            const double af = static_cast<double>(p.attacker_count) / static_cast<double>(nodes);
            const double cf = p.mean_reached / static_cast<double>(nodes - 1);
            out << format_double(af) << sep << format_double(cf) << '\n';
        }
        if (!out) throw std::runtime_error("write failed for '" + data.string() + "'");
    }

    const fs::path summary = fs::path(out_dir) / "report.txt";
    {
        auto out = open_out(summary);
        out << "points=" << points.size() << '\n';
        out << "nodes=" << nodes << '\n';
        out << "coverage_threshold=" << format_double(res.threshold) << '\n';
        if (res.cutoff_found)
            out << "cutoff_attacker_count=" << res.cutoff << '\n';
        else
            out << "cutoff_attacker_count=none\n";
        if (!out) throw std::runtime_error("write failed for '" + summary.string() + "'");
    }

    res.data_path = data.string();
    res.summary_path = summary.string();
    return res;
}

void write_topology(const SimConfig& cfg, const std::string& out_file) {
    validate_config(cfg);
    auto rng = rng_for(cfg.master_seed, 0, StreamPurpose::Topology);
    const Overlay overlay = generate_overlay(cfg.nodes, cfg.edges_per_node, rng);
    const fs::path path(out_file);
    if (path.has_parent_path()) fs::create_directories(path.parent_path());
    write_edge_list(overlay, out_file);
}

} // namespace chainsim::cli
