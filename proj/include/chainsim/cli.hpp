#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "chainsim/config.hpp"
#include "chainsim/engine.hpp"
#include "chainsim/metrics.hpp"

namespace chainsim::cli {

struct RunFlags {
    bool events = false;     // also write events.csv (small runs only)
    bool chain_dump = false; // also write chain.csv (per-node tips)
    std::uint32_t progress = 0;
};

// One seeded run. Writes coverage.csv, summary.txt and effective.cfg into
// out_dir (plus optional artifacts); feeding effective.cfg back reproduces the
// outputs byte for byte.
SimState run_single(const SimConfig& cfg, const std::string& out_dir, const RunFlags& flags = {});

// Deterministic key=value run summary (same bytes for any worker count).
void write_summary(const SimState& state, std::ostream& out);

// Attacker-count grid: logarithmically spaced below nodes/2, then steps of
// nodes/40 up to nodes-1.
std::vector<std::uint32_t> default_grid(std::uint32_t nodes);

struct SweepOutcome {
    std::vector<SweepPoint> points;
    std::uint32_t computed = 0; // points simulated this invocation
    std::uint32_t resumed = 0;  // points reused from disk
};

// grid x seeds runs; per-point results land in out_dir/point_<count>.csv and
// the aggregate in out_dir/sweep.csv. Existing complete point files are
// reused, so deleting one file recomputes only that point. Independent points
// may run concurrently (jobs > 1); per-point determinism is unaffected.
SweepOutcome run_sweep(const SimConfig& base, std::vector<std::uint32_t> grid, std::uint32_t seeds,
                       const std::string& out_dir, std::uint32_t jobs = 1);

struct ReportOutcome {
    bool cutoff_found = false;
    std::uint32_t cutoff = 0;  // smallest attacker count with mean coverage < 5% of n
    double threshold = 0.0;    // the 5%-of-n value used
    std::string data_path;
    std::string summary_path;
};

// Normalizes a sweep CSV into plot data (attacker fraction vs coverage
// fraction) and a text summary.
ReportOutcome write_report(const std::string& sweep_csv, std::uint32_t nodes, bool gnuplot,
                           const std::string& out_dir);

// Generates the overlay for this config and writes its edge list.
void write_topology(const SimConfig& cfg, const std::string& out_file);

} // namespace chainsim::cli
