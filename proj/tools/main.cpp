// chainsim: deterministic time-stepped simulator of gossip dissemination and
// statistical proof-of-work mining on a Bitcoin-like peer-to-peer overlay,
// with a filtering-DoS (Sybil) attack harness.

#include <cstdlib>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "chainsim/cli.hpp"
#include "chainsim/config.hpp"
#include "chainsim/engine.hpp"

namespace {

chainsim::SimConfig load_config(const std::string& config_path,
                                const std::vector<std::string>& sets) {
    chainsim::SimConfig cfg;
    if (!config_path.empty()) cfg = chainsim::parse_config_file(config_path);
    for (const std::string& kv : sets) {
        const auto eq = kv.find('=');
        if (eq == std::string::npos)
            throw chainsim::ConfigError("config error: --set expects KEY=VALUE, got '" + kv + "'");
        chainsim::apply_config_kv(cfg, kv.substr(0, eq), kv.substr(eq + 1));
    }
    chainsim::validate_config(cfg);
    return cfg;
}

std::string default_out_dir() {
    if (const char* env = std::getenv("CHAINSIM_OUT_DIR")) return env;
    return "out";
}

std::vector<std::uint32_t> parse_grid(const std::string& text) {
    std::vector<std::uint32_t> grid;
    std::size_t pos = 0;
    while (pos < text.size()) {
        std::size_t comma = text.find(',', pos);
        if (comma == std::string::npos) comma = text.size();
        const std::string token = text.substr(pos, comma - pos);
        if (!token.empty()) grid.push_back(static_cast<std::uint32_t>(std::stoul(token)));
        pos = comma + 1;
    }
    return grid;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"chainsim: blockchain gossip network simulator"};
    app.require_subcommand(1);

    std::string config_path;
    std::vector<std::string> sets;
    std::string out = default_out_dir();

    auto add_common = [&](CLI::App* cmd) {
        cmd->add_option("-c,--config", config_path, "key=value configuration file");
        cmd->add_option("-s,--set", sets, "override one key, e.g. --set NODES=1000 (repeatable)");
    };

    auto* topology = app.add_subcommand("topology", "generate the peer overlay and export its edge list");
    add_common(topology);
    std::string topo_out = "edges.txt";
    topology->add_option("-o,--out", topo_out, "output edge-list file");

    auto* run_cmd = app.add_subcommand("run", "execute one seeded simulation run");
    add_common(run_cmd);
    chainsim::cli::RunFlags run_flags;
    run_cmd->add_option("-o,--out", out, "output directory");
    run_cmd->add_flag("--events", run_flags.events, "write per-event log (small runs)");
    run_cmd->add_flag("--chain-dump", run_flags.chain_dump, "write per-node chain tips");
    run_cmd->add_option("--progress", run_flags.progress, "progress line to stderr every N steps");

    auto* sweep_cmd = app.add_subcommand("sweep", "run a grid of attacker counts, several seeds each");
    add_common(sweep_cmd);
    std::string grid_text;
    std::uint32_t seeds = 10;
    std::uint32_t jobs = 1;
    sweep_cmd->add_option("-o,--out", out, "output directory");
    sweep_cmd->add_option("--grid", grid_text, "comma-separated attacker counts (default: auto grid)");
    sweep_cmd->add_option("--seeds", seeds, "seeds per grid point");
    sweep_cmd->add_option("--jobs", jobs, "points to run concurrently");

    auto* report_cmd = app.add_subcommand("report", "normalize a sweep CSV into plot data");
    std::string sweep_csv;
    std::uint32_t nodes = 0;
    bool gnuplot = false;
    report_cmd->add_option("--sweep", sweep_csv, "sweep.csv produced by the sweep command")->required();
    report_cmd->add_option("--nodes", nodes, "node count of the swept network")->required();
    report_cmd->add_flag("--gnuplot", gnuplot, "whitespace-separated output instead of CSV");
    report_cmd->add_option("-o,--out", out, "output directory");

    CLI11_PARSE(app, argc, argv);

    try {
        if (topology->parsed()) {
            chainsim::cli::write_topology(load_config(config_path, sets), topo_out);
            std::cout << "wrote " << topo_out << '\n';
        } else if (run_cmd->parsed()) {
            const auto cfg = load_config(config_path, sets);
            const auto state = chainsim::cli::run_single(cfg, out, run_flags);
            std::cout << "run complete: " << out << "/summary.txt\n";
            std::cout << "blocks_mined=" << state.metrics.mint_steps.size() << '\n';
            if (state.tx_emitted > 0 && !state.metrics.records.empty()) {
                std::cout << "mean_target_tx_coverage="
                          << chainsim::format_double(chainsim::average_coverage(
                                 state.metrics.records, cfg.tx.origin, chainsim::MsgKind::Transaction))
                          << '\n';
            }
        } else if (sweep_cmd->parsed()) {
            const auto cfg = load_config(config_path, sets);
            auto grid = grid_text.empty() ? chainsim::cli::default_grid(cfg.nodes) : parse_grid(grid_text);
            const auto outcome = chainsim::cli::run_sweep(cfg, grid, seeds, out, jobs);
            std::cout << "sweep complete: " << outcome.points.size() << " points ("
                      << outcome.computed << " computed, " << outcome.resumed << " resumed) -> " << out
                      << "/sweep.csv\n";
        } else if (report_cmd->parsed()) {
            const auto res = chainsim::cli::write_report(sweep_csv, nodes, gnuplot, out);
            std::cout << "report written: " << res.data_path << '\n';
            if (res.cutoff_found)
                std::cout << "smallest attacker count with mean coverage < 5% of n: " << res.cutoff
                          << '\n';
            else
                std::cout << "no attacker count reached mean coverage < 5% of n\n";
        }
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
    return 0;
}
