#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "chainsim/cli.hpp"

using namespace chainsim;
namespace fs = std::filesystem;

namespace {

std::string slurp(const fs::path& path) {
    std::ifstream in(path, std::ios::binary);
    REQUIRE(in.good());
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

struct TempDir {
    fs::path path;
    explicit TempDir(const std::string& name) : path(fs::path("cli_test_tmp") / name) {
        fs::remove_all(path);
        fs::create_directories(path);
    }
    ~TempDir() { fs::remove_all(path); }
};

SimConfig small_run_cfg() {
    SimConfig c;
    c.nodes = 120;
    c.edges_per_node = 4;
    c.end_clock = 90;
    c.dissemination = 7;
    c.tx = {0, 5, 8};
    c.attack = {true, 0, 25, 6};
    c.master_seed = 2024;
    return c;
}

} // namespace

TEST_CASE("run_single writes the artifact set") {
    TempDir dir("run_artifacts");
    cli::RunFlags flags;
    flags.events = true;
    flags.chain_dump = true;
    cli::run_single(small_run_cfg(), dir.path.string(), flags);

    CHECK(fs::exists(dir.path / "coverage.csv"));
    CHECK(fs::exists(dir.path / "summary.txt"));
    CHECK(fs::exists(dir.path / "effective.cfg"));
    CHECK(fs::exists(dir.path / "events.csv"));
    CHECK(fs::exists(dir.path / "chain.csv"));

    const std::string summary = slurp(dir.path / "summary.txt");
    CHECK(summary.find("blocks_mined=") != std::string::npos);
    CHECK(summary.find("mean_block_interval=") != std::string::npos);
    CHECK(summary.find("mean_target_tx_coverage=") != std::string::npos);
}

TEST_CASE("the effective config echo reproduces the run byte for byte") {
    TempDir dir_a("echo_a");
    TempDir dir_b("echo_b");
    cli::run_single(small_run_cfg(), dir_a.path.string());

    const SimConfig echoed = parse_config_file((dir_a.path / "effective.cfg").string());
    CHECK(echoed == small_run_cfg());
    cli::run_single(echoed, dir_b.path.string());

    CHECK(slurp(dir_a.path / "coverage.csv") == slurp(dir_b.path / "coverage.csv"));
    CHECK(slurp(dir_a.path / "summary.txt") == slurp(dir_b.path / "summary.txt"));
}

TEST_CASE("coverage and summary files are identical across worker counts") {
    TempDir d1("w1"), d2("w2"), d4("w4");
    SimConfig c = small_run_cfg();
    c.workers = 1;
    cli::run_single(c, d1.path.string());
    c.workers = 2;
    cli::run_single(c, d2.path.string());
    c.workers = 4;
    cli::run_single(c, d4.path.string());

    const std::string cov = slurp(d1.path / "coverage.csv");
    CHECK(cov == slurp(d2.path / "coverage.csv"));
    CHECK(cov == slurp(d4.path / "coverage.csv"));
    // Summaries differ only in nothing: WORKERS is not part of the summary.
    const std::string sum = slurp(d1.path / "summary.txt");
    CHECK(sum == slurp(d2.path / "summary.txt"));
    CHECK(sum == slurp(d4.path / "summary.txt"));
}

TEST_CASE("an all-attacker network reports zero mean coverage") {
    TempDir dir("all_attackers");
    SimConfig c = small_run_cfg();
    c.attack = {true, 0, c.nodes - 1, 6};
    cli::run_single(c, dir.path.string());
    const std::string summary = slurp(dir.path / "summary.txt");
    CHECK(summary.find("mean_target_tx_coverage=0\n") != std::string::npos);
    CHECK(summary.find("sybil_complete=1") != std::string::npos);
}

TEST_CASE("default grid is sorted, unique, bounded and knee-dense") {
    const auto grid = cli::default_grid(10000);
    REQUIRE(!grid.empty());
    CHECK(grid.front() == 0);
    CHECK(grid.back() == 9999);
    for (std::size_t i = 1; i < grid.size(); ++i) CHECK(grid[i] > grid[i - 1]);
    // Step-250 spacing in the upper half.
    CHECK(std::find(grid.begin(), grid.end(), 5000) != grid.end());
    CHECK(std::find(grid.begin(), grid.end(), 7250) != grid.end());
    CHECK(std::find(grid.begin(), grid.end(), 7500) != grid.end());

    const auto small = cli::default_grid(1000);
    CHECK(small.back() == 999);
}

TEST_CASE("sweep: single zero-attackers point yields full coverage") {
    TempDir dir("sweep_zero");
    SimConfig c = small_run_cfg();
    c.dissemination = 1; // broadcast floods everyone
    c.attack = {false, 0, 0, 6};
    const auto outcome = cli::run_sweep(c, {0}, 1, dir.path.string());
    REQUIRE(outcome.points.size() == 1);
    CHECK(outcome.points[0].attacker_count == 0);
    CHECK(outcome.points[0].seeds_used == 1);
    CHECK(outcome.points[0].mean_reached == 119.0);
    CHECK(outcome.points[0].stdev_reached == 0.0);
    CHECK(fs::exists(dir.path / "sweep.csv"));
    CHECK(fs::exists(dir.path / "point_0.csv"));
}

TEST_CASE("sweep resumes from completed point files") {
    TempDir dir("sweep_resume");
    SimConfig c = small_run_cfg();
    c.end_clock = 60;
    c.tx = {0, 5, 4};

    const auto first = cli::run_sweep(c, {0, 10}, 2, dir.path.string());
    CHECK(first.computed == 2);
    CHECK(first.resumed == 0);
    const std::string sweep_bytes = slurp(dir.path / "sweep.csv");

    // Nothing to do when everything is on disk.
    const auto second = cli::run_sweep(c, {0, 10}, 2, dir.path.string());
    CHECK(second.computed == 0);
    CHECK(second.resumed == 2);
    CHECK(slurp(dir.path / "sweep.csv") == sweep_bytes);

    // Deleting one point file recomputes only that point.
    fs::remove(dir.path / "point_10.csv");
    const auto third = cli::run_sweep(c, {0, 10}, 2, dir.path.string());
    CHECK(third.computed == 1);
    CHECK(third.resumed == 1);
    CHECK(slurp(dir.path / "sweep.csv") == sweep_bytes);
}

TEST_CASE("sweep aggregation equals recomputation from the point files") {
    TempDir dir("sweep_merge");
    SimConfig c = small_run_cfg();
    c.end_clock = 60;
    c.tx = {0, 5, 4};
    const auto outcome = cli::run_sweep(c, {0, 20}, 3, dir.path.string(), /*jobs=*/2);

    for (const auto& point : outcome.points) {
        std::ifstream in(dir.path / ("point_" + std::to_string(point.attacker_count) + ".csv"));
        REQUIRE(in.good());
        std::string line;
        std::getline(in, line); // header
        std::vector<double> means;
        while (std::getline(in, line)) {
            const auto last_comma = line.rfind(',');
            means.push_back(std::stod(line.substr(last_comma + 1)));
        }
        REQUIRE(means.size() == point.seeds_used);
        CHECK(mean_of(means) == doctest::Approx(point.mean_reached).epsilon(1e-12));
        CHECK(stdev_of(means) == doctest::Approx(point.stdev_reached).epsilon(1e-12));
    }
}

TEST_CASE("sweep validates its inputs") {
    TempDir dir("sweep_bad");
    SimConfig c = small_run_cfg();
    CHECK_THROWS_AS(cli::run_sweep(c, {c.nodes}, 1, dir.path.string()), std::invalid_argument);
    CHECK_THROWS_AS(cli::run_sweep(c, {0}, 0, dir.path.string()), std::invalid_argument);
    c.tx.count = 0;
    CHECK_THROWS_AS(cli::run_sweep(c, {0}, 1, dir.path.string()), ConfigError);
}

TEST_CASE("report: cutoff scan on a synthetic monotone sweep") {
    TempDir dir("report");
    const fs::path sweep = dir.path / "sweep.csv";
    write_sweep_csv({{0, 10, 9999.0, 0.0},
                     {7000, 10, 600.0, 8.0},
                     {7500, 10, 400.0, 5.0},
                     {9999, 10, 0.0, 0.0}},
                    sweep.string());

    const auto res = cli::write_report(sweep.string(), 10000, false, dir.path.string());
    CHECK(res.cutoff_found);
    CHECK(res.cutoff == 7500); // first point below 5% of n = 500
    CHECK(res.threshold == doctest::Approx(500.0));
    CHECK(res.cutoff <= 9999);

    const std::string data = slurp(res.data_path);
    CHECK(data.find("attacker_fraction,coverage_fraction\n") == 0);
    CHECK(data.find("0.75,") != std::string::npos); // 7500/10000
    const std::string summary = slurp(res.summary_path);
    CHECK(summary.find("cutoff_attacker_count=7500") != std::string::npos);

    // gnuplot variant
    const auto res2 = cli::write_report(sweep.string(), 10000, true, dir.path.string());
    CHECK(slurp(res2.data_path).find("# attacker_fraction coverage_fraction\n") == 0);
}

TEST_CASE("report: no cutoff and empty input") {
    TempDir dir("report_edge");
    const fs::path sweep = dir.path / "sweep.csv";
    write_sweep_csv({{0, 1, 9999.0, 0.0}}, sweep.string());
    const auto res = cli::write_report(sweep.string(), 10000, false, dir.path.string());
    CHECK_FALSE(res.cutoff_found);
    CHECK(slurp(res.summary_path).find("cutoff_attacker_count=none") != std::string::npos);

    write_sweep_csv({}, sweep.string());
    CHECK_THROWS_WITH_AS(cli::write_report(sweep.string(), 10000, false, dir.path.string()),
                         doctest::Contains("no data rows"), std::runtime_error);
}

TEST_CASE("topology export writes an edge list") {
    TempDir dir("topo");
    SimConfig c = small_run_cfg();
    const fs::path out = dir.path / "edges.txt";
    cli::write_topology(c, out.string());
    std::ifstream in(out);
    REQUIRE(in.good());
    std::size_t lines = 0;
    NodeId u, v;
    while (in >> u >> v) {
        CHECK(u < v);
        CHECK(v < c.nodes);
        ++lines;
    }
    CHECK(lines >= c.nodes * c.edges_per_node / 2);
}
