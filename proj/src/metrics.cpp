#include "chainsim/metrics.hpp"

#include <cmath>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include "chainsim/config.hpp"

namespace chainsim {

const CoverageRecord& Metrics::coverage(MsgId message_id) const {
    if (message_id >= records.size())
        throw std::out_of_range("metrics: unknown message id " + std::to_string(message_id));
    return records[message_id];
}

double average_coverage(const std::vector<CoverageRecord>& records, NodeId origin, MsgKind kind) {
    std::uint64_t sum = 0;
    std::uint64_t count = 0;
    for (const auto& r : records) {
        if (r.origin != origin || r.kind != kind) continue;
        sum += r.reached;
        ++count;
    }
    if (count == 0)
        throw std::invalid_argument("average_coverage: no records from origin " + std::to_string(origin));
    return static_cast<double>(sum) / static_cast<double>(count);
}

double mean_block_interval(const std::vector<TimeStep>& mint_steps) {
    if (mint_steps.size() < 2) return 0.0;
    const auto span = static_cast<double>(mint_steps.back() - mint_steps.front());
    return span / static_cast<double>(mint_steps.size() - 1);
}

double mean_of(const std::vector<double>& xs) {
    if (xs.empty()) return 0.0;
    double sum = 0.0;
    for (double x : xs) sum += x;
    return sum / static_cast<double>(xs.size());
}

double stdev_of(const std::vector<double>& xs) {
    if (xs.size() < 2) return 0.0;
    const double m = mean_of(xs);
    double ss = 0.0;
    for (double x : xs) ss += (x - m) * (x - m);
    return std::sqrt(ss / static_cast<double>(xs.size() - 1));
}

void write_coverage_csv(const std::vector<CoverageRecord>& records, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot open '" + path + "' for writing");
    out << "message_index,message_id,origin,kind,reached,injected_step,last_reach_step\n";
    for (const auto& r : records) {
        out << r.kind_index << ',' << r.message_id << ',' << r.origin << ',' << to_string(r.kind)
            << ',' << r.reached << ',' << r.injected_step << ',' << r.last_reach_step << '\n';
    }
    if (!out) throw std::runtime_error("write failed for '" + path + "'");
}

void write_sweep_csv(const std::vector<SweepPoint>& points, const std::string& path, bool gnuplot) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot open '" + path + "' for writing");
    const char sep = gnuplot ? ' ' : ',';
    if (gnuplot)
        out << "# attacker_count seeds mean_reached stdev_reached\n";
    else
        out << "attacker_count,seeds,mean_reached,stdev_reached\n";
    for (const auto& p : points) {
        out << p.attacker_count << sep << p.seeds_used << sep << format_double(p.mean_reached)
            << sep << format_double(p.stdev_reached) << '\n';
    }
    if (!out) throw std::runtime_error("write failed for '" + path + "'");
}

std::vector<SweepPoint> read_sweep_csv(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open '" + path + "'");
    std::vector<SweepPoint> points;
    std::string line;
    bool first = true;
    while (std::getline(in, line)) {
        if (line.empty() || line[0] == '#') continue;
        if (first) {
            first = false;
            if (line.find("attacker_count") != std::string::npos) continue; // header
        }
        std::istringstream ss(line);
        SweepPoint p;
        char comma;
        if (!(ss >> p.attacker_count >> comma >> p.seeds_used >> comma >> p.mean_reached >> comma >>
              p.stdev_reached))
            throw std::runtime_error("sweep csv: malformed row '" + line + "'");
        points.push_back(p);
    }
    return points;
}

} // namespace chainsim
