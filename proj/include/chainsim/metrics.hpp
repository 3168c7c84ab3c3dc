#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "chainsim/types.hpp"

namespace chainsim {

// Reach statistics of one gossiped message: how many distinct nodes other
// than the origin accepted it, and when. One record per injected message.
struct CoverageRecord {
    MsgId message_id = 0;
    std::uint32_t kind_index = 0; // 1-based emission index within its kind
    NodeId origin = 0;
    MsgKind kind = MsgKind::Transaction;
    std::uint32_t reached = 0;
    TimeStep injected_step = 0;
    TimeStep last_reach_step = 0;

    bool operator==(const CoverageRecord&) const = default;
};

// One point of the attacker-count sweep: statistics of the per-seed mean
// coverage of target-originated transactions.
struct SweepPoint {
    std::uint32_t attacker_count = 0;
    std::uint32_t seeds_used = 0;
    double mean_reached = 0.0;
    double stdev_reached = 0.0;

    bool operator==(const SweepPoint&) const = default;
};

// Exact global accounting of the message flow, kept regardless of whether
// per-event records are collected.
struct Counters {
    std::uint64_t sent = 0;         // envelopes placed in flight (relays + origin fan-outs)
    std::uint64_t delivered = 0;    // envelopes handed to their receiver
    std::uint64_t accepted = 0;     // first receptions
    std::uint64_t duplicates = 0;   // receptions deduplicated by the relay cache
    std::uint64_t filtered = 0;     // receptions dropped by attackers
    std::uint64_t tip_switches = 0;
    std::uint64_t orphans_held = 0;

    bool operator==(const Counters&) const = default;
};

struct Metrics {
    std::vector<CoverageRecord> records; // index == message id
    std::vector<TimeStep> mint_steps;    // block discovery times, in mint order
    Counters totals;
    std::uint32_t nodes = 0;

    const CoverageRecord& coverage(MsgId message_id) const; // throws on unknown id
};

// Arithmetic mean reach of the origin's records of the given kind; throws when
// the selection is empty.
double average_coverage(const std::vector<CoverageRecord>& records, NodeId origin,
                        MsgKind kind = MsgKind::Transaction);

// Mean gap between consecutive block discoveries; 0 when fewer than two blocks.
double mean_block_interval(const std::vector<TimeStep>& mint_steps);

// Sample mean / stdev (n-1 denominator; stdev 0 for a single value).
double mean_of(const std::vector<double>& xs);
double stdev_of(const std::vector<double>& xs);

// CSV schemas (fixed column order, plain decimal numbers):
//   coverage: message_index,message_id,origin,kind,reached,injected_step,last_reach_step
//   sweep:    attacker_count,seeds,mean_reached,stdev_reached
void write_coverage_csv(const std::vector<CoverageRecord>& records, const std::string& path);
void write_sweep_csv(const std::vector<SweepPoint>& points, const std::string& path,
                     bool gnuplot = false);
std::vector<SweepPoint> read_sweep_csv(const std::string& path);

} // namespace chainsim
