#include "chainsim/engine.hpp"

#include <algorithm>
#include <barrier>
#include <iostream>
#include <stdexcept>
#include <thread>

namespace chainsim {

std::vector<Partition> partition_nodes(NodeId n, std::uint32_t workers) {
    if (workers < 1 || workers > n)
        throw std::invalid_argument("partition_nodes: workers must be in [1, " + std::to_string(n) + "]");
    std::vector<Partition> parts;
    parts.reserve(workers);
    const NodeId base = n / workers;
    const NodeId rem = n % workers;
    NodeId begin = 0;
    for (std::uint32_t i = 0; i < workers; ++i) {
        const NodeId size = base + (i < rem ? 1 : 0);
        parts.push_back({i, begin, begin + size});
        begin += size;
    }
    return parts;
}

DisseminationProtocol protocol_from(const SimConfig& cfg) {
    switch (cfg.dissemination) {
    case 1: return DisseminationProtocol::broadcast();
    case 2: return DisseminationProtocol::fixed(cfg.fixed_prob);
    case 7:
        return DisseminationProtocol::degree_dependent(cfg.probability_function,
                                                       cfg.func_coeff_higher, cfg.func_coeff_lower);
    default:
        throw ConfigError("config error: DISSEMINATION must be one of 1, 2, 7");
    }
}

namespace {

void log_event(SimState& s, std::vector<Event>& sink, EventKind kind, NodeId node, NodeId peer,
               MsgId msg) {
    if (s.events.enabled) sink.push_back({s.clock, kind, node, peer, msg});
}

void grow_reach(PartitionScratch& sc, MsgId upto) {
    if (sc.reach.size() <= upto) {
        sc.reach.resize(upto + 1, 0);
        sc.last_reach.resize(upto + 1, 0);
    }
}

// Queues relays decided by `node`, charging them to partition `pi`. Events go
// to `event_sink`: the partition buffer during the parallel phase, the global
// log during the serial phases (so log order never depends on the layout).
void queue_relays(SimState& s, std::uint32_t pi, NodeId node, MsgId msg_id,
                  std::vector<Event>& event_sink) {
    auto& sc = s.scratch[pi];
    for (const RelayDecision& r : sc.relay_buf) {
        ++sc.counters.sent;
        log_event(s, event_sink, EventKind::Relay, node, r.dest, msg_id);
        sc.out[s.part_of[r.dest]].push_back({r.dest, node, r.msg});
    }
}

void process_delivery(SimState& s, std::uint32_t pi, NodeId node, const Envelope& e) {
    auto& sc = s.scratch[pi];
    AgentState& agent = s.agents[node];
    ++sc.counters.delivered;

    if (filter_decision(s.attack, node, e.msg) == FilterDecision::Drop) {
        ++sc.counters.filtered;
        log_event(s, sc.events, EventKind::FilterDrop, node, e.sender, e.msg.id);
        return;
    }

    sc.relay_buf.clear();
    const bool accepted = on_receive(agent.relay_cache, e.msg, node, e.sender, *s.overlay,
                                     s.protocol, agent.gossip, sc.relay_buf);
    if (!accepted) {
        ++sc.counters.duplicates;
        log_event(s, sc.events, EventKind::Duplicate, node, e.sender, e.msg.id);
        return;
    }

    ++sc.counters.accepted;
    log_event(s, sc.events, EventKind::Accept, node, e.sender, e.msg.id);
    grow_reach(sc, e.msg.id);
    ++sc.reach[e.msg.id];
    sc.last_reach[e.msg.id] = std::max(sc.last_reach[e.msg.id], s.clock);

    if (e.msg.kind == MsgKind::Transaction) {
        submit_transaction(agent.ledger, s.txs[e.msg.payload]);
    } else {
        const BlockId old_tip = agent.ledger.tip();
        const ApplyOutcome outcome =
            apply_block(agent.ledger, s.blocks.get(e.msg.payload), s.blocks, s.clock);
        if (outcome == ApplyOutcome::OrphanPending) ++sc.counters.orphans_held;
        if (agent.ledger.tip() != old_tip) {
            ++sc.counters.tip_switches;
            log_event(s, sc.events, EventKind::TipSwitch, node, kInvalidNode, agent.ledger.tip());
        }
    }
    queue_relays(s, pi, node, e.msg.id, sc.events);
}

// Phases 1+2 for one partition: drain incoming mail into per-agent inboxes,
// then let each agent process its inbox in canonical (sender, msg) order.
void deliver_and_process(SimState& s, std::uint32_t pi) {
    const Partition part = s.partitions[pi];
    for (std::uint32_t src = 0; src < s.partitions.size(); ++src) {
        auto& bucket = s.mail[src][pi];
        for (const Envelope& e : bucket) s.agents[e.dest].inbox.push_back(e);
        bucket.clear();
    }
    for (NodeId node = part.begin; node < part.end; ++node) {
        AgentState& agent = s.agents[node];
        if (agent.inbox.empty()) continue;
        std::sort(agent.inbox.begin(), agent.inbox.end(), [](const Envelope& a, const Envelope& b) {
            return a.sender != b.sender ? a.sender < b.sender : a.msg.id < b.msg.id;
        });
        for (const Envelope& e : agent.inbox) process_delivery(s, pi, node, e);
        agent.inbox.clear();
    }
}

// Creates a message at `origin` and fans it out; the origin accepts its own
// message immediately (hop 0), relayed copies arrive next step.
void inject_and_gossip(SimState& s, NodeId origin, MsgKind kind, PayloadId payload,
                       std::uint32_t kind_index) {
    const std::uint32_t pi = s.part_of[origin];
    auto& sc = s.scratch[pi];
    AgentState& agent = s.agents[origin];

    const GossipMessage msg = inject(s.msg_ids, agent.relay_cache, origin, kind, payload, s.config.ttl);
    s.metrics.records.push_back({msg.id, kind_index, origin, kind, 0, s.clock, s.clock});
    log_event(s, s.events.events, EventKind::Inject, origin, origin, msg.id);

    sc.relay_buf.clear();
    fan_out(msg, origin, origin, *s.overlay, s.protocol, agent.gossip, sc.relay_buf);
    queue_relays(s, pi, origin, msg.id, s.events.events);
}

// Phase 3: scheduled transaction emissions (at most one per step by schedule
// construction: transaction i fires at step i * period).
void emit_scheduled_transactions(SimState& s) {
    const TxSchedule& sched = s.config.tx;
    if (s.tx_emitted >= sched.count) return;
    if (static_cast<std::uint64_t>(s.tx_emitted) * sched.period != s.clock) return;

    const TxId txid = s.txs.size();
    s.txs.push_back({txid, sched.origin, s.clock});
    submit_transaction(s.agents[sched.origin].ledger, s.txs[txid]);
    ++s.tx_emitted;
    inject_and_gossip(s, sched.origin, MsgKind::Transaction, txid, ++s.tx_kind_counter);
}

// Phase 4: every miner attempts one Bernoulli draw; finds are applied to the
// miner's own ledger and gossiped.
void mine_blocks(SimState& s) {
    const MiningParams params{s.config.difficulty, 60.0, s.config.max_block_tx};
    for (NodeId node : s.miners) {
        AgentState& agent = s.agents[node];
        auto draft = attempt_mine({node, agent.miner_hashrate}, agent.ledger, params, agent.mining,
                                  s.clock);
        if (!draft) continue;
        const BlockId bid = s.blocks.add(std::move(*draft));
        s.metrics.mint_steps.push_back(s.clock);
        log_event(s, s.events.events, EventKind::Mint, node, kInvalidNode, bid);

        auto& sc = s.scratch[s.part_of[node]];
        const BlockId old_tip = agent.ledger.tip();
        apply_block(agent.ledger, s.blocks.get(bid), s.blocks, s.clock);
        if (agent.ledger.tip() != old_tip) {
            ++sc.counters.tip_switches;
            log_event(s, s.events.events, EventKind::TipSwitch, node, kInvalidNode, agent.ledger.tip());
        }
        inject_and_gossip(s, node, MsgKind::Block, bid, ++s.block_kind_counter);
    }
}

// Serial tail of a step: event merge, phases 3-5, clock advance. Runs on one
// thread while the others wait at the barrier.
void serial_tail(SimState& s) {
    if (s.events.enabled)
        for (auto& sc : s.scratch) {
            s.events.events.insert(s.events.events.end(), sc.events.begin(), sc.events.end());
            sc.events.clear();
        }

    emit_scheduled_transactions(s);
    mine_blocks(s);

    for (std::size_t src = 0; src < s.scratch.size(); ++src)
        for (std::size_t dst = 0; dst < s.scratch.size(); ++dst)
            std::swap(s.mail[src][dst], s.scratch[src].out[dst]);

    ++s.clock;
    if (s.options.progress_interval && s.clock % s.options.progress_interval == 0)
        std::cerr << "[chainsim] step " << s.clock << "/" << s.config.end_clock << "  blocks="
                  << s.metrics.mint_steps.size() << "  in-flight=" << in_flight_count(s) << "\n";
}

} // namespace

SimState init_state(SimConfig cfg, std::shared_ptr<const Overlay> overlay, AttackSpec attack,
                    DisseminationProtocol protocol, RunOptions options) {
    validate_config(cfg);
    if (!overlay || overlay->size() != cfg.nodes)
        throw std::invalid_argument("init_state: overlay size does not match NODES");

    SimState s;
    s.config = cfg;
    s.overlay = std::move(overlay);
    s.attack = std::move(attack);
    s.protocol = protocol;
    s.options = options;
    s.events.enabled = options.collect_events && cfg.nodes <= options.event_node_limit;
    s.metrics.nodes = cfg.nodes;

    s.partitions = partition_nodes(cfg.nodes, cfg.workers);
    s.part_of.resize(cfg.nodes);
    for (const Partition& p : s.partitions)
        for (NodeId i = p.begin; i < p.end; ++i) s.part_of[i] = p.index;

    s.agents.reserve(cfg.nodes);
    for (NodeId i = 0; i < cfg.nodes; ++i)
        s.agents.emplace_back(rng_for(cfg.master_seed, i, StreamPurpose::Gossip),
                              rng_for(cfg.master_seed, i, StreamPurpose::Mining));

    auto miner_rng = rng_for(cfg.master_seed, 0, StreamPurpose::MinerSelection);
    for (const MinerProfile& m : make_miner_profiles(cfg.nodes, cfg.miner_fraction(),
                                                     cfg.total_hashrate, miner_rng)) {
        s.agents[m.node].miner_hashrate = m.hashrate;
        s.miners.push_back(m.node);
    }

    const std::size_t P = s.partitions.size();
    s.mail.assign(P, std::vector<std::vector<Envelope>>(P));
    s.scratch.resize(P);
    for (auto& sc : s.scratch) sc.out.resize(P);
    return s;
}

void step(SimState& s) {
    if (s.clock >= s.config.end_clock)
        throw std::logic_error("step: called past end_clock");
    for (std::uint32_t pi = 0; pi < s.partitions.size(); ++pi) deliver_and_process(s, pi);
    serial_tail(s);
}

void finalize(SimState& s) {
    if (s.finalized) return;
    s.finalized = true;
    for (const auto& sc : s.scratch) {
        s.metrics.totals.sent += sc.counters.sent;
        s.metrics.totals.delivered += sc.counters.delivered;
        s.metrics.totals.accepted += sc.counters.accepted;
        s.metrics.totals.duplicates += sc.counters.duplicates;
        s.metrics.totals.filtered += sc.counters.filtered;
        s.metrics.totals.tip_switches += sc.counters.tip_switches;
        s.metrics.totals.orphans_held += sc.counters.orphans_held;
    }
    for (auto& rec : s.metrics.records) {
        for (const auto& sc : s.scratch) {
            if (rec.message_id < sc.reach.size()) {
                rec.reached += sc.reach[rec.message_id];
                rec.last_reach_step = std::max(rec.last_reach_step, sc.last_reach[rec.message_id]);
            }
        }
    }
}

namespace {

void run_threaded(SimState& s) {
    const auto P = static_cast<std::ptrdiff_t>(s.partitions.size());
    const TimeStep ticks = s.config.end_clock - s.clock;
    std::barrier bar(P, [&s]() noexcept { serial_tail(s); });
    std::vector<std::thread> threads;
    threads.reserve(static_cast<std::size_t>(P));
    for (std::ptrdiff_t pi = 0; pi < P; ++pi) {
        threads.emplace_back([&s, &bar, pi, ticks] {
            for (TimeStep t = 0; t < ticks; ++t) {
                deliver_and_process(s, static_cast<std::uint32_t>(pi));
                bar.arrive_and_wait();
            }
        });
    }
    for (auto& t : threads) t.join();
}

} // namespace

SimState run(SimConfig cfg, std::shared_ptr<const Overlay> overlay, AttackSpec attack,
             DisseminationProtocol protocol, RunOptions options) {
    SimState s = init_state(std::move(cfg), std::move(overlay), std::move(attack), protocol, options);
    if (s.config.workers <= 1) {
        while (s.clock < s.config.end_clock) step(s);
    } else {
        run_threaded(s);
    }
    finalize(s);
    return s;
}

SimState run(const SimConfig& cfg, RunOptions options) {
    validate_config(cfg);
    auto topo_rng = rng_for(cfg.master_seed, 0, StreamPurpose::Topology);
    auto overlay = std::make_shared<const Overlay>(
        generate_overlay(cfg.nodes, cfg.edges_per_node, topo_rng));

    AttackSpec attack;
    if (cfg.attack.enabled) {
        auto attack_rng = rng_for(cfg.attack.seed, 0, StreamPurpose::AttackerSelection);
        attack = select_attackers(cfg.nodes, cfg.attack.count, cfg.attack.target, attack_rng);
    }
    return run(cfg, std::move(overlay), std::move(attack), protocol_from(cfg), options);
}

std::uint64_t in_flight_count(const SimState& s) {
    std::uint64_t total = 0;
    for (const auto& row : s.mail)
        for (const auto& bucket : row) total += bucket.size();
    return total;
}

} // namespace chainsim
