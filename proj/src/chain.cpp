#include "chainsim/chain.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace chainsim {

BlockStore::BlockStore() {
    Block genesis;
    genesis.id = kGenesisId;
    genesis.parent = kGenesisId;
    genesis.height = 0;
    blocks_.push_back(std::move(genesis));
}

BlockId BlockStore::add(Block block) {
    block.id = blocks_.size();
    blocks_.push_back(std::move(block));
    return blocks_.back().id;
}

const Block& BlockStore::get(BlockId id) const {
    if (id >= blocks_.size()) throw std::out_of_range("block store: unknown block id " + std::to_string(id));
    return blocks_[id];
}

const char* to_string(ApplyOutcome o) {
    switch (o) {
    case ApplyOutcome::AdoptedNewTip: return "adopted_new_tip";
    case ApplyOutcome::StoredSideBranch: return "stored_side_branch";
    case ApplyOutcome::Duplicate: return "duplicate";
    case ApplyOutcome::OrphanPending: return "orphan_pending";
    }
    return "?";
}

std::vector<TxId> LedgerState::mempool_snapshot(std::uint32_t max_count) const {
    std::vector<TxId> txs;
    mempool_.for_each([&](std::uint64_t id) {
        if (max_count == 0 || txs.size() < max_count) txs.push_back(id);
    });
    return txs;
}

double block_find_probability(double hashrate, double difficulty, double step_seconds) {
    if (!(hashrate > 0.0)) throw std::invalid_argument("block_find_probability: hashrate must be > 0");
    if (!(difficulty > 0.0)) throw std::invalid_argument("block_find_probability: difficulty must be > 0");
    if (!(step_seconds > 0.0)) throw std::invalid_argument("block_find_probability: step_seconds must be > 0");
    return std::min(1.0, hashrate * step_seconds / (difficulty * 4294967296.0));
}

std::optional<Block> attempt_mine(const MinerProfile& profile, const LedgerState& ledger,
                                  const MiningParams& params, const RngStream& mining_rng,
                                  TimeStep now) {
    if (!(profile.hashrate > 0.0)) return std::nullopt;
    const double p = block_find_probability(profile.hashrate, params.difficulty, params.step_seconds);
    if (mining_rng.unit_at(now, 0) >= p) return std::nullopt;

    Block block;
    block.parent = ledger.tip();
    block.height = ledger.tip_height() + 1;
    block.miner = profile.node;
    block.txs = ledger.mempool_snapshot(params.max_block_tx);
    block.found_step = now;
    return block;
}

namespace {

// Walks both tips to their common ancestor, then moves tx confirmations:
// everything on the new path is confirmed, anything only on the old path goes
// back to the mempool.
void reorg_mempool(DynamicBitset& mempool, DynamicBitset& confirmed, BlockId old_tip,
                   const Block& new_tip, const BlockStore& store) {
    std::vector<const Block*> old_path, new_path;
    const Block* a = &store.get(old_tip);
    const Block* b = &new_tip;
    while (b->height > a->height) {
        new_path.push_back(b);
        b = &store.get(b->parent);
    }
    while (a->height > b->height) {
        old_path.push_back(a);
        a = &store.get(a->parent);
    }
    while (a->id != b->id) {
        old_path.push_back(a);
        new_path.push_back(b);
        a = &store.get(a->parent);
        b = &store.get(b->parent);
    }
    DynamicBitset on_new_path;
    for (const Block* blk : new_path)
        for (TxId tx : blk->txs) {
            on_new_path.set(tx);
            mempool.reset(tx);
            confirmed.set(tx);
        }
    for (const Block* blk : old_path)
        for (TxId tx : blk->txs)
            if (!on_new_path.test(tx)) {
                confirmed.reset(tx);
                mempool.set(tx);
            }
}

} // namespace

ApplyOutcome apply_block(LedgerState& ledger, const Block& block, const BlockStore& store,
                         TimeStep now) {
    ledger.last_block_step_ = now;
    if (ledger.known_.test(block.id)) return ApplyOutcome::Duplicate;
    for (const auto& [parent, child] : ledger.orphans_)
        if (child == block.id) return ApplyOutcome::Duplicate;

    if (block.parent != kGenesisId && !ledger.known_.test(block.parent)) {
        ledger.orphans_.emplace_back(block.parent, block.id);
        return ApplyOutcome::OrphanPending;
    }

    // Apply this block, then cascade any orphans waiting on newly known blocks.
    std::vector<const Block*> queue{&block};
    bool argument_on_tip_path = false;
    while (!queue.empty()) {
        const Block* cur = queue.front();
        queue.erase(queue.begin());
        ledger.known_.set(cur->id);
        if (cur->height > ledger.tip_height_) {
            const BlockId old_tip = ledger.tip_;
            ledger.tip_ = cur->id;
            ledger.tip_height_ = cur->height;
            reorg_mempool(ledger.mempool_, ledger.confirmed_, old_tip, *cur, store);
        }
        for (std::size_t i = 0; i < ledger.orphans_.size();) {
            if (ledger.orphans_[i].first == cur->id) {
                queue.push_back(&store.get(ledger.orphans_[i].second));
                ledger.orphans_.erase(ledger.orphans_.begin() + static_cast<std::ptrdiff_t>(i));
            } else {
                ++i;
            }
        }
    }

    // Outcome describes the argument block: on the tip path or parked aside.
    BlockId cursor = ledger.tip_;
    while (true) {
        if (cursor == block.id) {
            argument_on_tip_path = true;
            break;
        }
        if (cursor == kGenesisId) break;
        cursor = store.get(cursor).parent; // cursor != block.id here, so it is store-backed
    }
    return argument_on_tip_path ? ApplyOutcome::AdoptedNewTip : ApplyOutcome::StoredSideBranch;
}

bool submit_transaction(LedgerState& ledger, const Transaction& tx) {
    if (ledger.mempool_.test(tx.id) || ledger.confirmed_.test(tx.id)) return false;
    ledger.mempool_.set(tx.id);
    return true;
}

std::vector<MinerProfile> make_miner_profiles(NodeId nodes, double miner_fraction,
                                              double total_hashrate, RngStream& rng) {
    const auto want = static_cast<std::uint64_t>(std::floor(static_cast<double>(nodes) * miner_fraction));
    const auto count = static_cast<NodeId>(std::clamp<std::uint64_t>(want, 1, nodes));

    std::vector<NodeId> ids(nodes);
    std::iota(ids.begin(), ids.end(), NodeId{0});
    for (NodeId i = 0; i < count; ++i) {
        const auto j = i + static_cast<NodeId>(rng.index_below(nodes - i));
        std::swap(ids[i], ids[j]);
    }
    ids.resize(count);
    std::sort(ids.begin(), ids.end());

    const double per_miner = total_hashrate / static_cast<double>(count);
    std::vector<MinerProfile> miners;
    miners.reserve(count);
    for (NodeId id : ids) miners.push_back({id, per_miner});
    return miners;
}

} // namespace chainsim
