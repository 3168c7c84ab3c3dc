#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "chainsim/bits.hpp"
#include "chainsim/rng.hpp"
#include "chainsim/types.hpp"

namespace chainsim {

struct Transaction {
    TxId id = 0;
    NodeId originator = 0;
    TimeStep created_step = 0;
};

struct Block {
    BlockId id = kUnassignedBlock;
    BlockId parent = 0;
    std::uint32_t height = 0; // parent.height + 1; genesis is 0
    NodeId miner = kInvalidNode;
    std::vector<TxId> txs;
    TimeStep found_step = 0;
};

inline constexpr BlockId kGenesisId = 0;

// Append-only global registry of every block mined in a run; ids are dense and
// equal the insertion index. Seeded with genesis. Immutable content once
// added, so it is safe to share read-only across workers.
class BlockStore {
public:
    BlockStore();

    BlockId add(Block block); // assigns and returns the id
    const Block& get(BlockId id) const;
    bool contains(BlockId id) const { return id < blocks_.size(); }
    std::uint64_t size() const { return blocks_.size(); }

private:
    std::vector<Block> blocks_;
};

enum class ApplyOutcome : std::uint8_t {
    AdoptedNewTip,
    StoredSideBranch,
    Duplicate,
    OrphanPending,
};

const char* to_string(ApplyOutcome o);

// Per-agent chain state: known blocks, current tip, mempool of unconfirmed
// transactions, and the set of transactions confirmed on the tip's chain.
// Owned by exactly one agent; never shared mutably.
class LedgerState {
public:
    LedgerState() { known_.set(kGenesisId); }

    BlockId tip() const { return tip_; }
    std::uint32_t tip_height() const { return tip_height_; }
    bool knows(BlockId id) const { return known_.test(id); }

    bool in_mempool(TxId id) const { return mempool_.test(id); }
    bool confirmed_on_tip(TxId id) const { return confirmed_.test(id); }
    std::uint64_t mempool_size() const { return mempool_.count(); }

    // Mempool transaction ids in ascending order, optionally capped.
    std::vector<TxId> mempool_snapshot(std::uint32_t max_count = 0) const;

    // Step of the most recent block reception (or own mint); used for
    // end-of-run consistency audits.
    TimeStep last_block_step() const { return last_block_step_; }

    std::uint64_t orphan_count() const { return orphans_.size(); }

private:
    friend ApplyOutcome apply_block(LedgerState&, const Block&, const BlockStore&, TimeStep);
    friend bool submit_transaction(LedgerState&, const Transaction&);

    BlockId tip_ = kGenesisId;
    std::uint32_t tip_height_ = 0;
    DynamicBitset known_;     // block ids received (adopted or side branch)
    DynamicBitset mempool_;   // tx ids waiting for confirmation
    DynamicBitset confirmed_; // tx ids on the tip's chain
    std::vector<std::pair<BlockId, BlockId>> orphans_; // (missing parent, child)
    TimeStep last_block_step_ = 0;
};

struct MinerProfile {
    NodeId node = kInvalidNode;
    double hashrate = 0.0; // hashes/second
};

struct MiningParams {
    double difficulty = 1.0;
    double step_seconds = 60.0;
    std::uint32_t max_block_tx = 0; // 0 = unbounded
};

// Bernoulli-per-step approximation of the PoW race: Bitcoin's expected solve
// time is difficulty * 2^32 / hashrate seconds, so one step succeeds with
// p = min(1, hashrate * step_seconds / (difficulty * 2^32)).
double block_find_probability(double hashrate, double difficulty, double step_seconds);

// One mining attempt for this step. On success returns a draft block extending
// the ledger tip with the current mempool (ascending tx ids, capped by
// max_block_tx); the id is assigned later by BlockStore::add. The success coin
// is a keyed draw on the miner's mining stream at the current step.
std::optional<Block> attempt_mine(const MinerProfile& profile, const LedgerState& ledger,
                                  const MiningParams& params, const RngStream& mining_rng,
                                  TimeStep now);

// Longest-chain adoption with first-seen tie-break (the tip switches only on
// strictly greater height). Orphans are held until their parent arrives, then
// re-applied. On a reorg the mempool is recomputed: transactions on the new
// tip's chain leave it, transactions only on the abandoned branch re-enter.
ApplyOutcome apply_block(LedgerState& ledger, const Block& block, const BlockStore& store,
                         TimeStep now);

// Adds tx to the mempool iff it is neither pending nor confirmed on the tip
// chain. Returns true when newly added.
bool submit_transaction(LedgerState& ledger, const Transaction& tx);

// Uniform hashrate split over a deterministic pseudo-random miner subset:
// floor(nodes * fraction) ids (at least one) chosen by seeded shuffle,
// returned sorted by node id.
std::vector<MinerProfile> make_miner_profiles(NodeId nodes, double miner_fraction,
                                              double total_hashrate, RngStream& rng);

} // namespace chainsim
