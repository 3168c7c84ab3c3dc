#pragma once

#include <cstdint>
#include <limits>

namespace chainsim {

// Dense agent index, stable for the lifetime of a run.
using NodeId = std::uint32_t;

// Simulation clock tick; one step models one minute of simulated time.
using TimeStep = std::uint32_t;

// Identifiers are dense sequence numbers assigned in injection/creation order,
// which keeps them deterministic and lets caches use bitsets instead of hash sets.
using MsgId = std::uint64_t;
using TxId = std::uint64_t;
using BlockId = std::uint64_t;
using PayloadId = std::uint64_t;

inline constexpr NodeId kInvalidNode = std::numeric_limits<NodeId>::max();
inline constexpr BlockId kUnassignedBlock = std::numeric_limits<BlockId>::max();

enum class MsgKind : std::uint8_t { Transaction = 0, Block = 1 };

inline const char* to_string(MsgKind k) {
    return k == MsgKind::Transaction ? "transaction" : "block";
}

} // namespace chainsim
