#pragma once

#include <span>
#include <string_view>

#include "fadr/allocation.hpp"
#include "fadr/collision.hpp"

namespace fadr {

// Interference treatments for sensitivity studies:
//   aloha   — any same-SF overlap destroys both frames, no capture,
//             different SFs never interact;
//   capture — same-SF capture active, different SFs still orthogonal;
//   full    — capture plus cross-SF rejection per the base matrix.
enum class Regime {
    aloha,
    capture,
    full,
};

std::string_view to_string(Regime regime);

// Throws std::invalid_argument for unknown names.
Regime regime_from_string(std::string_view name);

// Base matrix reshaped for a regime: +infinity entries disable the
// corresponding interaction.
CirMatrix regime_matrix(const CirMatrix& base, Regime regime);

// Distance-ordered study allocator: nodes sorted by distance ascending
// (strongest gain first) are split into six contiguous equal blocks —
// remainders pad the lower SFs — mapped to SF7..SF12 in order, all at
// one transmit power.
AllocationResult fixed_allocation(std::span<const NodeSnapshot> nodes, double tp_dbm);

} // namespace fadr
