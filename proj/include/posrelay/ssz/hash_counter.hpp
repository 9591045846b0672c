#pragma once

#include <cstdint>

namespace posrelay::ssz {

/// Number of hash_node invocations made on the calling thread so far.
/// Callers meter a region by differencing two readings.
std::uint64_t hash_calls() noexcept;

}  // namespace posrelay::ssz
