#pragma once

#include <cstdint>

#include "posrelay/relay/types.hpp"

namespace posrelay::relay {

struct CostMeter {
    std::uint64_t sha256_calls = 0;
    std::uint64_t pairing_checks = 0;
    std::uint64_t point_additions = 0;
    std::uint64_t storage_words_written = 0;
    std::uint64_t storage_words_read = 0;
    std::uint64_t payload_bytes = 0;

    void reset() { *this = CostMeter{}; }
    CostMeter& operator+=(const CostMeter& o);

    bool operator==(const CostMeter&) const = default;
};

struct CostModel {
    std::uint64_t gas_per_word_write = 5000;
    std::uint64_t gas_per_word_read = 600;
    std::uint64_t gas_per_payload_byte = 16;
    // SHA-256 precompile on one 64-byte node: 60 + 12 per word.
    std::uint64_t gas_per_sha256 = 84;
    // BLS12-381 pairing precompile with two pairs: 37700 + 2 * 32600.
    std::uint64_t gas_per_pairing = 102900;
    std::uint64_t gas_per_point_addition = 0;
};

struct GasBreakdown {
    std::uint64_t storage_write = 0;
    std::uint64_t storage_read = 0;
    std::uint64_t payload = 0;
    std::uint64_t hashing = 0;
    std::uint64_t pairing = 0;
    std::uint64_t point_addition = 0;

    std::uint64_t total() const {
        return storage_write + storage_read + payload + hashing + pairing + point_addition;
    }
};

GasBreakdown modeled_gas(const CostMeter& meter, const CostModel& model);

/// 32-byte words occupied by `n` 48-byte public keys.
std::uint64_t committee_storage_words(std::uint64_t n);

/// ceil(committee_size * 48 / 32) * gas_per_word_write.
std::uint64_t report_committee_storage_cost(const RelayConfig& config, const CostModel& model);
std::uint64_t report_committee_storage_cost(std::uint64_t committee_size, const CostModel& model);

/// Calldata size of an update: 112-byte headers, 208-byte state, 32 bytes per
/// branch node plus an 8-byte gindex, ceil(n/8) bytes of bits, 96-byte
/// signature and 48 bytes per attached key.
std::uint64_t payload_size(const RelayUpdate& update);

/// Words of relay storage: header (5) plus two committee roots.
inline constexpr std::uint64_t kHeaderWords = 5;
inline constexpr std::uint64_t kAnchorWords = kHeaderWords + 2;

}  // namespace posrelay::relay
