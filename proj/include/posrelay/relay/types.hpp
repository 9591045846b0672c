#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <vector>

#include "posrelay/bls/bls.hpp"
#include "posrelay/common/bytes.hpp"
#include "posrelay/ssz/merkle.hpp"

namespace posrelay::relay {

using ssz::MerkleBranch;

struct BeaconBlockHeader {
    std::uint64_t slot = 0;
    std::uint64_t proposer_index = 0;
    Digest parent_root;
    Digest state_root;
    Digest body_root;

    /// merkleize of the five field chunks with limit 8.
    Digest hash_tree_root() const;

    bool operator==(const BeaconBlockHeader&) const = default;
};

/// Eight-leaf state container; leaves sit at generalized indices 8..15 in
/// field order.
struct SimBeaconState {
    static constexpr std::uint64_t kLeafCount = 8;

    std::uint64_t slot = 0;
    Digest finalized_root;
    std::uint64_t finalized_slot = 0;
    Digest current_committee_root;
    Digest next_committee_root;
    Digest history_root;
    Digest reserved_a;
    Digest reserved_b;

    std::array<Digest, kLeafCount> chunks() const;
    Digest hash_tree_root() const;
    /// Proof for the leaf at `gindex` (8..15) against hash_tree_root().
    MerkleBranch branch(std::uint64_t gindex) const;

    bool operator==(const SimBeaconState&) const = default;
};

struct SyncCommittee {
    std::vector<bls::PublicKey> pubkeys;

    /// Two chunks per key (bytes 0..31, then bytes 32..47 plus 16 zero bytes),
    /// merkleized with limit next_power_of_two(2 * size).
    Digest root() const;
    std::size_t size() const { return pubkeys.size(); }

    bool operator==(const SyncCommittee&) const = default;
};

struct RelayConfig {
    std::uint64_t slots_per_epoch = 32;
    std::uint64_t epochs_per_period = 256;
    std::uint64_t committee_size = 512;
    Digest domain = default_domain();
    std::uint64_t finalized_root_gindex = 9;
    std::uint64_t current_committee_gindex = 11;
    std::uint64_t next_committee_gindex = 12;
    /// Updates whose latest slot is more than this many slots past the current
    /// header are rejected with Expired. Disabled when empty.
    std::optional<std::uint64_t> trusting_period_slots;

    std::uint64_t slots_per_period() const { return slots_per_epoch * epochs_per_period; }

    /// Throws std::invalid_argument on zero sizes or state gindices outside 8..15.
    void validate() const;

    static Digest default_domain();

    bool operator==(const RelayConfig&) const = default;
};

enum class StorageMode { Store, NoStore };

const char* to_string(StorageMode mode);

/// A committee as the relay keeps it: always the root, plus the keys in STORE mode.
struct CommitteeMaterial {
    Digest root;
    std::optional<SyncCommittee> keys;

    bool operator==(const CommitteeMaterial&) const = default;
};

struct RelayState {
    BeaconBlockHeader current_header;
    StorageMode mode = StorageMode::Store;
    CommitteeMaterial trusted;
    CommitteeMaterial trusted_next;
    RelayConfig config;

    bool operator==(const RelayState&) const = default;
};

/// Trusted bootstrap material.
struct Snapshot {
    BeaconBlockHeader header;
    SimBeaconState state;
    SyncCommittee current_committee;
    SyncCommittee next_committee;
};

struct RelayUpdate {
    BeaconBlockHeader finalized_header;
    SimBeaconState finalized_state;
    BeaconBlockHeader latest_header;
    MerkleBranch finality_branch;
    std::vector<bool> participation_bits;
    bls::Signature aggregate_signature{bls::Signature::Encoding{}};
    std::optional<SyncCommittee> next_committee;
    std::optional<MerkleBranch> next_committee_branch;
    std::optional<SyncCommittee> resubmitted_committee;

    bool operator==(const RelayUpdate&) const = default;
};

}  // namespace posrelay::relay
