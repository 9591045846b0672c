#include "posrelay/relay/types.hpp"

#include <algorithm>
#include <stdexcept>
#include <string>

namespace posrelay::relay {

Digest BeaconBlockHeader::hash_tree_root() const {
    const std::array<Digest, 5> chunks{uint64_chunk(slot), uint64_chunk(proposer_index),
                                       parent_root, state_root, body_root};
    return ssz::merkleize(chunks, 8);
}

std::array<Digest, SimBeaconState::kLeafCount> SimBeaconState::chunks() const {
    return {uint64_chunk(slot),        finalized_root,     uint64_chunk(finalized_slot),
            current_committee_root,    next_committee_root, history_root,
            reserved_a,                reserved_b};
}

Digest SimBeaconState::hash_tree_root() const { return ssz::merkleize(chunks(), kLeafCount); }

MerkleBranch SimBeaconState::branch(std::uint64_t gindex) const {
    if (gindex < kLeafCount || gindex >= 2 * kLeafCount) {
        throw std::invalid_argument("state gindex " + std::to_string(gindex) + " is not a leaf");
    }
    return ssz::branch_for(chunks(), kLeafCount, gindex - kLeafCount);
}

Digest SyncCommittee::root() const {
    std::vector<Digest> chunks;
    chunks.reserve(2 * pubkeys.size());
    for (const auto& pk : pubkeys) {
        const auto& b = pk.bytes();
        Digest lo;
        Digest hi;
        std::copy(b.begin(), b.begin() + 32, lo.bytes.begin());
        std::copy(b.begin() + 32, b.end(), hi.bytes.begin());
        chunks.push_back(lo);
        chunks.push_back(hi);
    }
    return ssz::merkleize(chunks, ssz::next_power_of_two(chunks.size()));
}

Digest RelayConfig::default_domain() {
    Digest d;
    d.bytes[0] = 0x07;
    return d;
}

void RelayConfig::validate() const {
    if (slots_per_epoch == 0 || epochs_per_period == 0 || committee_size == 0) {
        throw std::invalid_argument("config sizes must be positive");
    }
    for (std::uint64_t g : {finalized_root_gindex, current_committee_gindex, next_committee_gindex}) {
        if (g < SimBeaconState::kLeafCount || g >= 2 * SimBeaconState::kLeafCount) {
            throw std::invalid_argument("state gindex " + std::to_string(g) + " out of range 8..15");
        }
    }
}

const char* to_string(StorageMode mode) {
    return mode == StorageMode::Store ? "STORE" : "NO-STORE";
}

}  // namespace posrelay::relay
