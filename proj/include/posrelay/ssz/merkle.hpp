#pragma once

// Binary Merkle trees with SSZ hash-tree-root semantics: SHA-256 nodes,
// zero-digest padding up to a power-of-two limit, and generalized-index
// addressing (root = 1, children of i are 2i and 2i + 1).

#include <cstdint>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "posrelay/common/bytes.hpp"

namespace posrelay::ssz {

enum class MerkleErrorCode {
    LimitExceeded,
    BadLimit,
    IndexOutOfRange,
    MalformedBranch,
};

const char* to_string(MerkleErrorCode code);

class MerkleError : public std::runtime_error {
public:
    MerkleError(MerkleErrorCode code, const std::string& detail);
    MerkleErrorCode code() const noexcept { return code_; }

private:
    MerkleErrorCode code_;
};

/// Sibling path for one leaf, ordered leaf-to-root.
struct MerkleBranch {
    std::vector<Digest> nodes;
    std::uint64_t gindex = 1;

    /// True iff gindex >= 1 and nodes.size() == floor(log2(gindex)).
    bool well_formed() const;

    bool operator==(const MerkleBranch&) const = default;
};

/// floor(log2(gindex)) for gindex >= 1.
unsigned gindex_depth(std::uint64_t gindex);

Digest hash_node(const Digest& left, const Digest& right);

/// Root of the complete tree over `chunks` zero-padded to `limit` leaves.
Digest merkleize(std::span<const Digest> chunks, std::uint64_t limit);

MerkleBranch branch_for(std::span<const Digest> chunks, std::uint64_t limit,
                        std::uint64_t index);

/// Throws MerkleError(MalformedBranch) when the branch length does not match its gindex.
bool verify_branch(const Digest& leaf, const MerkleBranch& branch, const Digest& root);

/// Generalized index of `inner` taken relative to the subtree rooted at `outer`.
std::uint64_t gindex_concat(std::uint64_t outer, std::uint64_t inner);

bool is_power_of_two(std::uint64_t v);

/// Smallest power of two >= v (1 for v == 0).
std::uint64_t next_power_of_two(std::uint64_t v);

}  // namespace posrelay::ssz
