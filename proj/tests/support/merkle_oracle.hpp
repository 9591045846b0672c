#pragma once

// Brute-force Merkle tree: materializes every node in a flat array indexed by
// generalized index, hashing with the standalone SHA-256 oracle.

#include <cstdint>
#include <vector>

#include "posrelay/common/bytes.hpp"

namespace oracle {

class FullTree {
public:
    FullTree(const std::vector<posrelay::Digest>& chunks, std::uint64_t limit);

    const posrelay::Digest& root() const { return nodes_[1]; }
    const posrelay::Digest& node(std::uint64_t gindex) const { return nodes_.at(gindex); }
    std::uint64_t limit() const { return limit_; }

    /// Sibling digests from the leaf at `index` up to the root.
    std::vector<posrelay::Digest> siblings(std::uint64_t index) const;

private:
    std::uint64_t limit_;
    std::vector<posrelay::Digest> nodes_;
};

posrelay::Digest hash_pair(const posrelay::Digest& l, const posrelay::Digest& r);

/// Walks a gindex from the root (bits after the leading one, high to low) and
/// returns the node reached in `tree`.
posrelay::Digest walk(const FullTree& tree, std::uint64_t gindex);

}  // namespace oracle
