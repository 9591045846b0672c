#include "posrelay/ssz/merkle.hpp"

#include <openssl/sha.h>

#include <bit>

#include "posrelay/ssz/hash_counter.hpp"

namespace posrelay::ssz {

namespace {

thread_local std::uint64_t t_hash_calls = 0;

// zero_hashes[d] is the root of a depth-d subtree of zero leaves.
const std::vector<Digest>& zero_hashes() {
    static const std::vector<Digest> table = [] {
        std::vector<Digest> t(65);
        for (std::size_t d = 1; d < t.size(); ++d) {
            std::uint8_t buf[64];
            std::copy(t[d - 1].bytes.begin(), t[d - 1].bytes.end(), buf);
            std::copy(t[d - 1].bytes.begin(), t[d - 1].bytes.end(), buf + 32);
            SHA256(buf, sizeof(buf), t[d].bytes.data());
        }
        return t;
    }();
    return table;
}

void check_limit(std::size_t count, std::uint64_t limit) {
    if (!is_power_of_two(limit)) {
        throw MerkleError(MerkleErrorCode::BadLimit,
                          "limit " + std::to_string(limit) + " is not a power of two");
    }
    if (count > limit) {
        throw MerkleError(MerkleErrorCode::LimitExceeded,
                          std::to_string(count) + " chunks exceed limit " +
                              std::to_string(limit));
    }
}

// Builds every level of the tree, trimming each level to its occupied
// prefix; missing right siblings are zero subtrees.
std::vector<std::vector<Digest>> build_levels(std::span<const Digest> chunks,
                                              unsigned depth) {
    std::vector<std::vector<Digest>> levels;
    levels.reserve(depth + 1);
    levels.emplace_back(chunks.begin(), chunks.end());
    for (unsigned d = 0; d < depth; ++d) {
        const auto& below = levels.back();
        std::vector<Digest> above((below.size() + 1) / 2);
        for (std::size_t i = 0; i < above.size(); ++i) {
            const Digest& right =
                2 * i + 1 < below.size() ? below[2 * i + 1] : zero_hashes()[d];
            above[i] = hash_node(below[2 * i], right);
        }
        levels.push_back(std::move(above));
    }
    return levels;
}

}  // namespace

std::uint64_t hash_calls() noexcept { return t_hash_calls; }

const char* to_string(MerkleErrorCode code) {
    switch (code) {
        case MerkleErrorCode::LimitExceeded: return "LimitExceeded";
        case MerkleErrorCode::BadLimit: return "BadLimit";
        case MerkleErrorCode::IndexOutOfRange: return "IndexOutOfRange";
        case MerkleErrorCode::MalformedBranch: return "MalformedBranch";
    }
    return "Unknown";
}

MerkleError::MerkleError(MerkleErrorCode code, const std::string& detail)
    : std::runtime_error(std::string(to_string(code)) + ": " + detail), code_(code) {}

bool is_power_of_two(std::uint64_t v) { return std::has_single_bit(v); }

std::uint64_t next_power_of_two(std::uint64_t v) { return v <= 1 ? 1 : std::bit_ceil(v); }

unsigned gindex_depth(std::uint64_t gindex) {
    return gindex == 0 ? 0 : static_cast<unsigned>(std::bit_width(gindex) - 1);
}

bool MerkleBranch::well_formed() const {
    return gindex >= 1 && nodes.size() == gindex_depth(gindex);
}

Digest hash_node(const Digest& left, const Digest& right) {
    std::uint8_t buf[64];
    std::copy(left.bytes.begin(), left.bytes.end(), buf);
    std::copy(right.bytes.begin(), right.bytes.end(), buf + 32);
    Digest out;
    SHA256(buf, sizeof(buf), out.bytes.data());
    ++t_hash_calls;
    return out;
}

Digest merkleize(std::span<const Digest> chunks, std::uint64_t limit) {
    check_limit(chunks.size(), limit);
    const unsigned depth = gindex_depth(limit);
    if (chunks.empty()) return zero_hashes()[depth];
    return build_levels(chunks, depth).back().front();
}

MerkleBranch branch_for(std::span<const Digest> chunks, std::uint64_t limit,
                        std::uint64_t index) {
    check_limit(chunks.size(), limit);
    if (index >= limit) {
        throw MerkleError(MerkleErrorCode::IndexOutOfRange,
                          "leaf " + std::to_string(index) + " outside limit " +
                              std::to_string(limit));
    }
    const unsigned depth = gindex_depth(limit);
    MerkleBranch branch;
    branch.gindex = limit + index;
    branch.nodes.reserve(depth);
    const auto levels = build_levels(chunks, depth);
    std::uint64_t pos = index;
    for (unsigned d = 0; d < depth; ++d) {
        const std::uint64_t sibling = pos ^ 1U;
        const auto& level = levels[d];
        branch.nodes.push_back(sibling < level.size() ? level[sibling] : zero_hashes()[d]);
        pos >>= 1U;
    }
    return branch;
}

bool verify_branch(const Digest& leaf, const MerkleBranch& branch, const Digest& root) {
    if (!branch.well_formed()) {
        throw MerkleError(MerkleErrorCode::MalformedBranch,
                          std::to_string(branch.nodes.size()) + " nodes for gindex " +
                              std::to_string(branch.gindex));
    }
    Digest acc = leaf;
    std::uint64_t g = branch.gindex;
    for (const Digest& sibling : branch.nodes) {
        acc = (g & 1U) ? hash_node(sibling, acc) : hash_node(acc, sibling);
        g >>= 1U;
    }
    return acc == root;
}

std::uint64_t gindex_concat(std::uint64_t outer, std::uint64_t inner) {
    const unsigned inner_depth = gindex_depth(inner);
    const std::uint64_t inner_offset = inner - (std::uint64_t{1} << inner_depth);
    return (outer << inner_depth) | inner_offset;
}

}  // namespace posrelay::ssz
