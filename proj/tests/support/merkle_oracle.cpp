#include "support/merkle_oracle.hpp"

#include <stdexcept>

#include "support/sha256_oracle.hpp"

namespace oracle {

using posrelay::Digest;

Digest hash_pair(const Digest& l, const Digest& r) {
    std::array<std::uint8_t, 64> buf{};
    for (std::size_t i = 0; i < 32; ++i) {
        buf[i] = l.bytes[i];
        buf[32 + i] = r.bytes[i];
    }
    return Digest{sha256(buf)};
}

FullTree::FullTree(const std::vector<Digest>& chunks, std::uint64_t limit)
    : limit_(limit), nodes_(2 * limit) {
    if (chunks.size() > limit) throw std::invalid_argument("too many chunks");
    for (std::uint64_t i = 0; i < chunks.size(); ++i) nodes_[limit + i] = chunks[i];
    for (std::uint64_t g = limit - 1; g >= 1; --g) nodes_[g] = hash_pair(nodes_[2 * g], nodes_[2 * g + 1]);
}

std::vector<Digest> FullTree::siblings(std::uint64_t index) const {
    std::vector<Digest> out;
    for (std::uint64_t g = limit_ + index; g > 1; g /= 2) out.push_back(nodes_[g ^ 1]);
    return out;
}

Digest walk(const FullTree& tree, std::uint64_t gindex) {
    int top = 63;
    while (((gindex >> top) & 1) == 0) --top;
    std::uint64_t g = 1;
    for (int b = top - 1; b >= 0; --b) g = 2 * g + ((gindex >> b) & 1);
    return tree.node(g);
}

}  // namespace oracle
