#pragma once

#include <array>
#include <compare>
#include <cstddef>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace posrelay {

using Bytes = std::vector<std::uint8_t>;

/// 32-byte node value used for every root, leaf and signing message.
struct Digest {
    static constexpr std::size_t kSize = 32;
    std::array<std::uint8_t, kSize> bytes{};

    static Digest zero() { return {}; }

    bool is_zero() const;
    std::string to_hex() const;
    static Digest from_hex(std::string_view hex);

    auto operator<=>(const Digest&) const = default;
};

class HexError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// "0x" + lowercase hex.
std::string to_hex(std::span<const std::uint8_t> data);

/// Accepts an optional 0x prefix. Throws HexError on odd length or bad digits.
Bytes from_hex(std::string_view hex);

/// Decodes into a fixed-size buffer; throws HexError on a length mismatch.
template <std::size_t N>
std::array<std::uint8_t, N> from_hex_fixed(std::string_view hex) {
    const Bytes raw = from_hex(hex);
    if (raw.size() != N) {
        throw HexError("expected " + std::to_string(N) + " bytes, got " +
                       std::to_string(raw.size()));
    }
    std::array<std::uint8_t, N> out{};
    for (std::size_t i = 0; i < N; ++i) out[i] = raw[i];
    return out;
}

/// Little-endian integer in the low bytes of a 32-byte chunk (SSZ uint64 packing).
Digest uint64_chunk(std::uint64_t value);

}  // namespace posrelay
