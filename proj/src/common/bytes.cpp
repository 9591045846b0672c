#include "posrelay/common/bytes.hpp"

#include <algorithm>

namespace posrelay {

namespace {

constexpr char kDigits[] = "0123456789abcdef";

int nibble(char c) {
    if (c >= '0' && c <= '9') return c - '0';
    if (c >= 'a' && c <= 'f') return c - 'a' + 10;
    if (c >= 'A' && c <= 'F') return c - 'A' + 10;
    return -1;
}

}  // namespace

bool Digest::is_zero() const {
    return std::all_of(bytes.begin(), bytes.end(), [](std::uint8_t b) { return b == 0; });
}

std::string Digest::to_hex() const { return posrelay::to_hex(bytes); }

Digest Digest::from_hex(std::string_view hex) {
    Digest d;
    d.bytes = from_hex_fixed<kSize>(hex);
    return d;
}

std::string to_hex(std::span<const std::uint8_t> data) {
    std::string out;
    out.reserve(2 + data.size() * 2);
    out += "0x";
    for (std::uint8_t b : data) {
        out += kDigits[b >> 4];
        out += kDigits[b & 0x0f];
    }
    return out;
}

Bytes from_hex(std::string_view hex) {
    if (hex.size() >= 2 && hex[0] == '0' && (hex[1] == 'x' || hex[1] == 'X')) {
        hex.remove_prefix(2);
    }
    if (hex.size() % 2 != 0) throw HexError("odd-length hex string");
    Bytes out(hex.size() / 2);
    for (std::size_t i = 0; i < out.size(); ++i) {
        const int hi = nibble(hex[2 * i]);
        const int lo = nibble(hex[2 * i + 1]);
        if (hi < 0 || lo < 0) throw HexError("invalid hex digit");
        out[i] = static_cast<std::uint8_t>((hi << 4) | lo);
    }
    return out;
}

Digest uint64_chunk(std::uint64_t value) {
    Digest d;
    for (int i = 0; i < 8; ++i) {
        d.bytes[i] = static_cast<std::uint8_t>(value >> (8 * i));
    }
    return d;
}

}  // namespace posrelay
