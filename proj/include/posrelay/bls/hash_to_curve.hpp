#pragma once

// Hash-to-curve suite BLS12381G2_XMD:SHA-256_SSWU_RO_ (RFC 9380).

#include <cstdint>
#include <span>
#include <string_view>
#include <vector>

#include "posrelay/bls/curve.hpp"

namespace posrelay::bls::detail {

std::vector<std::uint8_t> expand_message_xmd(std::span<const std::uint8_t> msg,
                                             std::string_view dst, std::size_t len_in_bytes);

std::array<Fp2, 2> hash_to_field_fp2(std::span<const std::uint8_t> msg, std::string_view dst);

/// Simplified SWU onto the 3-isogenous curve followed by the isogeny to G2's curve.
/// The result is on the curve but not yet in the prime-order subgroup.
G2Affine map_to_curve_g2(const Fp2& u);

G2 clear_cofactor_g2(const G2& p);
/// Plain multiplication by h_eff; same result as clear_cofactor_g2, slower.
G2 clear_cofactor_g2_reference(const G2& p);

G2Affine hash_to_g2(std::span<const std::uint8_t> msg, std::string_view dst);

}  // namespace posrelay::bls::detail
