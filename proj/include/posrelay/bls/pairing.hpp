#pragma once

#include <span>
#include <utility>

#include "posrelay/bls/curve.hpp"

namespace posrelay::bls::detail {

/// Optimal ate Miller loop f_{|x|,Q}(P), conjugated for the negative BLS parameter.
Fp12 miller_loop(const G1Affine& p, const G2Affine& q);

/// f^((p^12 - 1) / r).
Fp12 final_exponentiation(const Fp12& f);

Fp12 pairing(const G1Affine& p, const G2Affine& q);

/// True iff prod e(P_i, Q_i) == 1, evaluated with a single final exponentiation.
bool pairing_product_is_one(std::span<const std::pair<G1Affine, G2Affine>> pairs);

}  // namespace posrelay::bls::detail
