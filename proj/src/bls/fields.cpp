#include "posrelay/bls/fields.hpp"

namespace posrelay::bls::detail {

namespace {

using FpRepr = Fp::Repr;

constexpr FpRepr modulus_minus(std::uint64_t k) {
    FpRepr r = Fp::kModulus;
    limbs::sub_in_place(r, limbs::from_u64<6>(k));
    return r;
}

constexpr FpRepr modulus_plus(std::uint64_t k) {
    FpRepr r = Fp::kModulus;
    limbs::add_in_place(r, limbs::from_u64<6>(k));
    return r;
}

constexpr FpRepr kHalfModulus = limbs::div_small(modulus_minus(1), 2);     // (p - 1) / 2
constexpr FpRepr kSqrtExponent = limbs::div_small(modulus_plus(1), 4);     // (p + 1) / 4
constexpr FpRepr kFrobeniusExponent = limbs::div_small(modulus_minus(1), 6);

// gamma[i] = (u + 1)^(i (p - 1) / 6); w^(p i) = gamma[i] w^i.
const std::array<Fp2, 6>& frobenius_coefficients() {
    static const std::array<Fp2, 6> table = [] {
        std::array<Fp2, 6> t;
        const Fp2 xi{Fp::one(), Fp::one()};
        const Fp2 gamma = xi.pow(kFrobeniusExponent);
        t[0] = Fp2::one();
        for (std::size_t i = 1; i < t.size(); ++i) t[i] = t[i - 1] * gamma;
        return t;
    }();
    return table;
}

}  // namespace

// ---- Fp ------------------------------------------------------------------

std::optional<Fp> Fp::from_bytes(std::span<const std::uint8_t, kBytes> bytes) {
    Repr r{};
    for (std::size_t i = 0; i < kBytes; ++i) {
        const std::size_t bit = (kBytes - 1 - i) * 8;
        r[bit / 64] |= std::uint64_t{bytes[i]} << (bit % 64);
    }
    if (limbs::geq(r, kModulus)) return std::nullopt;
    return Fp(from_canonical(r));
}

std::array<std::uint8_t, Fp::kBytes> Fp::to_bytes() const {
    const Repr r = to_canonical();
    std::array<std::uint8_t, kBytes> out{};
    for (std::size_t i = 0; i < kBytes; ++i) {
        const std::size_t bit = (kBytes - 1 - i) * 8;
        out[i] = static_cast<std::uint8_t>(r[bit / 64] >> (bit % 64));
    }
    return out;
}

Fp Fp::from_bytes_reduce(std::span<const std::uint8_t> bytes) {
    const Fp radix = from_u64(256);
    Fp acc = zero();
    for (std::uint8_t b : bytes) acc = acc * radix + from_u64(b);
    return acc;
}

bool Fp::sgn0() const { return (to_canonical()[0] & 1U) != 0; }

bool Fp::lexicographically_largest() const {
    Repr r = to_canonical();
    // r > (p-1)/2  <=>  r - (p-1)/2 - 1 does not borrow
    const std::uint64_t borrow = limbs::sub_in_place(r, kHalfModulus);
    if (borrow != 0) return false;
    return !limbs::is_zero(r);
}

std::optional<Fp> Fp::sqrt() const {
    const Fp candidate = pow(kSqrtExponent);
    if (candidate.square() == *this) return candidate;
    return std::nullopt;
}

bool Fp::is_square() const { return is_zero() || pow(kHalfModulus) == one(); }

// ---- Fp2 -----------------------------------------------------------------

Fp2 operator*(const Fp2& a, const Fp2& b) {
    const Fp t0 = a.c0 * b.c0;
    const Fp t1 = a.c1 * b.c1;
    const Fp cross = (a.c0 + a.c1) * (b.c0 + b.c1);
    return {t0 - t1, cross - t0 - t1};
}

Fp2 Fp2::square() const {
    // (c0 + c1)(c0 - c1) + 2 c0 c1 u
    const Fp re = (c0 + c1) * (c0 - c1);
    const Fp im = (c0 * c1).dbl();
    return {re, im};
}

Fp2 Fp2::inverse() const {
    const Fp norm_inv = (c0.square() + c1.square()).inverse();
    return {c0 * norm_inv, -(c1 * norm_inv)};
}

bool Fp2::sgn0() const {
    const bool sign0 = c0.sgn0();
    const bool zero0 = c0.is_zero();
    const bool sign1 = c1.sgn0();
    return sign0 || (zero0 && sign1);
}

bool Fp2::is_square() const { return Fp(c0.square() + c1.square()).is_square(); }

// Square root through the norm map (p = 3 mod 4, so -1 is a non-residue).
std::optional<Fp2> Fp2::sqrt() const {
    if (c1.is_zero()) {
        if (auto r = c0.sqrt()) return Fp2{*r, Fp::zero()};
        if (auto r = Fp(-c0).sqrt()) return Fp2{Fp::zero(), *r};
        return std::nullopt;
    }
    const auto s = Fp(c0.square() + c1.square()).sqrt();
    if (!s) return std::nullopt;
    const Fp half = Fp(Fp::from_u64(2)).inverse();
    auto x0 = Fp((c0 + *s) * half).sqrt();
    if (!x0) x0 = Fp((c0 - *s) * half).sqrt();
    if (!x0) return std::nullopt;
    const Fp2 candidate{*x0, c1 * Fp(x0->dbl()).inverse()};
    if (candidate.square() == *this) return candidate;
    return std::nullopt;
}

// ---- Fp6 -----------------------------------------------------------------

Fp6 operator*(const Fp6& a, const Fp6& b) {
    const Fp2 t0 = a.c0 * b.c0;
    const Fp2 t1 = a.c1 * b.c1;
    const Fp2 t2 = a.c2 * b.c2;
    const Fp2 c0 = t0 + ((a.c1 + a.c2) * (b.c1 + b.c2) - t1 - t2).mul_by_nonresidue();
    const Fp2 c1 = (a.c0 + a.c1) * (b.c0 + b.c1) - t0 - t1 + t2.mul_by_nonresidue();
    const Fp2 c2 = (a.c0 + a.c2) * (b.c0 + b.c2) - t0 - t2 + t1;
    return {c0, c1, c2};
}

Fp6 Fp6::inverse() const {
    const Fp2 t0 = c0.square() - (c1 * c2).mul_by_nonresidue();
    const Fp2 t1 = c2.square().mul_by_nonresidue() - c0 * c1;
    const Fp2 t2 = c1.square() - c0 * c2;
    const Fp2 det = c0 * t0 + (c2 * t1 + c1 * t2).mul_by_nonresidue();
    const Fp2 det_inv = det.inverse();
    return {t0 * det_inv, t1 * det_inv, t2 * det_inv};
}

// ---- Fp12 ----------------------------------------------------------------

Fp12 operator*(const Fp12& a, const Fp12& b) {
    const Fp6 t0 = a.c0 * b.c0;
    const Fp6 t1 = a.c1 * b.c1;
    const Fp6 c1 = (a.c0 + a.c1) * (b.c0 + b.c1) - t0 - t1;
    return {t0 + t1.mul_by_v(), c1};
}

Fp12 Fp12::square() const {
    // (a + b w)^2 = (a^2 + b^2 v) + 2ab w
    const Fp6 ab = c0 * c1;
    const Fp6 t = (c0 + c1) * (c0 + c1.mul_by_v()) - ab - ab.mul_by_v();
    return {t, ab + ab};
}

Fp12 Fp12::inverse() const {
    const Fp6 denom = c0 * c0 - (c1 * c1).mul_by_v();
    const Fp6 denom_inv = denom.inverse();
    return {c0 * denom_inv, -(c1 * denom_inv)};
}

Fp12 Fp12::frobenius() const {
    // Coefficients of w^0..w^5: c0 holds w^0, w^2, w^4 and c1 holds w^1, w^3, w^5.
    const auto& g = frobenius_coefficients();
    return {
        Fp6{c0.c0.conjugate() * g[0], c0.c1.conjugate() * g[2], c0.c2.conjugate() * g[4]},
        Fp6{c1.c0.conjugate() * g[1], c1.c1.conjugate() * g[3], c1.c2.conjugate() * g[5]},
    };
}

}  // namespace posrelay::bls::detail
