#pragma once

// Short-Weierstrass groups of BLS12-381 (a = 0):
//   G1 over Fp  : y^2 = x^3 + 4
//   G2 over Fp2 : y^2 = x^3 + 4 (u + 1)
// Points are kept in Jacobian coordinates; encodings follow the compressed
// ZCash format (48-byte G1, 96-byte G2, flag bits in the top byte).

#include <array>
#include <cstdint>
#include <optional>
#include <span>

#include "posrelay/bls/fields.hpp"

namespace posrelay::bls::detail {

template <class F>
struct CurveParams;

template <>
struct CurveParams<Fp> {
    static Fp b() { return Fp::from_u64(4); }
};

template <>
struct CurveParams<Fp2> {
    static Fp2 b() { return {Fp::from_u64(4), Fp::from_u64(4)}; }
};

template <class F>
struct Affine {
    F x{};
    F y{};
    bool infinity = true;

    static Affine identity() { return {}; }
    bool operator==(const Affine&) const = default;

    bool is_on_curve() const {
        if (infinity) return true;
        return y * y == x * x * x + CurveParams<F>::b();
    }
};

template <class F>
struct Jacobian {
    F x = F::one();
    F y = F::one();
    F z = F::zero();

    static Jacobian identity() { return {}; }
    static Jacobian from_affine(const Affine<F>& a) {
        if (a.infinity) return identity();
        return {a.x, a.y, F::one()};
    }

    bool is_identity() const { return z.is_zero(); }

    Jacobian operator-() const { return {x, -y, z}; }

    Jacobian dbl() const {
        if (is_identity()) return *this;
        const F a = x * x;
        const F b = y * y;
        const F c = b * b;
        const F xb = x + b;
        const F d = (xb * xb - a - c).dbl();
        const F e = a.dbl() + a;
        const F f = e * e;
        Jacobian r;
        r.x = f - d.dbl();
        const F c8 = c.dbl().dbl().dbl();
        r.y = e * (d - r.x) - c8;
        r.z = (y * z).dbl();
        return r;
    }

    friend Jacobian operator+(const Jacobian& p, const Jacobian& q) {
        if (p.is_identity()) return q;
        if (q.is_identity()) return p;
        const F z1z1 = p.z * p.z;
        const F z2z2 = q.z * q.z;
        const F u1 = p.x * z2z2;
        const F u2 = q.x * z1z1;
        const F s1 = p.y * q.z * z2z2;
        const F s2 = q.y * p.z * z1z1;
        if (u1 == u2) {
            if (s1 == s2) return p.dbl();
            return identity();
        }
        const F h = u2 - u1;
        const F h2 = h.dbl();
        const F i = h2 * h2;
        const F j = h * i;
        const F r = (s2 - s1).dbl();
        const F v = u1 * i;
        Jacobian out;
        out.x = r * r - j - v.dbl();
        out.y = r * (v - out.x) - (s1 * j).dbl();
        const F zs = p.z + q.z;
        out.z = (zs * zs - z1z1 - z2z2) * h;
        return out;
    }
    Jacobian& operator+=(const Jacobian& o) { return *this = *this + o; }

    bool operator==(const Jacobian& o) const {
        if (is_identity() || o.is_identity()) return is_identity() && o.is_identity();
        const F z1z1 = z * z;
        const F z2z2 = o.z * o.z;
        if (x * z2z2 != o.x * z1z1) return false;
        return y * o.z * z2z2 == o.y * z * z1z1;
    }

    Affine<F> to_affine() const {
        if (is_identity()) return Affine<F>::identity();
        const F zinv = z.inverse();
        const F zinv2 = zinv * zinv;
        return {x * zinv2, y * zinv2 * zinv, false};
    }

    /// Double-and-add over the little-endian limbs of a non-negative scalar.
    template <std::size_t M>
    Jacobian mul(const Limbs<M>& scalar) const {
        Jacobian acc = identity();
        for (std::size_t i = limbs::bit_length(scalar); i-- > 0;) {
            acc = acc.dbl();
            if (limbs::test_bit(scalar, i)) acc += *this;
        }
        return acc;
    }
};

using G1Affine = Affine<Fp>;
using G2Affine = Affine<Fp2>;
using G1 = Jacobian<Fp>;
using G2 = Jacobian<Fp2>;

/// |x| where x = -0xd201000000010000 is the curve's BLS parameter.
inline constexpr std::uint64_t kBlsX = 0xd201000000010000ULL;

G1Affine g1_generator();
G2Affine g2_generator();

/// [r] P == O, for r the prime subgroup order.
/// Untwist-Frobenius-twist endomorphism on the G2 curve.
G2 psi(const G2& p);
/// [x]P for the (negative) BLS parameter.
G2 mul_by_x(const G2& p);

bool in_subgroup(const G1& p);
bool in_subgroup(const G2& p);

std::array<std::uint8_t, 48> compress(const G1Affine& p);
std::array<std::uint8_t, 96> compress(const G2Affine& p);

/// Parses flags and coordinates and checks the curve equation. The subgroup
/// check is left to the caller.
std::optional<G1Affine> decompress_g1(std::span<const std::uint8_t, 48> bytes);
std::optional<G2Affine> decompress_g2(std::span<const std::uint8_t, 96> bytes);

}  // namespace posrelay::bls::detail
