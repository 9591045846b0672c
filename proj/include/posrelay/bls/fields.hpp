#pragma once

// Field tower for BLS12-381:
//   Fp   : 381-bit prime field, Montgomery form over 6 x 64-bit limbs
//   Fp2  : Fp[u] / (u^2 + 1)
//   Fp6  : Fp2[v] / (v^3 - (u + 1))
//   Fp12 : Fp6[w] / (w^2 - v)
// Fr (the 255-bit scalar field) reuses the Montgomery template.

#include <array>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string_view>

namespace posrelay::bls::detail {

template <std::size_t N>
using Limbs = std::array<std::uint64_t, N>;

using u128 = unsigned __int128;

namespace limbs {

template <std::size_t N>
constexpr bool geq(const Limbs<N>& a, const Limbs<N>& b) {
    for (std::size_t i = N; i-- > 0;) {
        if (a[i] != b[i]) return a[i] > b[i];
    }
    return true;
}

template <std::size_t N>
constexpr std::uint64_t add_in_place(Limbs<N>& a, const Limbs<N>& b) {
    std::uint64_t carry = 0;
    for (std::size_t i = 0; i < N; ++i) {
        const u128 s = u128{a[i]} + b[i] + carry;
        a[i] = static_cast<std::uint64_t>(s);
        carry = static_cast<std::uint64_t>(s >> 64);
    }
    return carry;
}

template <std::size_t N>
constexpr std::uint64_t sub_in_place(Limbs<N>& a, const Limbs<N>& b) {
    std::uint64_t borrow = 0;
    for (std::size_t i = 0; i < N; ++i) {
        const u128 d = u128{a[i]} - b[i] - borrow;
        a[i] = static_cast<std::uint64_t>(d);
        borrow = static_cast<std::uint64_t>(d >> 64) & 1U;
    }
    return borrow;
}

template <std::size_t N>
constexpr bool is_zero(const Limbs<N>& a) {
    for (auto x : a) {
        if (x != 0) return false;
    }
    return true;
}

template <std::size_t N>
constexpr Limbs<N> from_u64(std::uint64_t v) {
    Limbs<N> out{};
    out[0] = v;
    return out;
}

template <std::size_t N>
constexpr Limbs<N> div_small(const Limbs<N>& a, std::uint64_t d) {
    Limbs<N> q{};
    u128 rem = 0;
    for (std::size_t i = N; i-- > 0;) {
        const u128 cur = (rem << 64) | a[i];
        q[i] = static_cast<std::uint64_t>(cur / d);
        rem = cur % d;
    }
    return q;
}

template <std::size_t N>
constexpr std::size_t bit_length(const Limbs<N>& a) {
    for (std::size_t i = N; i-- > 0;) {
        if (a[i] != 0) {
            std::size_t bits = 64;
            while (((a[i] >> (bits - 1)) & 1U) == 0) --bits;
            return i * 64 + bits;
        }
    }
    return 0;
}

template <std::size_t N>
constexpr bool test_bit(const Limbs<N>& a, std::size_t bit) {
    return ((a[bit / 64] >> (bit % 64)) & 1U) != 0;
}

/// Big-endian hex (no prefix, any length fitting in N limbs).
template <std::size_t N>
constexpr Limbs<N> from_hex(std::string_view hex) {
    Limbs<N> out{};
    std::size_t bit = 0;
    for (std::size_t i = hex.size(); i-- > 0;) {
        const char c = hex[i];
        std::uint64_t v = 0;
        if (c >= '0' && c <= '9') v = static_cast<std::uint64_t>(c - '0');
        else if (c >= 'a' && c <= 'f') v = static_cast<std::uint64_t>(c - 'a' + 10);
        else if (c >= 'A' && c <= 'F') v = static_cast<std::uint64_t>(c - 'A' + 10);
        out[bit / 64] |= v << (bit % 64);
        bit += 4;
    }
    return out;
}

}  // namespace limbs

/// Prime field in Montgomery representation. `Params::kModulus` must be odd
/// and leave at least one spare top bit.
template <class Params>
class MontField {
public:
    static constexpr std::size_t N = Params::kModulus.size();
    using Repr = Limbs<N>;
    static constexpr Repr kModulus = Params::kModulus;

private:
    static constexpr std::uint64_t compute_inv() {
        // Newton iteration for p^-1 mod 2^64, negated.
        std::uint64_t inv = 1;
        for (int i = 0; i < 7; ++i) inv *= 2 - kModulus[0] * inv;
        return ~inv + 1;
    }

    static constexpr Repr double_mod(Repr x) {
        const std::uint64_t carry = limbs::add_in_place(x, x);
        if (carry != 0 || limbs::geq(x, kModulus)) limbs::sub_in_place(x, kModulus);
        return x;
    }

    static constexpr Repr compute_r(std::size_t doublings) {
        Repr x = limbs::from_u64<N>(1);
        for (std::size_t i = 0; i < doublings; ++i) x = double_mod(x);
        return x;
    }

public:
    static constexpr std::uint64_t kInv = compute_inv();
    static constexpr Repr kR = compute_r(64 * N);
    static constexpr Repr kR2 = compute_r(128 * N);

    constexpr MontField() = default;

    static constexpr MontField zero() { return MontField{}; }
    static constexpr MontField one() { return from_mont(kR); }
    static constexpr MontField from_mont(const Repr& r) {
        MontField f;
        f.v_ = r;
        return f;
    }
    /// `value` must already be < modulus.
    static constexpr MontField from_canonical(const Repr& value) {
        return from_mont(mont_mul(value, kR2));
    }
    static constexpr MontField from_u64(std::uint64_t v) {
        return from_canonical(limbs::from_u64<N>(v));
    }
    static constexpr MontField from_hex(std::string_view hex) {
        return from_canonical(limbs::from_hex<N>(hex));
    }

    constexpr Repr to_canonical() const { return mont_mul(v_, limbs::from_u64<N>(1)); }
    constexpr const Repr& mont() const { return v_; }

    constexpr bool is_zero() const { return limbs::is_zero(v_); }
    constexpr bool operator==(const MontField& o) const { return v_ == o.v_; }

    friend constexpr MontField operator+(MontField a, const MontField& b) {
        const std::uint64_t carry = limbs::add_in_place(a.v_, b.v_);
        if (carry != 0 || limbs::geq(a.v_, kModulus)) limbs::sub_in_place(a.v_, kModulus);
        return a;
    }
    friend constexpr MontField operator-(MontField a, const MontField& b) {
        if (limbs::sub_in_place(a.v_, b.v_) != 0) limbs::add_in_place(a.v_, kModulus);
        return a;
    }
    constexpr MontField operator-() const {
        if (is_zero()) return *this;
        Repr r = kModulus;
        limbs::sub_in_place(r, v_);
        return from_mont(r);
    }
    friend constexpr MontField operator*(const MontField& a, const MontField& b) {
        return from_mont(mont_mul(a.v_, b.v_));
    }
    constexpr MontField& operator+=(const MontField& o) { return *this = *this + o; }
    constexpr MontField& operator-=(const MontField& o) { return *this = *this - o; }
    constexpr MontField& operator*=(const MontField& o) { return *this = *this * o; }

    constexpr MontField square() const { return *this * *this; }
    constexpr MontField dbl() const { return *this + *this; }

    template <std::size_t M>
    constexpr MontField pow(const Limbs<M>& exponent) const {
        MontField acc = one();
        for (std::size_t i = limbs::bit_length(exponent); i-- > 0;) {
            acc = acc.square();
            if (limbs::test_bit(exponent, i)) acc *= *this;
        }
        return acc;
    }

    /// Zero maps to zero.
    constexpr MontField inverse() const {
        Repr e = kModulus;
        limbs::sub_in_place(e, limbs::from_u64<N>(2));
        return pow(e);
    }

    static constexpr Repr mont_mul(const Repr& a, const Repr& b) {
        std::uint64_t t[N + 2] = {};
        for (std::size_t i = 0; i < N; ++i) {
            std::uint64_t c = 0;
            for (std::size_t j = 0; j < N; ++j) {
                const u128 s = u128{a[j]} * b[i] + t[j] + c;
                t[j] = static_cast<std::uint64_t>(s);
                c = static_cast<std::uint64_t>(s >> 64);
            }
            u128 s = u128{t[N]} + c;
            t[N] = static_cast<std::uint64_t>(s);
            t[N + 1] = static_cast<std::uint64_t>(s >> 64);

            const std::uint64_t m = t[0] * kInv;
            s = u128{m} * kModulus[0] + t[0];
            c = static_cast<std::uint64_t>(s >> 64);
            for (std::size_t j = 1; j < N; ++j) {
                s = u128{m} * kModulus[j] + t[j] + c;
                t[j - 1] = static_cast<std::uint64_t>(s);
                c = static_cast<std::uint64_t>(s >> 64);
            }
            s = u128{t[N]} + c;
            t[N - 1] = static_cast<std::uint64_t>(s);
            t[N] = t[N + 1] + static_cast<std::uint64_t>(s >> 64);
        }
        Repr r{};
        for (std::size_t i = 0; i < N; ++i) r[i] = t[i];
        if (t[N] != 0 || limbs::geq(r, kModulus)) limbs::sub_in_place(r, kModulus);
        return r;
    }

private:
    Repr v_{};
};

struct FpParams {
    static constexpr Limbs<6> kModulus = limbs::from_hex<6>(
        "1a0111ea397fe69a4b1ba7b6434bacd764774b84f38512bf6730d2a0f6b0f624"
        "1eabfffeb153ffffb9feffffffffaaab");
};

struct FrParams {
    static constexpr Limbs<4> kModulus = limbs::from_hex<4>(
        "73eda753299d7d483339d80809a1d80553bda402fffe5bfeffffffff00000001");
};

using Fr = MontField<FrParams>;
using Scalar = Limbs<4>;

class Fp : public MontField<FpParams> {
public:
    using Base = MontField<FpParams>;
    constexpr Fp() = default;
    constexpr Fp(const Base& b) : Base(b) {}  // NOLINT(google-explicit-constructor)

    static constexpr std::size_t kBytes = 48;

    /// Big-endian canonical encoding; nullopt when the value is >= p.
    static std::optional<Fp> from_bytes(std::span<const std::uint8_t, kBytes> bytes);
    std::array<std::uint8_t, kBytes> to_bytes() const;

    /// Big-endian integer of any length reduced mod p.
    static Fp from_bytes_reduce(std::span<const std::uint8_t> bytes);

    /// Parity of the canonical value.
    bool sgn0() const;
    /// Canonical value > (p - 1) / 2.
    bool lexicographically_largest() const;

    std::optional<Fp> sqrt() const;
    bool is_square() const;
};

struct Fp2 {
    Fp c0;
    Fp c1;

    static Fp2 zero() { return {}; }
    static Fp2 one() { return {Fp::one(), Fp::zero()}; }
    static Fp2 from_hex(std::string_view c0_hex, std::string_view c1_hex) {
        return {Fp::from_hex(c0_hex), Fp::from_hex(c1_hex)};
    }

    bool is_zero() const { return c0.is_zero() && c1.is_zero(); }
    bool operator==(const Fp2&) const = default;

    friend Fp2 operator+(const Fp2& a, const Fp2& b) { return {a.c0 + b.c0, a.c1 + b.c1}; }
    friend Fp2 operator-(const Fp2& a, const Fp2& b) { return {a.c0 - b.c0, a.c1 - b.c1}; }
    Fp2 operator-() const { return {-c0, -c1}; }
    friend Fp2 operator*(const Fp2& a, const Fp2& b);
    friend Fp2 operator*(const Fp2& a, const Fp& s) { return {a.c0 * s, a.c1 * s}; }
    Fp2& operator+=(const Fp2& o) { return *this = *this + o; }
    Fp2& operator-=(const Fp2& o) { return *this = *this - o; }
    Fp2& operator*=(const Fp2& o) { return *this = *this * o; }

    Fp2 square() const;
    Fp2 dbl() const { return *this + *this; }
    Fp2 conjugate() const { return {c0, -c1}; }
    /// Multiplication by the sextic non-residue u + 1.
    Fp2 mul_by_nonresidue() const { return {c0 - c1, c0 + c1}; }
    Fp2 inverse() const;

    template <std::size_t M>
    Fp2 pow(const Limbs<M>& exponent) const {
        Fp2 acc = one();
        for (std::size_t i = limbs::bit_length(exponent); i-- > 0;) {
            acc = acc.square();
            if (limbs::test_bit(exponent, i)) acc *= *this;
        }
        return acc;
    }

    bool sgn0() const;
    bool is_square() const;
    std::optional<Fp2> sqrt() const;
};

struct Fp6 {
    Fp2 c0;
    Fp2 c1;
    Fp2 c2;

    static Fp6 zero() { return {}; }
    static Fp6 one() { return {Fp2::one(), Fp2::zero(), Fp2::zero()}; }

    bool is_zero() const { return c0.is_zero() && c1.is_zero() && c2.is_zero(); }
    bool operator==(const Fp6&) const = default;

    friend Fp6 operator+(const Fp6& a, const Fp6& b) {
        return {a.c0 + b.c0, a.c1 + b.c1, a.c2 + b.c2};
    }
    friend Fp6 operator-(const Fp6& a, const Fp6& b) {
        return {a.c0 - b.c0, a.c1 - b.c1, a.c2 - b.c2};
    }
    Fp6 operator-() const { return {-c0, -c1, -c2}; }
    friend Fp6 operator*(const Fp6& a, const Fp6& b);

    /// Multiplication by v.
    Fp6 mul_by_v() const { return {c2.mul_by_nonresidue(), c0, c1}; }
    Fp6 inverse() const;
};

struct Fp12 {
    Fp6 c0;
    Fp6 c1;

    static Fp12 one() { return {Fp6::one(), Fp6::zero()}; }

    bool is_one() const { return *this == one(); }
    bool operator==(const Fp12&) const = default;

    friend Fp12 operator*(const Fp12& a, const Fp12& b);
    Fp12& operator*=(const Fp12& o) { return *this = *this * o; }

    Fp12 square() const;
    Fp12 conjugate() const { return {c0, -c1}; }
    Fp12 inverse() const;
    Fp12 frobenius() const;

    template <std::size_t M>
    Fp12 pow(const Limbs<M>& exponent) const {
        Fp12 acc = one();
        for (std::size_t i = limbs::bit_length(exponent); i-- > 0;) {
            acc = acc.square();
            if (limbs::test_bit(exponent, i)) acc *= *this;
        }
        return acc;
    }
};

}  // namespace posrelay::bls::detail
