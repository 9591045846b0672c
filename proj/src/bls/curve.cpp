#include "posrelay/bls/curve.hpp"

namespace posrelay::bls::detail {

namespace {

constexpr std::uint8_t kCompressedFlag = 0x80;
constexpr std::uint8_t kInfinityFlag = 0x40;
constexpr std::uint8_t kSignFlag = 0x20;

bool g2_sign(const Fp2& y) {
    if (!y.c1.is_zero()) return y.c1.lexicographically_largest();
    return y.c0.lexicographically_largest();
}

template <std::size_t N>
bool only_flags_set(std::span<const std::uint8_t, N> bytes) {
    if ((bytes[0] & 0x3f) != 0) return false;
    for (std::size_t i = 1; i < N; ++i) {
        if (bytes[i] != 0) return false;
    }
    return true;
}

}  // namespace

G1Affine g1_generator() {
    static const G1Affine g{
        Fp::from_hex("17f1d3a73197d7942695638c4fa9ac0fc3688c4f9774b905a14e3a3f171bac58"
                     "6c55e83ff97a1aeffb3af00adb22c6bb"),
        Fp::from_hex("08b3f481e3aaa0f1a09e30ed741d8ae4fcf5e095d5d00af600db18cb2c04b3ed"
                     "d03cc744a2888ae40caa232946c5e7e1"),
        false};
    return g;
}

G2Affine g2_generator() {
    static const G2Affine g{
        Fp2::from_hex("024aa2b2f08f0a91260805272dc51051c6e47ad4fa403b02b4510b647ae3d177"
                      "0bac0326a805bbefd48056c8c121bdb8",
                      "13e02b6052719f607dacd3a088274f65596bd0d09920b61ab5da61bbdc7f5049"
                      "334cf11213945d57e5ac7d055d042b7e"),
        Fp2::from_hex("0ce5d527727d6e118cc9cdc6da2e351aadfd9baa8cbdd3a76d429a695160d12c"
                      "923ac9cc3baca289e193548608b82801",
                      "0606c4a02ea734cc32acd2b02bc28b99cb3e287e85a763af267492ab572e99ab"
                      "3f370d275cec1da1aaa9075ff05f79be"),
        false};
    return g;
}

G2 psi(const G2& p) {
    // psi(x, y) = (conj(x) / xi^((p-1)/3), conj(y) / xi^((p-1)/2)) with xi = 1 + u.
    static const std::pair<Fp2, Fp2> k = [] {
        Limbs<6> pm1 = FpParams::kModulus;
        limbs::sub_in_place(pm1, limbs::from_u64<6>(1));
        const Fp2 xi{Fp::one(), Fp::one()};
        return std::pair{xi.pow(limbs::div_small(pm1, 3)).inverse(),
                         xi.pow(limbs::div_small(pm1, 2)).inverse()};
    }();
    if (p.is_identity()) return p;
    return {p.x.conjugate() * k.first, p.y.conjugate() * k.second, p.z.conjugate()};
}

G2 mul_by_x(const G2& p) { return -p.mul(Limbs<1>{kBlsX}); }

bool in_subgroup(const G1& p) { return p.mul(Fr::kModulus).is_identity(); }

// psi acts as multiplication by x on the r-torsion and on no other point.
bool in_subgroup(const G2& p) { return psi(p) == mul_by_x(p); }

std::array<std::uint8_t, 48> compress(const G1Affine& p) {
    std::array<std::uint8_t, 48> out{};
    if (p.infinity) {
        out[0] = kCompressedFlag | kInfinityFlag;
        return out;
    }
    out = p.x.to_bytes();
    out[0] |= kCompressedFlag;
    if (p.y.lexicographically_largest()) out[0] |= kSignFlag;
    return out;
}

std::array<std::uint8_t, 96> compress(const G2Affine& p) {
    std::array<std::uint8_t, 96> out{};
    if (p.infinity) {
        out[0] = kCompressedFlag | kInfinityFlag;
        return out;
    }
    const auto hi = p.x.c1.to_bytes();
    const auto lo = p.x.c0.to_bytes();
    std::copy(hi.begin(), hi.end(), out.begin());
    std::copy(lo.begin(), lo.end(), out.begin() + 48);
    out[0] |= kCompressedFlag;
    if (g2_sign(p.y)) out[0] |= kSignFlag;
    return out;
}

std::optional<G1Affine> decompress_g1(std::span<const std::uint8_t, 48> bytes) {
    const std::uint8_t flags = bytes[0];
    if ((flags & kCompressedFlag) == 0) return std::nullopt;
    if ((flags & kInfinityFlag) != 0) {
        if ((flags & kSignFlag) != 0 || !only_flags_set(bytes)) return std::nullopt;
        return G1Affine::identity();
    }
    std::array<std::uint8_t, 48> raw{};
    std::copy(bytes.begin(), bytes.end(), raw.begin());
    raw[0] &= 0x1f;
    const auto x = Fp::from_bytes(raw);
    if (!x) return std::nullopt;
    const auto y = Fp(x->square() * *x + CurveParams<Fp>::b()).sqrt();
    if (!y) return std::nullopt;
    const bool want_largest = (flags & kSignFlag) != 0;
    const Fp y_final = y->lexicographically_largest() == want_largest ? *y : Fp(-*y);
    return G1Affine{*x, y_final, false};
}

std::optional<G2Affine> decompress_g2(std::span<const std::uint8_t, 96> bytes) {
    const std::uint8_t flags = bytes[0];
    if ((flags & kCompressedFlag) == 0) return std::nullopt;
    if ((flags & kInfinityFlag) != 0) {
        if ((flags & kSignFlag) != 0 || !only_flags_set(bytes)) return std::nullopt;
        return G2Affine::identity();
    }
    std::array<std::uint8_t, 48> hi{};
    std::array<std::uint8_t, 48> lo{};
    std::copy(bytes.begin(), bytes.begin() + 48, hi.begin());
    std::copy(bytes.begin() + 48, bytes.end(), lo.begin());
    hi[0] &= 0x1f;
    const auto x1 = Fp::from_bytes(hi);
    const auto x0 = Fp::from_bytes(lo);
    if (!x0 || !x1) return std::nullopt;
    const Fp2 x{*x0, *x1};
    const auto y = (x.square() * x + CurveParams<Fp2>::b()).sqrt();
    if (!y) return std::nullopt;
    const bool want_largest = (flags & kSignFlag) != 0;
    const Fp2 y_final = g2_sign(*y) == want_largest ? *y : -*y;
    return G2Affine{x, y_final, false};
}

}  // namespace posrelay::bls::detail
