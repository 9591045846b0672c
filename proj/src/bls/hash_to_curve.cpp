#include "posrelay/bls/hash_to_curve.hpp"

#include <openssl/sha.h>

#include <stdexcept>

namespace posrelay::bls::detail {

namespace {

constexpr std::size_t kFieldElementBytes = 64;  // L = ceil((381 + 128) / 8)

// Effective cofactor h_eff for G2.
constexpr auto kG2CofactorScalar = limbs::from_hex<10>(
    "bc69f08f2ee75b3584c6a0ea91b352888e2a8e9145ad7689986ff031508ffe1329c2f178731db956"
    "d82bf015d1212b02ec0ec69d7477c1ae954cbc06689f6a359894c0adebbf6b4e8020005aaa95551");

struct IsogenyConstants {
    Fp2 a;  // 240 u
    Fp2 b;  // 1012 (1 + u)
    Fp2 z;  // -(2 + u)
    std::array<Fp2, 4> x_num;
    std::array<Fp2, 3> x_den;  // monic: x^2 + k1 x + k0
    std::array<Fp2, 4> y_num;
    std::array<Fp2, 4> y_den;  // monic: x^3 + k2 x^2 + k1 x + k0
};

const IsogenyConstants& iso() {
    static const IsogenyConstants c = [] {
        IsogenyConstants k;
        k.a = {Fp::zero(), Fp::from_u64(240)};
        k.b = {Fp::from_u64(1012), Fp::from_u64(1012)};
        k.z = {-Fp(Fp::from_u64(2)), -Fp(Fp::one())};
        constexpr std::string_view zero = "0";
        k.x_num = {
            Fp2::from_hex("05c759507e8e333ebb5b7a9a47d7ed8532c52d39fd3a042a88b58423c50ae15d"
                          "5c2638e343d9c71c6238aaaaaaaa97d6",
                          "05c759507e8e333ebb5b7a9a47d7ed8532c52d39fd3a042a88b58423c50ae15d"
                          "5c2638e343d9c71c6238aaaaaaaa97d6"),
            Fp2::from_hex(zero,
                          "11560bf17baa99bc32126fced787c88f984f87adf7ae0c7f9a208c6b4f20a418"
                          "1472aaa9cb8d555526a9ffffffffc71a"),
            Fp2::from_hex("11560bf17baa99bc32126fced787c88f984f87adf7ae0c7f9a208c6b4f20a418"
                          "1472aaa9cb8d555526a9ffffffffc71e",
                          "08ab05f8bdd54cde190937e76bc3e447cc27c3d6fbd7063fcd104635a790520c"
                          "0a395554e5c6aaaa9354ffffffffe38d"),
            Fp2::from_hex("171d6541fa38ccfaed6dea691f5fb614cb14b4e7f4e810aa22d6108f142b8575"
                          "7098e38d0f671c7188e2aaaaaaaa5ed1",
                          zero),
        };
        k.x_den = {
            Fp2::from_hex(zero,
                          "1a0111ea397fe69a4b1ba7b6434bacd764774b84f38512bf6730d2a0f6b0f624"
                          "1eabfffeb153ffffb9feffffffffaa63"),
            Fp2::from_hex("c",
                          "1a0111ea397fe69a4b1ba7b6434bacd764774b84f38512bf6730d2a0f6b0f624"
                          "1eabfffeb153ffffb9feffffffffaa9f"),
            Fp2::one(),
        };
        k.y_num = {
            Fp2::from_hex("1530477c7ab4113b59a4c18b076d11930f7da5d4a07f649bf54439d87d27e500"
                          "fc8c25ebf8c92f6812cfc71c71c6d706",
                          "1530477c7ab4113b59a4c18b076d11930f7da5d4a07f649bf54439d87d27e500"
                          "fc8c25ebf8c92f6812cfc71c71c6d706"),
            Fp2::from_hex(zero,
                          "05c759507e8e333ebb5b7a9a47d7ed8532c52d39fd3a042a88b58423c50ae15d"
                          "5c2638e343d9c71c6238aaaaaaaa97be"),
            Fp2::from_hex("11560bf17baa99bc32126fced787c88f984f87adf7ae0c7f9a208c6b4f20a418"
                          "1472aaa9cb8d555526a9ffffffffc71c",
                          "08ab05f8bdd54cde190937e76bc3e447cc27c3d6fbd7063fcd104635a790520c"
                          "0a395554e5c6aaaa9354ffffffffe38f"),
            Fp2::from_hex("124c9ad43b6cf79bfbf7043de3811ad0761b0f37a1e26286b0e977c69aa27452"
                          "4e79097a56dc4bd9e1b371c71c718b10",
                          zero),
        };
        k.y_den = {
            Fp2::from_hex("1a0111ea397fe69a4b1ba7b6434bacd764774b84f38512bf6730d2a0f6b0f624"
                          "1eabfffeb153ffffb9feffffffffa8fb",
                          "1a0111ea397fe69a4b1ba7b6434bacd764774b84f38512bf6730d2a0f6b0f624"
                          "1eabfffeb153ffffb9feffffffffa8fb"),
            Fp2::from_hex(zero,
                          "1a0111ea397fe69a4b1ba7b6434bacd764774b84f38512bf6730d2a0f6b0f624"
                          "1eabfffeb153ffffb9feffffffffa9d3"),
            Fp2::from_hex("12",
                          "1a0111ea397fe69a4b1ba7b6434bacd764774b84f38512bf6730d2a0f6b0f624"
                          "1eabfffeb153ffffb9feffffffffaa99"),
            Fp2::one(),
        };
        return k;
    }();
    return c;
}

template <std::size_t K>
Fp2 horner(const std::array<Fp2, K>& coeffs, const Fp2& x) {
    Fp2 acc = coeffs[K - 1];
    for (std::size_t i = K - 1; i-- > 0;) acc = acc * x + coeffs[i];
    return acc;
}

Fp2 curve_rhs(const Fp2& x, const IsogenyConstants& k) {
    return x.square() * x + k.a * x + k.b;
}

}  // namespace

std::vector<std::uint8_t> expand_message_xmd(std::span<const std::uint8_t> msg,
                                             std::string_view dst,
                                             std::size_t len_in_bytes) {
    constexpr std::size_t b_in_bytes = SHA256_DIGEST_LENGTH;
    constexpr std::size_t r_in_bytes = 64;
    const std::size_t ell = (len_in_bytes + b_in_bytes - 1) / b_in_bytes;
    if (ell > 255 || len_in_bytes > 65535 || dst.size() > 255) {
        throw std::invalid_argument("expand_message_xmd: parameters out of range");
    }

    std::vector<std::uint8_t> dst_prime(dst.begin(), dst.end());
    dst_prime.push_back(static_cast<std::uint8_t>(dst.size()));

    std::vector<std::uint8_t> msg_prime(r_in_bytes, 0);
    msg_prime.insert(msg_prime.end(), msg.begin(), msg.end());
    msg_prime.push_back(static_cast<std::uint8_t>(len_in_bytes >> 8));
    msg_prime.push_back(static_cast<std::uint8_t>(len_in_bytes & 0xff));
    msg_prime.push_back(0);
    msg_prime.insert(msg_prime.end(), dst_prime.begin(), dst_prime.end());

    std::array<std::uint8_t, b_in_bytes> b0{};
    SHA256(msg_prime.data(), msg_prime.size(), b0.data());

    std::vector<std::uint8_t> out;
    out.reserve(ell * b_in_bytes);
    std::array<std::uint8_t, b_in_bytes> prev{};
    std::vector<std::uint8_t> block;
    for (std::size_t i = 1; i <= ell; ++i) {
        block.clear();
        for (std::size_t j = 0; j < b_in_bytes; ++j) {
            block.push_back(i == 1 ? b0[j] : static_cast<std::uint8_t>(b0[j] ^ prev[j]));
        }
        block.push_back(static_cast<std::uint8_t>(i));
        block.insert(block.end(), dst_prime.begin(), dst_prime.end());
        SHA256(block.data(), block.size(), prev.data());
        out.insert(out.end(), prev.begin(), prev.end());
    }
    out.resize(len_in_bytes);
    return out;
}

std::array<Fp2, 2> hash_to_field_fp2(std::span<const std::uint8_t> msg, std::string_view dst) {
    const auto uniform = expand_message_xmd(msg, dst, 2 * 2 * kFieldElementBytes);
    std::array<Fp2, 2> u;
    const std::span<const std::uint8_t> all(uniform);
    for (std::size_t i = 0; i < 2; ++i) {
        const auto e0 = all.subspan((2 * i) * kFieldElementBytes, kFieldElementBytes);
        const auto e1 = all.subspan((2 * i + 1) * kFieldElementBytes, kFieldElementBytes);
        u[i] = {Fp::from_bytes_reduce(e0), Fp::from_bytes_reduce(e1)};
    }
    return u;
}

G2Affine map_to_curve_g2(const Fp2& u) {
    const auto& k = iso();

    // Simplified SWU on E': y^2 = x^3 + A x + B.
    const Fp2 zu2 = k.z * u.square();
    const Fp2 denom = zu2.square() + zu2;
    Fp2 x1;
    if (denom.is_zero()) {
        x1 = k.b * (k.z * k.a).inverse();
    } else {
        x1 = (-k.b * k.a.inverse()) * (Fp2::one() + denom.inverse());
    }
    Fp2 x = x1;
    Fp2 gx = curve_rhs(x1, k);
    if (!gx.is_square()) {
        x = zu2 * x1;
        gx = curve_rhs(x, k);
    }
    const auto root = gx.sqrt();
    if (!root) throw std::logic_error("sswu: neither candidate is square");
    Fp2 y = *root;
    if (u.sgn0() != y.sgn0()) y = -y;

    // 3-isogeny E' -> E.
    const Fp2 xd = horner(k.x_den, x);
    const Fp2 yd = horner(k.y_den, x);
    if (xd.is_zero() || yd.is_zero()) return G2Affine::identity();
    return G2Affine{horner(k.x_num, x) * xd.inverse(), y * horner(k.y_num, x) * yd.inverse(),
                    false};
}

G2 clear_cofactor_g2(const G2& p) {
    // h_eff P = [x^2 - x - 1] P + [x - 1] psi(P) + psi^2(2P)
    const G2 t1 = mul_by_x(p);
    G2 t2 = psi(p);
    G2 t3 = psi(psi(p.dbl()));
    t3 = t3 + -t2;
    t2 = mul_by_x(t1 + t2);
    t3 = t3 + t2;
    t3 = t3 + -t1;
    return t3 + -p;
}

G2 clear_cofactor_g2_reference(const G2& p) { return p.mul(kG2CofactorScalar); }

G2Affine hash_to_g2(std::span<const std::uint8_t> msg, std::string_view dst) {
    const auto u = hash_to_field_fp2(msg, dst);
    const G2 q0 = G2::from_affine(map_to_curve_g2(u[0]));
    const G2 q1 = G2::from_affine(map_to_curve_g2(u[1]));
    return clear_cofactor_g2(q0 + q1).to_affine();
}

}  // namespace posrelay::bls::detail
