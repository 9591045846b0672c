#include "posrelay/bls/pairing.hpp"

#include <stdexcept>
#include <vector>

namespace posrelay::bls::detail {

namespace {

// (x - 1)^2 / 3
constexpr auto kHardLambda = limbs::from_hex<2>("396c8c005555e1568c00aaab0000aaab");

// Sparse line a + b w^2 + c w^3.
struct Line {
    Fp2 a;
    Fp2 b;
    Fp2 c;
};

Fp12 mul_by_line(const Fp12& f, const Line& l) {
    // l = l0 + l1 w with l0 = a + b v, l1 = c v.
    const auto mul_by_01 = [](const Fp6& x, const Fp2& a, const Fp2& b) {
        return Fp6{x.c0 * a + (x.c2 * b).mul_by_nonresidue(), x.c0 * b + x.c1 * a,
                   x.c1 * b + x.c2 * a};
    };
    const auto mul_by_1 = [](const Fp6& x, const Fp2& c) {
        return Fp6{(x.c2 * c).mul_by_nonresidue(), x.c0 * c, x.c1 * c};
    };
    const Fp6 t0 = mul_by_01(f.c0, l.a, l.b);
    const Fp6 t1 = mul_by_1(f.c1, l.c);
    const Fp6 s = mul_by_01(f.c0 + f.c1, l.a, l.b + l.c);
    return {t0 + t1.mul_by_v(), s - t0 - t1};
}

// Tangent at T (Jacobian, twist coordinates) evaluated at P, scaled by
// 2 Y Z^3 and by w^3; the Fp2 factor vanishes in the final exponentiation.
Line doubling_line(const G2& t, const G1Affine& p) {
    const Fp2 x2 = t.x.square();
    const Fp2 z2 = t.z.square();
    const Fp2 three_x2 = x2 + x2.dbl();
    return {three_x2 * t.x - t.y.square().dbl(), -(three_x2 * z2 * p.x),
            (t.y * z2 * t.z).dbl() * p.y};
}

// Chord through T and affine Q evaluated at P, scaled by (xQ Z^2 - X) Z.
Line addition_line(const G2& t, const G2Affine& q, const G1Affine& p) {
    const Fp2 z2 = t.z.square();
    const Fp2 n = q.y * z2 * t.z - t.y;
    const Fp2 d = (q.x * z2 - t.x) * t.z;
    if (d.is_zero()) throw std::logic_error("miller loop hit a degenerate addition");
    return {n * q.x - q.y * d, -(n * p.x), d * p.y};
}

Fp12 multi_miller_loop(std::span<const std::pair<G1Affine, G2Affine>> pairs) {
    std::vector<std::pair<G1Affine, G2Affine>> active;
    for (const auto& pq : pairs) {
        if (!pq.first.infinity && !pq.second.infinity) active.push_back(pq);
    }
    std::vector<G2> ts;
    for (const auto& [p, q] : active) ts.push_back(G2::from_affine(q));

    Fp12 f = Fp12::one();
    for (int bit = 62; bit >= 0; --bit) {
        f = f.square();
        for (std::size_t i = 0; i < active.size(); ++i) {
            f = mul_by_line(f, doubling_line(ts[i], active[i].first));
            ts[i] = ts[i].dbl();
        }
        if (((kBlsX >> bit) & 1U) != 0) {
            for (std::size_t i = 0; i < active.size(); ++i) {
                const auto& [p, q] = active[i];
                f = mul_by_line(f, addition_line(ts[i], q, p));
                ts[i] = ts[i] + G2::from_affine(q);
            }
        }
    }
    // x < 0
    return f.conjugate();
}

// f^|x| then conjugated, i.e. f^x for f in the cyclotomic subgroup.
Fp12 pow_x(const Fp12& f) {
    return f.pow(Limbs<1>{kBlsX}).conjugate();
}

}  // namespace

Fp12 miller_loop(const G1Affine& p, const G2Affine& q) {
    const std::pair<G1Affine, G2Affine> one[] = {{p, q}};
    return multi_miller_loop(one);
}

Fp12 final_exponentiation(const Fp12& f) {
    // Easy part: f^((p^6 - 1)(p^2 + 1)).
    Fp12 r = f.conjugate() * f.inverse();
    r = r.frobenius().frobenius() * r;

    // Hard part (p^4 - p^2 + 1) / r = lambda (x + p) (x^2 + p^2 - 1) + 1.
    const Fp12 a = r.pow(kHardLambda);
    const Fp12 b = pow_x(a) * a.frobenius();
    const Fp12 c = pow_x(pow_x(b)) * b.frobenius().frobenius() * b.conjugate();
    return c * r;
}

Fp12 pairing(const G1Affine& p, const G2Affine& q) {
    return final_exponentiation(miller_loop(p, q));
}

bool pairing_product_is_one(std::span<const std::pair<G1Affine, G2Affine>> pairs) {
    return final_exponentiation(multi_miller_loop(pairs)).is_one();
}

}  // namespace posrelay::bls::detail
