#include "posrelay/bls/bls.hpp"

#include <openssl/evp.h>
#include <openssl/hmac.h>
#include <openssl/sha.h>

#include <vector>

#include "posrelay/bls/hash_to_curve.hpp"
#include "posrelay/bls/pairing.hpp"
#include "posrelay/ssz/merkle.hpp"

namespace posrelay::bls {

using detail::Fr;
using detail::G1;
using detail::G1Affine;
using detail::G2;
using detail::G2Affine;

namespace {

using Mac = std::array<std::uint8_t, SHA256_DIGEST_LENGTH>;

Mac hmac_sha256(std::span<const std::uint8_t> key, std::span<const std::uint8_t> data) {
    Mac out{};
    unsigned int len = 0;
    HMAC(EVP_sha256(), key.data(), static_cast<int>(key.size()), data.data(), data.size(),
         out.data(), &len);
    return out;
}

std::vector<std::uint8_t> hkdf_expand(const Mac& prk, std::span<const std::uint8_t> info,
                                      std::size_t length) {
    std::vector<std::uint8_t> okm;
    std::vector<std::uint8_t> block;
    Mac t{};
    for (std::uint8_t i = 1; okm.size() < length; ++i) {
        block.clear();
        if (i > 1) block.insert(block.end(), t.begin(), t.end());
        block.insert(block.end(), info.begin(), info.end());
        block.push_back(i);
        t = hmac_sha256(prk, block);
        okm.insert(okm.end(), t.begin(), t.end());
    }
    okm.resize(length);
    return okm;
}

detail::Scalar reduce_mod_r(std::span<const std::uint8_t> bytes) {
    const Fr radix = Fr::from_u64(256);
    Fr acc = Fr::zero();
    for (std::uint8_t b : bytes) acc = acc * radix + Fr::from_u64(b);
    return acc.to_canonical();
}

bool scalar_in_range(const detail::Scalar& s) {
    return !detail::limbs::is_zero(s) && !detail::limbs::geq(s, Fr::kModulus);
}

}  // namespace

struct detail::TrustedPoints {
    static PublicKey key(const G1Affine& p) { return PublicKey(p, nullptr); }
    static Signature signature(const G2Affine& p) { return Signature(p, nullptr); }
};

using detail::TrustedPoints;

const char* to_string(BlsErrorCode code) {
    switch (code) {
        case BlsErrorCode::EmptyInput: return "EmptyInput";
        case BlsErrorCode::InvalidKey: return "InvalidKey";
        case BlsErrorCode::MalformedSignature: return "MalformedSignature";
        case BlsErrorCode::InvalidSecretKey: return "InvalidSecretKey";
    }
    return "Unknown";
}

BlsError::BlsError(BlsErrorCode code, const std::string& detail)
    : std::runtime_error(std::string(to_string(code)) + ": " + detail), code_(code) {}

// ---- SecretKey -------------------------------------------------------------

SecretKey::SecretKey(const detail::Scalar& scalar) : scalar_(scalar) {
    if (!scalar_in_range(scalar)) {
        throw BlsError(BlsErrorCode::InvalidSecretKey, "scalar outside (0, r)");
    }
}

std::array<std::uint8_t, 32> SecretKey::to_bytes() const {
    std::array<std::uint8_t, 32> out{};
    for (std::size_t i = 0; i < 32; ++i) {
        const std::size_t bit = (31 - i) * 8;
        out[i] = static_cast<std::uint8_t>(scalar_[bit / 64] >> (bit % 64));
    }
    return out;
}

// ---- PublicKey -------------------------------------------------------------

PublicKey::PublicKey(const Encoding& bytes) : bytes_(bytes) {
    auto p = detail::decompress_g1(bytes_);
    if (p && !p->infinity && detail::in_subgroup(G1::from_affine(*p))) point_ = *p;
}

PublicKey PublicKey::from_hex(std::string_view hex) {
    return PublicKey(from_hex_fixed<kSize>(hex));
}

PublicKey PublicKey::from_point(const G1Affine& point) {
    return PublicKey(detail::compress(point));
}

PublicKey::PublicKey(const G1Affine& point, std::nullptr_t)
    : bytes_(detail::compress(point)) {
    if (!point.infinity) point_ = point;
}

const G1Affine& PublicKey::point() const {
    if (!point_) throw BlsError(BlsErrorCode::InvalidKey, "public key " + to_hex());
    return *point_;
}

// ---- Signature -------------------------------------------------------------

Signature::Signature(const Encoding& bytes) : bytes_(bytes) {
    auto p = detail::decompress_g2(bytes_);
    if (p && detail::in_subgroup(G2::from_affine(*p))) point_ = *p;
}

Signature Signature::from_hex(std::string_view hex) {
    return Signature(from_hex_fixed<kSize>(hex));
}

Signature Signature::from_point(const G2Affine& point) {
    return Signature(detail::compress(point));
}

Signature::Signature(const G2Affine& point, std::nullptr_t)
    : bytes_(detail::compress(point)), point_(point) {}

const G2Affine& Signature::point() const {
    if (!point_) throw BlsError(BlsErrorCode::MalformedSignature, "signature " + to_hex());
    return *point_;
}

// ---- operations ------------------------------------------------------------

KeyPair keygen(const Seed& seed) {
    static constexpr std::string_view kSalt = "BLS-SIG-KEYGEN-SALT-";
    constexpr std::size_t kOkmLength = 48;  // ceil(3 * ceil(log2(r)) / 16)

    std::vector<std::uint8_t> ikm(seed.begin(), seed.end());
    ikm.push_back(0);
    const std::array<std::uint8_t, 2> info{0, kOkmLength};

    Mac salt{};
    SHA256(reinterpret_cast<const std::uint8_t*>(kSalt.data()), kSalt.size(), salt.data());
    for (;;) {
        const Mac prk = hmac_sha256(salt, ikm);
        const auto okm = hkdf_expand(prk, info, kOkmLength);
        const detail::Scalar sk = reduce_mod_r(okm);
        if (!detail::limbs::is_zero(sk)) {
            SecretKey secret(sk);
            return {secret, derive_public_key(secret)};
        }
        Mac next{};
        SHA256(salt.data(), salt.size(), next.data());
        salt = next;
    }
}

PublicKey derive_public_key(const SecretKey& sk) {
    const G1 p = G1::from_affine(detail::g1_generator()).mul(sk.scalar());
    return TrustedPoints::key(p.to_affine());
}

Digest signing_root(const Digest& message, const Domain& domain) {
    return ssz::hash_node(message, domain);
}

Signature sign(const SecretKey& sk, const Digest& message, const Domain& domain) {
    const Digest root = signing_root(message, domain);
    const G2Affine h = detail::hash_to_g2(root.bytes, kSignatureDst);
    return TrustedPoints::signature(G2::from_affine(h).mul(sk.scalar()).to_affine());
}

Signature sign_aggregate(std::span<const SecretKey> sks, const Digest& message,
                         const Domain& domain) {
    if (sks.empty()) throw BlsError(BlsErrorCode::EmptyInput, "no secret keys");
    Fr sum = Fr::zero();
    for (const auto& sk : sks) sum += Fr::from_canonical(sk.scalar());
    const Digest root = signing_root(message, domain);
    const G2Affine h = detail::hash_to_g2(root.bytes, kSignatureDst);
    return TrustedPoints::signature(G2::from_affine(h).mul(sum.to_canonical()).to_affine());
}

bool verify(const PublicKey& pk, const Digest& message, const Domain& domain,
            const Signature& sig) {
    return fast_aggregate_verify(std::span<const PublicKey>(&pk, 1), message, domain, sig);
}

Signature aggregate_signatures(std::span<const Signature> sigs) {
    if (sigs.empty()) throw BlsError(BlsErrorCode::EmptyInput, "no signatures to aggregate");
    G2 acc = G2::identity();
    for (const auto& s : sigs) acc += G2::from_affine(s.point());
    return TrustedPoints::signature(acc.to_affine());
}

PublicKey aggregate_pubkeys(std::span<const PublicKey> pks) {
    if (pks.empty()) throw BlsError(BlsErrorCode::EmptyInput, "no public keys to aggregate");
    G1 acc = G1::identity();
    for (const auto& pk : pks) acc += G1::from_affine(pk.point());
    if (acc.is_identity()) {
        throw BlsError(BlsErrorCode::InvalidKey, "aggregate public key is the identity");
    }
    return TrustedPoints::key(acc.to_affine());
}

bool fast_aggregate_verify(std::span<const PublicKey> pks, const Digest& message,
                           const Domain& domain, const Signature& sig, VerifyStats* stats) {
    if (pks.empty()) throw BlsError(BlsErrorCode::EmptyInput, "no public keys");
    G1 acc = G1::identity();
    for (const auto& pk : pks) acc += G1::from_affine(pk.point());
    const G2Affine& sig_point = sig.point();
    if (stats != nullptr) {
        stats->point_additions += pks.size() - 1;
        stats->pairing_checks += 1;
    }
    if (acc.is_identity()) return false;

    // e(pk, H(m)) * e(-g1, sig) == 1
    const Digest root = signing_root(message, domain);
    const G2Affine h = detail::hash_to_g2(root.bytes, kSignatureDst);
    G1Affine neg_g1 = detail::g1_generator();
    neg_g1.y = -neg_g1.y;
    const std::pair<G1Affine, G2Affine> pairs[] = {
        {acc.to_affine(), h},
        {neg_g1, sig_point},
    };
    return detail::pairing_product_is_one(pairs);
}

}  // namespace posrelay::bls
