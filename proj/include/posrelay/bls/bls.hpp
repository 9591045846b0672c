#pragma once

// BLS signatures over BLS12-381, minimal-pubkey-size variant: 48-byte G1
// public keys, 96-byte G2 signatures, hash-to-curve with the
// proof-of-possession ciphersuite DST used by the beacon chain.
//
// PublicKey and Signature carry their wire encoding and are decoded once on
// construction; an undecodable value is representable (tampered payloads must
// round-trip) but every cryptographic use of it throws.

#include <array>
#include <cstdint>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>

#include "posrelay/bls/curve.hpp"
#include "posrelay/common/bytes.hpp"

namespace posrelay::bls {

inline constexpr std::string_view kSignatureDst = "BLS_SIG_BLS12381G2_XMD:SHA-256_SSWU_RO_POP_";

enum class BlsErrorCode {
    EmptyInput,
    InvalidKey,
    MalformedSignature,
    InvalidSecretKey,
};

const char* to_string(BlsErrorCode code);

class BlsError : public std::runtime_error {
public:
    BlsError(BlsErrorCode code, const std::string& detail);
    BlsErrorCode code() const noexcept { return code_; }

private:
    BlsErrorCode code_;
};

namespace detail {
struct TrustedPoints;
}

using Seed = std::array<std::uint8_t, 32>;
using Domain = Digest;

class SecretKey {
public:
    /// Throws BlsError(InvalidSecretKey) unless 0 < scalar < r.
    explicit SecretKey(const detail::Scalar& scalar);

    const detail::Scalar& scalar() const { return scalar_; }
    /// Big-endian 32-byte encoding.
    std::array<std::uint8_t, 32> to_bytes() const;

    bool operator==(const SecretKey&) const = default;

private:
    detail::Scalar scalar_;
};

class PublicKey {
public:
    static constexpr std::size_t kSize = 48;
    using Encoding = std::array<std::uint8_t, kSize>;

    explicit PublicKey(const Encoding& bytes);
    static PublicKey from_hex(std::string_view hex);
    static PublicKey from_point(const detail::G1Affine& point);

    const Encoding& bytes() const { return bytes_; }
    std::string to_hex() const { return posrelay::to_hex(bytes_); }

    /// Valid encoding of a non-identity point in the prime-order subgroup.
    bool is_valid() const { return point_.has_value(); }
    /// Throws BlsError(InvalidKey) when !is_valid().
    const detail::G1Affine& point() const;

    bool operator==(const PublicKey& o) const { return bytes_ == o.bytes_; }

private:
    // For points the library produced itself (already in the subgroup).
    PublicKey(const detail::G1Affine& point, std::nullptr_t);
    friend struct detail::TrustedPoints;

    Encoding bytes_{};
    std::optional<detail::G1Affine> point_;
};

class Signature {
public:
    static constexpr std::size_t kSize = 96;
    using Encoding = std::array<std::uint8_t, kSize>;

    explicit Signature(const Encoding& bytes);
    static Signature from_hex(std::string_view hex);
    static Signature from_point(const detail::G2Affine& point);

    const Encoding& bytes() const { return bytes_; }
    std::string to_hex() const { return posrelay::to_hex(bytes_); }

    bool is_valid() const { return point_.has_value(); }
    /// Throws BlsError(MalformedSignature) when !is_valid().
    const detail::G2Affine& point() const;

    bool operator==(const Signature& o) const { return bytes_ == o.bytes_; }

private:
    Signature(const detail::G2Affine& point, std::nullptr_t);
    friend struct detail::TrustedPoints;

    Encoding bytes_{};
    std::optional<detail::G2Affine> point_;
};

struct KeyPair {
    SecretKey secret;
    PublicKey public_key;
};

/// IETF KeyGen (HKDF-SHA256, salt "BLS-SIG-KEYGEN-SALT-") over a 32-byte seed.
KeyPair keygen(const Seed& seed);

PublicKey derive_public_key(const SecretKey& sk);

/// The point actually hashed to G2: hash_node(message, domain).
Digest signing_root(const Digest& message, const Domain& domain);

Signature sign(const SecretKey& sk, const Digest& message, const Domain& domain);

bool verify(const PublicKey& pk, const Digest& message, const Domain& domain,
            const Signature& sig);

/// Aggregate signature of several signers on one message, computed as
/// (sum of secrets) * H(m). Equal to aggregating the individual signatures.
Signature sign_aggregate(std::span<const SecretKey> sks, const Digest& message,
                         const Domain& domain);

Signature aggregate_signatures(std::span<const Signature> sigs);
PublicKey aggregate_pubkeys(std::span<const PublicKey> pks);

/// Counters filled in by fast_aggregate_verify.
struct VerifyStats {
    std::uint64_t point_additions = 0;
    std::uint64_t pairing_checks = 0;
};

/// One pairing-product equation against the sum of `pks`. Decoding failures
/// throw (InvalidKey / MalformedSignature) rather than returning false.
bool fast_aggregate_verify(std::span<const PublicKey> pks, const Digest& message,
                           const Domain& domain, const Signature& sig,
                           VerifyStats* stats = nullptr);

}  // namespace posrelay::bls
