#pragma once

#include <array>
#include <cstdint>
#include <random>
#include <string_view>

#include "posrelay/relay/relay.hpp"
#include "posrelay/sim/chain.hpp"

namespace posrelay::sim {

using relay::RelayUpdate;

/// Finalized/latest slots realizing one of the three period patterns relative
/// to the relay's anchor period p:
///   case 1: both in p;  case 2: finalized in p, latest in p + 1;
///   case 3: both in p + 1, finalized at the first slot of p + 1.
struct CasePlan {
    int case_id = 1;
    std::uint64_t anchor_slot = 0;
    std::uint64_t finalized_slot = 0;
    std::uint64_t latest_slot = 0;
};

/// Throws SimError(CaseUnrealizable) when the chain or the period layout
/// cannot host the case after `anchor_slot`.
CasePlan plan_case(const SimChain& chain, int case_id, std::uint64_t anchor_slot);

struct CraftOptions {
    /// Attach the signing committee's keys (needed by NO-STORE relays).
    bool resubmit_committee = true;
};

/// Update for an arbitrary (finalized checkpoint, latest) pair; the checkpoint
/// must be the one `latest_slot` finalizes.
RelayUpdate craft_update_for(const SimChain& chain, std::uint64_t anchor_slot,
                             std::uint64_t finalized_slot, std::uint64_t latest_slot,
                             std::uint64_t participation, const CraftOptions& options = {});

/// The first `participation` committee members sign.
RelayUpdate craft_update(const SimChain& chain, int case_id, std::uint64_t anchor_slot,
                         std::uint64_t participation, const CraftOptions& options = {});

enum class TamperKind {
    FlipSignatureByte,
    SwapSigner,
    UnderParticipate,
    BadFinalityBranch,
    BadNextCommittee,
    WrongCommitteeKeys,
    SkipPeriod,
};

inline constexpr std::array<TamperKind, 7> kAllTamperKinds = {
    TamperKind::FlipSignatureByte,  TamperKind::SwapSigner,        TamperKind::UnderParticipate,
    TamperKind::BadFinalityBranch,  TamperKind::BadNextCommittee,  TamperKind::WrongCommitteeKeys,
    TamperKind::SkipPeriod,
};

const char* to_string(TamperKind kind);
/// Accepts the upper-case names (FLIP_SIGNATURE_BYTE, ...). Throws std::invalid_argument.
TamperKind tamper_kind_from_string(std::string_view name);

/// The one relay error each kind must provoke.
relay::ErrorCode expected_error(TamperKind kind);

/// Kind plus two kind-specific parameters, reduced modulo the valid range:
///   FlipSignatureByte: a = byte index, b = bit index
///   SwapSigner: a = which participant is replaced, b = which non-signer replaces it
///   UnderParticipate: a = participants kept (clamped below the threshold), b = shuffle seed
///   BadFinalityBranch: a = node index, b = byte index
///   BadNextCommittee / WrongCommitteeKeys: a = key index, b = replacement key seed
///   SkipPeriod: a = extra periods beyond one (latest lands >= 2 periods ahead)
struct Tampering {
    TamperKind kind = TamperKind::FlipSignatureByte;
    std::uint64_t a = 0;
    std::uint64_t b = 0;
};

/// Returns a mutated copy. `anchor_slot` is the relay's current slot (needed
/// for re-signing). Throws SimError(NotApplicable) when the kind does not fit
/// the update (e.g. BadNextCommittee without a v_next).
RelayUpdate tamper(const RelayUpdate& update, const Tampering& t, const SimChain& chain,
                   std::uint64_t anchor_slot);

Tampering random_tampering(TamperKind kind, std::mt19937_64& rng);

}  // namespace posrelay::sim
