#pragma once

// The relay state machine. apply_update is a pure transition: it returns the
// successor state or throws RelayError naming the first failing check, and
// never touches its input.

#include <cstdint>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "posrelay/relay/cost.hpp"
#include "posrelay/relay/types.hpp"

namespace posrelay::relay {

enum class ErrorCode {
    NonMonotonic,
    Expired,
    PeriodGap,
    InsufficientParticipation,
    SignatureInvalid,
    FinalityProofInvalid,
    CommitteeProofInvalid,
    CommitteeMismatch,
    MissingNextCommittee,
    StateRootMismatch,
};

const char* to_string(ErrorCode code);

class RelayError : public std::runtime_error {
public:
    RelayError(ErrorCode code, const std::string& detail);
    ErrorCode code() const noexcept { return code_; }

private:
    ErrorCode code_;
};

enum class CommitteeRole { Trusted, TrustedNext };

const char* to_string(CommitteeRole role);

std::uint64_t compute_period(std::uint64_t slot, const RelayConfig& config);

/// Checks the snapshot state against header.state_root and both committee
/// roots against the state, then anchors a relay at the header.
RelayState initialize(const Snapshot& snapshot, StorageMode mode, const RelayConfig& config);

std::uint64_t participation_count(const std::vector<bool>& bits);

/// 3 * count >= 2 * committee_size.
bool meets_threshold(std::uint64_t count, const RelayConfig& config);

/// TRUSTED for the current period, TRUSTED_NEXT for the one after; throws
/// PeriodGap beyond that.
CommitteeRole select_signing_committee(const RelayState& state, std::uint64_t latest_slot);

/// Throws std::invalid_argument when the participation vector length differs
/// from the configured committee size (a malformed update, not a relay
/// rejection). `meter` is reset and then filled for this call.
RelayState apply_update(const RelayState& state, const RelayUpdate& update, CostMeter& meter);

/// True iff `branch` proves `finalized_root` at the configured gindex under
/// latest.state_root. Throws ssz::MerkleError(MalformedBranch) on a bad shape.
bool verify_finality_link(const BeaconBlockHeader& latest, const Digest& finalized_root,
                          const MerkleBranch& branch, const RelayConfig& config);

}  // namespace posrelay::relay
