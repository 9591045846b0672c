#include "posrelay/relay/relay.hpp"

#include <algorithm>

#include "posrelay/ssz/hash_counter.hpp"

namespace posrelay::relay {

namespace {

[[noreturn]] void fail(ErrorCode code, const std::string& detail) {
    throw RelayError(code, detail);
}

const CommitteeMaterial& material_for(const RelayState& s, CommitteeRole role) {
    return role == CommitteeRole::Trusted ? s.trusted : s.trusted_next;
}

CommitteeMaterial make_material(const SyncCommittee& committee, StorageMode mode) {
    CommitteeMaterial m{committee.root(), std::nullopt};
    if (mode == StorageMode::Store) m.keys = committee;
    return m;
}

bool branch_proves(const Digest& leaf, const MerkleBranch& branch, std::uint64_t gindex,
                   const Digest& root) {
    if (branch.gindex != gindex || !branch.well_formed()) return false;
    return ssz::verify_branch(leaf, branch, root);
}

}  // namespace

const char* to_string(ErrorCode code) {
    switch (code) {
        case ErrorCode::NonMonotonic: return "NonMonotonic";
        case ErrorCode::Expired: return "Expired";
        case ErrorCode::PeriodGap: return "PeriodGap";
        case ErrorCode::InsufficientParticipation: return "InsufficientParticipation";
        case ErrorCode::SignatureInvalid: return "SignatureInvalid";
        case ErrorCode::FinalityProofInvalid: return "FinalityProofInvalid";
        case ErrorCode::CommitteeProofInvalid: return "CommitteeProofInvalid";
        case ErrorCode::CommitteeMismatch: return "CommitteeMismatch";
        case ErrorCode::MissingNextCommittee: return "MissingNextCommittee";
        case ErrorCode::StateRootMismatch: return "StateRootMismatch";
    }
    return "Unknown";
}

RelayError::RelayError(ErrorCode code, const std::string& detail)
    : std::runtime_error(std::string(to_string(code)) + ": " + detail), code_(code) {}

const char* to_string(CommitteeRole role) {
    return role == CommitteeRole::Trusted ? "TRUSTED" : "TRUSTED_NEXT";
}

std::uint64_t compute_period(std::uint64_t slot, const RelayConfig& config) {
    return slot / config.slots_per_period();
}

RelayState initialize(const Snapshot& snapshot, StorageMode mode, const RelayConfig& config) {
    config.validate();
    if (snapshot.state.hash_tree_root() != snapshot.header.state_root) {
        fail(ErrorCode::StateRootMismatch, "snapshot state does not hash to header.state_root");
    }
    for (const SyncCommittee* c : {&snapshot.current_committee, &snapshot.next_committee}) {
        if (c->size() != config.committee_size) {
            fail(ErrorCode::CommitteeMismatch, "committee size " + std::to_string(c->size()) +
                                                   " != " + std::to_string(config.committee_size));
        }
    }
    if (snapshot.current_committee.root() != snapshot.state.current_committee_root) {
        fail(ErrorCode::CommitteeMismatch, "current committee keys do not match the state root");
    }
    if (snapshot.next_committee.root() != snapshot.state.next_committee_root) {
        fail(ErrorCode::CommitteeMismatch, "next committee keys do not match the state root");
    }
    RelayState s;
    s.current_header = snapshot.header;
    s.mode = mode;
    s.trusted = make_material(snapshot.current_committee, mode);
    s.trusted_next = make_material(snapshot.next_committee, mode);
    s.config = config;
    return s;
}

std::uint64_t participation_count(const std::vector<bool>& bits) {
    return static_cast<std::uint64_t>(std::count(bits.begin(), bits.end(), true));
}

bool meets_threshold(std::uint64_t count, const RelayConfig& config) {
    return 3 * count >= 2 * config.committee_size;
}

CommitteeRole select_signing_committee(const RelayState& state, std::uint64_t latest_slot) {
    const std::uint64_t current = compute_period(state.current_header.slot, state.config);
    const std::uint64_t latest = compute_period(latest_slot, state.config);
    if (latest < current) {
        fail(ErrorCode::NonMonotonic, "latest period " + std::to_string(latest) +
                                          " precedes current period " + std::to_string(current));
    }
    if (latest == current) return CommitteeRole::Trusted;
    if (latest == current + 1) return CommitteeRole::TrustedNext;
    fail(ErrorCode::PeriodGap, "latest period " + std::to_string(latest) + " is more than one past " +
                                   std::to_string(current));
}

bool verify_finality_link(const BeaconBlockHeader& latest, const Digest& finalized_root,
                          const MerkleBranch& branch, const RelayConfig& config) {
    if (branch.gindex != config.finalized_root_gindex) return false;
    return ssz::verify_branch(finalized_root, branch, latest.state_root);
}

RelayState apply_update(const RelayState& state, const RelayUpdate& update, CostMeter& meter) {
    meter.reset();
    const std::uint64_t hashes_before = ssz::hash_calls();
    const auto settle_hashes = [&] { meter.sha256_calls = ssz::hash_calls() - hashes_before; };

    const RelayConfig& cfg = state.config;
    const BeaconBlockHeader& fin = update.finalized_header;
    const BeaconBlockHeader& latest = update.latest_header;

    if (update.participation_bits.size() != cfg.committee_size) {
        throw std::invalid_argument("participation bits length " +
                                    std::to_string(update.participation_bits.size()) +
                                    " != committee size " + std::to_string(cfg.committee_size));
    }
    meter.payload_bytes = payload_size(update);
    meter.storage_words_read = kAnchorWords;

    try {
        // (1) monotonicity
        if (fin.slot <= state.current_header.slot) {
            fail(ErrorCode::NonMonotonic, "finalized slot " + std::to_string(fin.slot) +
                                              " <= current slot " +
                                              std::to_string(state.current_header.slot));
        }
        if (latest.slot < fin.slot) {
            fail(ErrorCode::NonMonotonic, "latest slot precedes finalized slot");
        }
        if (cfg.trusting_period_slots &&
            latest.slot - state.current_header.slot > *cfg.trusting_period_slots) {
            fail(ErrorCode::Expired, "latest slot outside the trusting period");
        }

        // (2) period admissibility
        const CommitteeRole role = select_signing_committee(state, latest.slot);
        const CommitteeMaterial& signer = material_for(state, role);

        // (3) participation
        const std::uint64_t count = participation_count(update.participation_bits);
        if (!meets_threshold(count, cfg)) {
            fail(ErrorCode::InsufficientParticipation,
                 std::to_string(count) + " of " + std::to_string(cfg.committee_size));
        }

        // (4) committee keys: resubmitted ones must match the stored root
        const SyncCommittee* keys = nullptr;
        if (update.resubmitted_committee) {
            if (update.resubmitted_committee->root() != signer.root) {
                fail(ErrorCode::CommitteeMismatch,
                     std::string("resubmitted keys do not match the ") + to_string(role) + " root");
            }
            keys = &*update.resubmitted_committee;
        } else if (state.mode == StorageMode::NoStore) {
            fail(ErrorCode::CommitteeMismatch, "NO-STORE relay requires resubmitted keys");
        } else {
            keys = &*signer.keys;
        }
        if (state.mode == StorageMode::Store) {
            meter.storage_words_read += committee_storage_words(cfg.committee_size);
        }

        // (5) aggregate signature over the latest header
        std::vector<bls::PublicKey> participants;
        participants.reserve(count);
        for (std::size_t i = 0; i < std::min<std::size_t>(keys->size(), cfg.committee_size); ++i) {
            if (update.participation_bits[i]) participants.push_back(keys->pubkeys[i]);
        }
        bool signature_ok = false;
        try {
            bls::VerifyStats stats;
            signature_ok = bls::fast_aggregate_verify(participants, latest.hash_tree_root(),
                                                      cfg.domain, update.aggregate_signature, &stats);
            meter.pairing_checks = stats.pairing_checks;
            meter.point_additions = stats.point_additions;
        } catch (const bls::BlsError& e) {
            fail(ErrorCode::SignatureInvalid, e.what());
        }
        if (!signature_ok) fail(ErrorCode::SignatureInvalid, "aggregate signature does not verify");

        // (6) finality of the target header
        const Digest fin_root = fin.hash_tree_root();
        if (!branch_proves(fin_root, update.finality_branch, cfg.finalized_root_gindex,
                           latest.state_root)) {
            fail(ErrorCode::FinalityProofInvalid, "finality branch does not prove the finalized header");
        }
        if (update.finalized_state.hash_tree_root() != fin.state_root) {
            fail(ErrorCode::StateRootMismatch, "finalized state does not hash to its header's state_root");
        }

        // (7) committee rotation when the target enters the next period
        RelayState next = state;
        const std::uint64_t p_current = compute_period(state.current_header.slot, cfg);
        if (compute_period(fin.slot, cfg) == p_current + 1) {
            if (!update.next_committee || !update.next_committee_branch) {
                fail(ErrorCode::MissingNextCommittee, "period transition without v_next");
            }
            const SyncCommittee& v_next = *update.next_committee;
            if (v_next.size() != cfg.committee_size ||
                !branch_proves(v_next.root(), *update.next_committee_branch,
                               cfg.next_committee_gindex, fin.state_root)) {
                fail(ErrorCode::CommitteeProofInvalid, "next committee branch does not verify");
            }
            if (update.finalized_state.current_committee_root != state.trusted_next.root) {
                fail(ErrorCode::CommitteeMismatch,
                     "finalized state's current committee is not the stored next committee");
            }
            next.trusted = state.trusted_next;
            next.trusted_next = make_material(v_next, state.mode);
            if (state.mode == StorageMode::Store) {
                meter.storage_words_written += committee_storage_words(cfg.committee_size);
            }
        }

        // (8) commit the finalized header
        next.current_header = fin;
        meter.storage_words_written += kAnchorWords;
        settle_hashes();
        return next;
    } catch (...) {
        meter.storage_words_written = 0;
        settle_hashes();
        throw;
    }
}

}  // namespace posrelay::relay
