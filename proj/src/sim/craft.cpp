#include "posrelay/sim/craft.hpp"

#include <algorithm>
#include <string>

#include "posrelay/ssz/merkle.hpp"

namespace posrelay::sim {

namespace {

constexpr std::uint64_t kFreshKeyTag = 0x66726573684b6579ULL;

[[noreturn]] void unrealizable(const std::string& detail) {
    throw SimError(SimErrorCode::CaseUnrealizable, detail);
}

[[noreturn]] void not_applicable(TamperKind kind, const std::string& detail) {
    throw SimError(SimErrorCode::NotApplicable, std::string(to_string(kind)) + ": " + detail);
}

bls::Signature aggregate_for(const SimChain& chain, const PeriodCommittee& pc,
                             const std::vector<std::uint64_t>& validator_indices,
                             const Digest& message) {
    if (validator_indices.empty()) {
        return bls::Signature::from_point(bls::detail::G2Affine::identity());
    }
    std::vector<bls::SecretKey> sks;
    sks.reserve(validator_indices.size());
    for (std::uint64_t v : validator_indices) sks.push_back(chain.validators.at(v).keys.secret);
    (void)pc;
    return bls::sign_aggregate(sks, message, chain.config.domain);
}

bls::PublicKey fresh_key(std::uint64_t seed, std::uint64_t index) {
    const Digest s = ssz::hash_node(uint64_chunk(seed ^ kFreshKeyTag), uint64_chunk(index));
    return bls::keygen(s.bytes).public_key;
}

std::vector<std::uint64_t> set_positions(const std::vector<bool>& bits) {
    std::vector<std::uint64_t> out;
    for (std::size_t i = 0; i < bits.size(); ++i) {
        if (bits[i]) out.push_back(i);
    }
    return out;
}

void require_secrets(const SimChain& chain) {
    if (chain.validators.size() != chain.validator_count) {
        throw SimError(SimErrorCode::NotApplicable, "chain was loaded without validator secrets");
    }
}

}  // namespace

CasePlan plan_case(const SimChain& chain, int case_id, std::uint64_t anchor_slot) {
    const std::uint64_t spe = chain.config.slots_per_epoch;
    const std::uint64_t spp = chain.config.slots_per_period();
    const std::uint64_t lag = kFinalityLagEpochs * spe;
    const std::uint64_t p = anchor_slot / spp;
    const std::uint64_t next_checkpoint = (anchor_slot / spe + 1) * spe;

    CasePlan plan;
    plan.case_id = case_id;
    plan.anchor_slot = anchor_slot;
    std::uint64_t want_fin_period = p;
    std::uint64_t want_latest_period = p;
    switch (case_id) {
        case 1:
            plan.finalized_slot = next_checkpoint;
            break;
        case 2:
            plan.finalized_slot = std::max(next_checkpoint, (p + 1) * spp - std::min(lag, spp));
            want_latest_period = p + 1;
            break;
        case 3:
            plan.finalized_slot = (p + 1) * spp;
            want_fin_period = want_latest_period = p + 1;
            break;
        default:
            unrealizable("case id must be 1, 2 or 3");
    }
    plan.latest_slot = plan.finalized_slot + lag;
    const std::string what = "case " + std::to_string(case_id) + " after slot " +
                             std::to_string(anchor_slot);
    if (plan.finalized_slot / spp != want_fin_period || plan.latest_slot / spp != want_latest_period) {
        unrealizable(what + ": period layout leaves no room");
    }
    if (plan.latest_slot >= chain.slot_count()) unrealizable(what + ": chain too short");
    return plan;
}

RelayUpdate craft_update_for(const SimChain& chain, std::uint64_t anchor_slot,
                             std::uint64_t finalized_slot, std::uint64_t latest_slot,
                             std::uint64_t participation, const CraftOptions& options) {
    require_secrets(chain);
    const RelayConfig& cfg = chain.config;
    const SlotEntry& latest = chain.at(latest_slot);
    const SlotEntry& fin = chain.at(finalized_slot);
    if (latest.state.finalized_slot != finalized_slot || latest.state.finalized_root != fin.header_root) {
        unrealizable("slot " + std::to_string(latest_slot) + " does not finalize slot " +
                     std::to_string(finalized_slot));
    }
    if (participation > cfg.committee_size) {
        throw std::invalid_argument("participation exceeds committee size");
    }
    const std::uint64_t spp = cfg.slots_per_period();
    const PeriodCommittee& signers = chain.committee_for_period(latest_slot / spp);

    RelayUpdate u;
    u.finalized_header = fin.header;
    u.finalized_state = fin.state;
    u.latest_header = latest.header;
    u.finality_branch = latest.state.branch(cfg.finalized_root_gindex);
    u.participation_bits.assign(cfg.committee_size, false);
    std::vector<std::uint64_t> signing;
    for (std::uint64_t i = 0; i < participation; ++i) {
        u.participation_bits[i] = true;
        signing.push_back(signers.members[i]);
    }
    u.aggregate_signature = aggregate_for(chain, signers, signing, latest.header_root);
    if (finalized_slot / spp > anchor_slot / spp) {
        u.next_committee = chain.committee_for_period(finalized_slot / spp + 1).committee;
        u.next_committee_branch = fin.state.branch(cfg.next_committee_gindex);
    }
    if (options.resubmit_committee) u.resubmitted_committee = signers.committee;
    return u;
}

RelayUpdate craft_update(const SimChain& chain, int case_id, std::uint64_t anchor_slot,
                         std::uint64_t participation, const CraftOptions& options) {
    const CasePlan plan = plan_case(chain, case_id, anchor_slot);
    return craft_update_for(chain, anchor_slot, plan.finalized_slot, plan.latest_slot,
                            participation, options);
}

const char* to_string(TamperKind kind) {
    switch (kind) {
        case TamperKind::FlipSignatureByte: return "FLIP_SIGNATURE_BYTE";
        case TamperKind::SwapSigner: return "SWAP_SIGNER";
        case TamperKind::UnderParticipate: return "UNDER_PARTICIPATE";
        case TamperKind::BadFinalityBranch: return "BAD_FINALITY_BRANCH";
        case TamperKind::BadNextCommittee: return "BAD_NEXT_COMMITTEE";
        case TamperKind::WrongCommitteeKeys: return "WRONG_COMMITTEE_KEYS";
        case TamperKind::SkipPeriod: return "SKIP_PERIOD";
    }
    return "UNKNOWN";
}

TamperKind tamper_kind_from_string(std::string_view name) {
    for (TamperKind k : kAllTamperKinds) {
        if (name == to_string(k)) return k;
    }
    throw std::invalid_argument("unknown tampering kind '" + std::string(name) + "'");
}

relay::ErrorCode expected_error(TamperKind kind) {
    using relay::ErrorCode;
    switch (kind) {
        case TamperKind::FlipSignatureByte: return ErrorCode::SignatureInvalid;
        case TamperKind::SwapSigner: return ErrorCode::SignatureInvalid;
        case TamperKind::UnderParticipate: return ErrorCode::InsufficientParticipation;
        case TamperKind::BadFinalityBranch: return ErrorCode::FinalityProofInvalid;
        case TamperKind::BadNextCommittee: return ErrorCode::CommitteeProofInvalid;
        case TamperKind::WrongCommitteeKeys: return ErrorCode::CommitteeMismatch;
        case TamperKind::SkipPeriod: return ErrorCode::PeriodGap;
    }
    return ErrorCode::SignatureInvalid;
}

RelayUpdate tamper(const RelayUpdate& update, const Tampering& t, const SimChain& chain,
                   std::uint64_t anchor_slot) {
    RelayUpdate out = update;
    const std::uint64_t spp = chain.config.slots_per_period();
    switch (t.kind) {
        case TamperKind::FlipSignatureByte: {
            auto bytes = out.aggregate_signature.bytes();
            bytes[t.a % bytes.size()] ^= static_cast<std::uint8_t>(1U << (t.b % 8));
            out.aggregate_signature = bls::Signature(bytes);
            break;
        }
        case TamperKind::SwapSigner: {
            require_secrets(chain);
            const PeriodCommittee& pc = chain.committee_for_period(out.latest_header.slot / spp);
            const auto positions = set_positions(out.participation_bits);
            if (positions.empty()) not_applicable(t.kind, "no participants");
            const std::uint64_t victim = positions[t.a % positions.size()];

            std::vector<std::uint64_t> signing;
            std::vector<bool> in_committee(chain.validator_count, false);
            for (std::uint64_t v : pc.members) in_committee[v] = true;
            std::vector<std::uint64_t> candidates;
            for (std::size_t i = 0; i < pc.members.size(); ++i) {
                if (out.participation_bits[i]) {
                    if (i != victim) signing.push_back(pc.members[i]);
                } else {
                    candidates.push_back(pc.members[i]);
                }
            }
            for (std::uint64_t v = 0; v < chain.validator_count; ++v) {
                if (!in_committee[v]) candidates.push_back(v);
            }
            if (candidates.empty()) not_applicable(t.kind, "every validator already signs");
            signing.push_back(candidates[t.b % candidates.size()]);
            out.aggregate_signature =
                aggregate_for(chain, pc, signing, out.latest_header.hash_tree_root());
            break;
        }
        case TamperKind::UnderParticipate: {
            const std::uint64_t n = chain.config.committee_size;
            const std::uint64_t threshold = (2 * n + 2) / 3;
            auto positions = set_positions(out.participation_bits);
            const std::uint64_t keep = std::min<std::uint64_t>(t.a % threshold, positions.size());
            std::mt19937_64 rng(t.b);
            for (std::uint64_t i = 0; i < keep; ++i) {
                std::swap(positions[i], positions[i + uniform_below(rng, positions.size() - i)]);
            }
            std::fill(out.participation_bits.begin(), out.participation_bits.end(), false);
            for (std::uint64_t i = 0; i < keep; ++i) out.participation_bits[positions[i]] = true;
            break;
        }
        case TamperKind::BadFinalityBranch: {
            auto& nodes = out.finality_branch.nodes;
            if (nodes.empty()) not_applicable(t.kind, "empty finality branch");
            nodes[t.a % nodes.size()].bytes[(t.b / 8) % Digest::kSize] ^=
                static_cast<std::uint8_t>(1U << (t.b % 8));
            break;
        }
        case TamperKind::BadNextCommittee: {
            if (!out.next_committee || out.next_committee->pubkeys.empty()) {
                not_applicable(t.kind, "update carries no next committee");
            }
            auto& keys = out.next_committee->pubkeys;
            const std::uint64_t i = t.a % keys.size();
            keys[i] = fresh_key(t.b, i);
            break;
        }
        case TamperKind::WrongCommitteeKeys: {
            if (!out.resubmitted_committee) {
                out.resubmitted_committee =
                    chain.committee_for_period(out.latest_header.slot / spp).committee;
            }
            auto& keys = out.resubmitted_committee->pubkeys;
            if (keys.empty()) not_applicable(t.kind, "empty committee");
            const std::uint64_t i = t.a % keys.size();
            keys[i] = fresh_key(t.b, i);
            break;
        }
        case TamperKind::SkipPeriod: {
            const std::uint64_t latest = out.latest_header.slot;
            const std::uint64_t room = (chain.slot_count() - 1 - latest) / spp;
            if (chain.slot_count() <= latest || room < 2) {
                not_applicable(t.kind, "chain has no slot two periods past the update");
            }
            const std::uint64_t shift = (2 + t.a % (room - 1)) * spp;
            CraftOptions opts;
            opts.resubmit_committee = out.resubmitted_committee.has_value();
            out = craft_update_for(chain, anchor_slot, out.finalized_header.slot + shift,
                                   latest + shift,
                                   relay::participation_count(out.participation_bits), opts);
            break;
        }
    }
    return out;
}

Tampering random_tampering(TamperKind kind, std::mt19937_64& rng) {
    Tampering t;
    t.kind = kind;
    t.a = rng();
    t.b = rng();
    return t;
}

}  // namespace posrelay::sim
