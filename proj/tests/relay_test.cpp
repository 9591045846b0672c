#include <gtest/gtest.h>

#include <random>

#include "posrelay/relay/codec.hpp"
#include "posrelay/relay/relay.hpp"
#include "posrelay/sim/craft.hpp"
#include "support/merkle_oracle.hpp"
#include "support/small_chain.hpp"

using namespace posrelay;
using namespace posrelay::relay;
using testing_support::anchored;
using testing_support::small_chain;

namespace {

constexpr StorageMode kModes[] = {StorageMode::Store, StorageMode::NoStore};

ErrorCode rejection(const RelayState& s, const RelayUpdate& u) {
    CostMeter m;
    try {
        apply_update(s, u, m);
    } catch (const RelayError& e) {
        return e.code();
    }
    ADD_FAILURE() << "update was accepted";
    return ErrorCode::NonMonotonic;
}

std::vector<Digest> oracle_key_chunks(const SyncCommittee& c) {
    std::vector<Digest> out;
    for (const auto& pk : c.pubkeys) {
        Digest lo;
        Digest hi;
        for (int i = 0; i < 32; ++i) lo.bytes[i] = pk.bytes()[i];
        for (int i = 0; i < 16; ++i) hi.bytes[i] = pk.bytes()[32 + i];
        out.push_back(lo);
        out.push_back(hi);
    }
    return out;
}

}  // namespace

// ---- containers against the brute-force tree ---------------------------------

TEST(Containers, HeaderRootMatchesOracle) {
    const auto& h = small_chain().at(9).header;
    const oracle::FullTree t({uint64_chunk(h.slot), uint64_chunk(h.proposer_index), h.parent_root,
                              h.state_root, h.body_root},
                             8);
    EXPECT_EQ(h.hash_tree_root(), t.root());
}

TEST(Containers, StateBranchesMatchOracle) {
    const auto& st = small_chain().at(21).state;
    const auto c = st.chunks();
    const oracle::FullTree t(std::vector<Digest>(c.begin(), c.end()), 8);
    EXPECT_EQ(st.hash_tree_root(), t.root());
    for (std::uint64_t g = 8; g < 16; ++g) {
        const auto b = st.branch(g);
        EXPECT_EQ(b.gindex, g);
        EXPECT_EQ(b.nodes, t.siblings(g - 8));
    }
    EXPECT_THROW(st.branch(7), std::invalid_argument);
    EXPECT_THROW(st.branch(16), std::invalid_argument);
}

TEST(Containers, CommitteeRootMatchesOracle) {
    const auto& c = small_chain().committee_for_period(1).committee;
    EXPECT_EQ(c.root(), oracle::FullTree(oracle_key_chunks(c), 16).root());
    SyncCommittee odd{{c.pubkeys.begin(), c.pubkeys.begin() + 3}};
    EXPECT_EQ(odd.root(), oracle::FullTree(oracle_key_chunks(odd), 8).root());
}

TEST(Config, ValidateRejectsBadValues) {
    RelayConfig c;
    EXPECT_NO_THROW(c.validate());
    c.finalized_root_gindex = 7;
    EXPECT_THROW(c.validate(), std::invalid_argument);
    c = RelayConfig{};
    c.committee_size = 0;
    EXPECT_THROW(c.validate(), std::invalid_argument);
    EXPECT_EQ(RelayConfig{}.slots_per_period(), 8192U);
}

// ---- initialization ---------------------------------------------------------

TEST(Initialize, AnchorsBothModes) {
    const auto& chain = small_chain();
    for (StorageMode mode : kModes) {
        const RelayState s = anchored(chain, 5, mode);
        EXPECT_EQ(s.current_header, chain.at(5).header);
        EXPECT_EQ(s.trusted.root, chain.committee_for_period(0).root);
        EXPECT_EQ(s.trusted_next.root, chain.committee_for_period(1).root);
        EXPECT_EQ(s.trusted.keys.has_value(), mode == StorageMode::Store);
        EXPECT_EQ(s.trusted_next.keys.has_value(), mode == StorageMode::Store);
    }
}

TEST(Initialize, RejectsStateNotMatchingHeader) {
    auto snap = sim::snapshot(small_chain(), 5);
    snap.state.history_root.bytes[0] ^= 1;
    try {
        initialize(snap, StorageMode::Store, small_chain().config);
        FAIL();
    } catch (const RelayError& e) {
        EXPECT_EQ(e.code(), ErrorCode::StateRootMismatch);
    }
}

TEST(Initialize, RejectsWrongCommittees) {
    const auto& chain = small_chain();
    auto snap = sim::snapshot(chain, 5);
    std::swap(snap.current_committee, snap.next_committee);
    EXPECT_THROW(initialize(snap, StorageMode::NoStore, chain.config), RelayError);
    snap = sim::snapshot(chain, 5);
    snap.next_committee.pubkeys.pop_back();
    try {
        initialize(snap, StorageMode::Store, chain.config);
        FAIL();
    } catch (const RelayError& e) {
        EXPECT_EQ(e.code(), ErrorCode::CommitteeMismatch);
    }
}

// ---- helpers ----------------------------------------------------------------

TEST(Threshold, TwoThirdsBoundary) {
    RelayConfig c;
    c.committee_size = 512;
    EXPECT_TRUE(meets_threshold(342, c));
    EXPECT_FALSE(meets_threshold(341, c));
    c.committee_size = 8;
    EXPECT_TRUE(meets_threshold(6, c));
    EXPECT_FALSE(meets_threshold(5, c));
    c.committee_size = 3;
    EXPECT_TRUE(meets_threshold(2, c));
    EXPECT_FALSE(meets_threshold(1, c));
}

TEST(Periods, SigningCommitteeSelection) {
    const auto& chain = small_chain();
    const RelayState s = anchored(chain, 20, StorageMode::Store);
    EXPECT_EQ(compute_period(20, chain.config), 1U);
    EXPECT_EQ(select_signing_committee(s, 31), CommitteeRole::Trusted);
    EXPECT_EQ(select_signing_committee(s, 32), CommitteeRole::TrustedNext);
    EXPECT_EQ(select_signing_committee(s, 47), CommitteeRole::TrustedNext);
    EXPECT_THROW(select_signing_committee(s, 48), RelayError);
    EXPECT_THROW(select_signing_committee(s, 15), RelayError);
}

// ---- honest updates -----------------------------------------------------------

TEST(ApplyUpdate, AllThreeCasesInBothModes) {
    const auto& chain = small_chain();
    for (StorageMode mode : kModes) {
        for (int c = 1; c <= 3; ++c) {
            const RelayState s = anchored(chain, 0, mode);
            const auto plan = sim::plan_case(chain, c, 0);
            const RelayUpdate u = sim::craft_update(chain, c, 0, 8);
            CostMeter m;
            const RelayState next = apply_update(s, u, m);
            EXPECT_EQ(next.current_header, chain.at(plan.finalized_slot).header);
            if (c == 3) {
                EXPECT_EQ(next.trusted, s.trusted_next);
                EXPECT_EQ(next.trusted_next.root, chain.committee_for_period(2).root);
                EXPECT_EQ(next.trusted_next.keys.has_value(), mode == StorageMode::Store);
            } else {
                EXPECT_EQ(next.trusted, s.trusted);
                EXPECT_EQ(next.trusted_next, s.trusted_next);
            }
            EXPECT_EQ(m.pairing_checks, 1U);
        }
    }
}

TEST(ApplyUpdate, InputStateUntouchedOnRejection) {
    const auto& chain = small_chain();
    const RelayState s = anchored(chain, 0, StorageMode::Store);
    const std::string before = codec::serialize(s);
    RelayUpdate u = sim::craft_update(chain, 3, 0, 8);
    u.next_committee_branch->nodes[0].bytes[3] ^= 4;
    CostMeter m;
    EXPECT_THROW(apply_update(s, u, m), RelayError);
    EXPECT_EQ(codec::serialize(s), before);
    EXPECT_EQ(m.storage_words_written, 0U);
}

TEST(ApplyUpdate, ChainsAcrossPeriods) {
    const auto& chain = small_chain();
    for (StorageMode mode : kModes) {
        RelayState s = anchored(chain, 0, mode);
        for (int step = 0; step < 3; ++step) {
            const auto slot = s.current_header.slot;
            CostMeter m;
            s = apply_update(s, sim::craft_update(chain, 3, slot, 6), m);
            EXPECT_EQ(s.current_header.slot, 16U * (step + 1));
            EXPECT_EQ(s.trusted.root, chain.committee_for_period(step + 1).root);
        }
    }
}

// ---- rejections -----------------------------------------------------------------

TEST(Rejects, ReplayIsNonMonotonic) {
    const auto& chain = small_chain();
    const RelayState s = anchored(chain, 0, StorageMode::Store);
    const RelayUpdate u = sim::craft_update(chain, 1, 0, 8);
    CostMeter m;
    const RelayState next = apply_update(s, u, m);
    EXPECT_EQ(rejection(next, u), ErrorCode::NonMonotonic);
}

TEST(Rejects, LatestBeforeFinalized) {
    const auto& chain = small_chain();
    const RelayState s = anchored(chain, 0, StorageMode::Store);
    RelayUpdate u = sim::craft_update(chain, 1, 0, 8);
    u.latest_header.slot = u.finalized_header.slot - 1;
    EXPECT_EQ(rejection(s, u), ErrorCode::NonMonotonic);
}

TEST(Rejects, ExpiredOnlyWhenEnabled) {
    const auto& chain = small_chain();
    RelayState s = anchored(chain, 0, StorageMode::Store);
    const RelayUpdate u = sim::craft_update(chain, 1, 0, 8);
    s.config.trusting_period_slots = 11;
    EXPECT_EQ(rejection(s, u), ErrorCode::Expired);
    s.config.trusting_period_slots = 12;
    CostMeter m;
    EXPECT_NO_THROW(apply_update(s, u, m));
}

TEST(Rejects, PeriodGap) {
    const auto& chain = small_chain();
    const RelayState s = anchored(chain, 0, StorageMode::NoStore);
    const RelayUpdate u = sim::craft_update_for(chain, 0, 32, 40, 8);
    EXPECT_EQ(rejection(s, u), ErrorCode::PeriodGap);
}

TEST(Rejects, ParticipationBoundary) {
    const auto& chain = small_chain();
    for (StorageMode mode : kModes) {
        const RelayState s = anchored(chain, 0, mode);
        CostMeter m;
        EXPECT_NO_THROW(apply_update(s, sim::craft_update(chain, 2, 0, 6), m));
        EXPECT_EQ(rejection(s, sim::craft_update(chain, 2, 0, 5)), ErrorCode::InsufficientParticipation);
        EXPECT_EQ(rejection(s, sim::craft_update(chain, 2, 0, 0)), ErrorCode::InsufficientParticipation);
    }
}

TEST(Rejects, BitsLengthIsMalformedInput) {
    const auto& chain = small_chain();
    const RelayState s = anchored(chain, 0, StorageMode::Store);
    RelayUpdate u = sim::craft_update(chain, 1, 0, 8);
    u.participation_bits.push_back(true);
    CostMeter m;
    EXPECT_THROW(apply_update(s, u, m), std::invalid_argument);
}

TEST(Rejects, SignatureOverOtherMessage) {
    const auto& chain = small_chain();
    const RelayState s = anchored(chain, 0, StorageMode::Store);
    RelayUpdate u = sim::craft_update(chain, 1, 0, 8);
    u.aggregate_signature = sim::craft_update(chain, 2, 0, 8).aggregate_signature;
    EXPECT_EQ(rejection(s, u), ErrorCode::SignatureInvalid);
}

TEST(Rejects, BitsNotMatchingSigners) {
    const auto& chain = small_chain();
    const RelayState s = anchored(chain, 0, StorageMode::Store);
    RelayUpdate u = sim::craft_update(chain, 1, 0, 7);
    u.participation_bits[6] = false;
    u.participation_bits[7] = true;
    EXPECT_EQ(rejection(s, u), ErrorCode::SignatureInvalid);
}

TEST(Rejects, NoStoreNeedsResubmittedKeys) {
    const auto& chain = small_chain();
    sim::CraftOptions bare;
    bare.resubmit_committee = false;
    const RelayUpdate u = sim::craft_update(chain, 1, 0, 8, bare);
    EXPECT_EQ(rejection(anchored(chain, 0, StorageMode::NoStore), u), ErrorCode::CommitteeMismatch);
    CostMeter m;
    EXPECT_NO_THROW(apply_update(anchored(chain, 0, StorageMode::Store), u, m));
}

TEST(Rejects, ResubmittedKeysOfWrongCommittee) {
    const auto& chain = small_chain();
    for (StorageMode mode : kModes) {
        RelayUpdate u = sim::craft_update(chain, 2, 0, 8);
        u.resubmitted_committee = chain.committee_for_period(0).committee;
        EXPECT_EQ(rejection(anchored(chain, 0, mode), u), ErrorCode::CommitteeMismatch);
    }
}

TEST(Rejects, FinalityBranchProblems) {
    const auto& chain = small_chain();
    const RelayState s = anchored(chain, 0, StorageMode::Store);
    const RelayUpdate honest = sim::craft_update(chain, 1, 0, 8);

    RelayUpdate u = honest;
    u.finality_branch.nodes[1].bytes[0] ^= 1;
    EXPECT_EQ(rejection(s, u), ErrorCode::FinalityProofInvalid);
    u = honest;
    u.finality_branch.gindex = 10;
    EXPECT_EQ(rejection(s, u), ErrorCode::FinalityProofInvalid);
    u = honest;
    u.finality_branch.nodes.pop_back();
    EXPECT_EQ(rejection(s, u), ErrorCode::FinalityProofInvalid);
    u = honest;
    u.finalized_header = chain.at(u.finalized_header.slot + 1).header;
    EXPECT_EQ(rejection(s, u), ErrorCode::FinalityProofInvalid);
}

TEST(Rejects, FinalizedStateMismatch) {
    const auto& chain = small_chain();
    const RelayState s = anchored(chain, 0, StorageMode::NoStore);
    RelayUpdate u = sim::craft_update(chain, 3, 0, 8);
    u.finalized_state.reserved_a.bytes[9] = 1;
    EXPECT_EQ(rejection(s, u), ErrorCode::StateRootMismatch);
}

TEST(Rejects, TransitionWithoutNextCommittee) {
    const auto& chain = small_chain();
    const RelayState s = anchored(chain, 0, StorageMode::Store);
    RelayUpdate u = sim::craft_update(chain, 3, 0, 8);
    u.next_committee.reset();
    EXPECT_EQ(rejection(s, u), ErrorCode::MissingNextCommittee);
    u = sim::craft_update(chain, 3, 0, 8);
    u.next_committee_branch.reset();
    EXPECT_EQ(rejection(s, u), ErrorCode::MissingNextCommittee);
}

TEST(Rejects, NextCommitteeProofProblems) {
    const auto& chain = small_chain();
    const RelayState s = anchored(chain, 0, StorageMode::Store);
    const RelayUpdate honest = sim::craft_update(chain, 3, 0, 8);

    RelayUpdate u = honest;
    std::swap(u.next_committee->pubkeys[0], u.next_committee->pubkeys[1]);
    EXPECT_EQ(rejection(s, u), ErrorCode::CommitteeProofInvalid);
    u = honest;
    u.next_committee->pubkeys.pop_back();
    EXPECT_EQ(rejection(s, u), ErrorCode::CommitteeProofInvalid);
    u = honest;
    u.next_committee_branch->gindex = 11;
    EXPECT_EQ(rejection(s, u), ErrorCode::CommitteeProofInvalid);
}

// ---- cost accounting --------------------------------------------------------------

TEST(Costs, StorageBoundFromFirstPrinciples) {
    // 512 keys of 48 bytes in 32-byte words, 5000 gas per written word.
    const std::uint64_t words = (512 * 48 + 31) / 32;
    EXPECT_EQ(words, 768U);
    EXPECT_EQ(committee_storage_words(512), words);
    EXPECT_EQ(report_committee_storage_cost(512, CostModel{}), words * 5000);
    EXPECT_EQ(report_committee_storage_cost(RelayConfig{}, CostModel{}), 3'840'000U);
    EXPECT_EQ(committee_storage_words(1), 2U);
    EXPECT_EQ(committee_storage_words(2), 3U);
}

TEST(Costs, MeterPerModeAndCase) {
    const auto& chain = small_chain();
    const std::uint64_t key_words = (8 * 48) / 32;
    for (StorageMode mode : kModes) {
        const bool store = mode == StorageMode::Store;
        for (int c = 1; c <= 3; ++c) {
            const RelayUpdate u = sim::craft_update(chain, c, 0, 8);
            CostMeter m;
            apply_update(anchored(chain, 0, mode), u, m);
            EXPECT_EQ(m.storage_words_read, 7 + (store ? key_words : 0));
            EXPECT_EQ(m.storage_words_written, 7 + (store && c == 3 ? key_words : 0));
            EXPECT_EQ(m.pairing_checks, 1U);
            EXPECT_EQ(m.point_additions, 7U);
            EXPECT_GT(m.sha256_calls, 0U);
            EXPECT_EQ(m.payload_bytes, payload_size(u));
        }
    }
}

TEST(Costs, HashCountsGrowWithResubmittedKeys) {
    const auto& chain = small_chain();
    sim::CraftOptions bare;
    bare.resubmit_committee = false;
    CostMeter with_keys;
    CostMeter without;
    apply_update(anchored(chain, 0, StorageMode::Store), sim::craft_update(chain, 1, 0, 8), with_keys);
    apply_update(anchored(chain, 0, StorageMode::Store), sim::craft_update(chain, 1, 0, 8, bare), without);
    // Root of 16 chunks costs 15 compressions.
    EXPECT_EQ(with_keys.sha256_calls, without.sha256_calls + 15);
}

TEST(Costs, PayloadSizeByHand) {
    const auto& chain = small_chain();
    const RelayUpdate u = sim::craft_update(chain, 3, 0, 8);
    // headers (two u64 + three roots each), state (two u64 + six roots),
    // finality branch (3 nodes + gindex), bits, signature, v_next keys,
    // v_next branch, resubmitted keys
    const std::uint64_t expected = 2 * (2 * 8 + 3 * 32) + (2 * 8 + 6 * 32) + (3 * 32 + 8) + 1 + 96 + 8 * 48 + (3 * 32 + 8) + 8 * 48;
    EXPECT_EQ(payload_size(u), expected);
}

TEST(Costs, RejectionWritesNothing) {
    const auto& chain = small_chain();
    RelayUpdate u = sim::craft_update(chain, 3, 0, 8);
    u.aggregate_signature = sim::craft_update(chain, 1, 0, 8).aggregate_signature;
    CostMeter m;
    EXPECT_THROW(apply_update(anchored(chain, 0, StorageMode::Store), u, m), RelayError);
    EXPECT_EQ(m.storage_words_written, 0U);
    EXPECT_EQ(m.pairing_checks, 1U);
}

TEST(Costs, ModeledGasIsLinear) {
    CostMeter m;
    m.sha256_calls = 10;
    m.pairing_checks = 1;
    m.point_additions = 5;
    m.storage_words_written = 7;
    m.storage_words_read = 19;
    m.payload_bytes = 1000;
    CostModel model;
    model.gas_per_point_addition = 3;
    const auto g = modeled_gas(m, model);
    EXPECT_EQ(g.storage_write, 35000U);
    EXPECT_EQ(g.storage_read, 11400U);
    EXPECT_EQ(g.payload, 16000U);
    EXPECT_EQ(g.hashing, 840U);
    EXPECT_EQ(g.pairing, 102900U);
    EXPECT_EQ(g.point_addition, 15U);
    EXPECT_EQ(g.total(), 35000U + 11400 + 16000 + 840 + 102900 + 15);
    CostMeter sum = m;
    sum += m;
    EXPECT_EQ(sum.payload_bytes, 2000U);
}

// ---- codec ----------------------------------------------------------------------

TEST(Codec, RelayStateRoundTripsInBothModes) {
    const auto& chain = small_chain();
    for (StorageMode mode : kModes) {
        RelayState s = anchored(chain, 3, mode);
        s.config.trusting_period_slots = 99;
        const std::string text = codec::serialize(s);
        const RelayState back = codec::decode<RelayState>(codec::parse(text));
        EXPECT_EQ(back, s);
        EXPECT_EQ(codec::serialize(back), text);
        EXPECT_EQ(text.find("pubkeys") != std::string::npos, mode == StorageMode::Store);
    }
}

TEST(Codec, UpdateRoundTrips) {
    const auto& chain = small_chain();
    for (int c = 1; c <= 3; ++c) {
        const RelayUpdate u = sim::craft_update(chain, c, 0, 7);
        const auto j = codec::to_json(u);
        EXPECT_EQ(j.at("participation_bits").get<std::string>(), "11111110");
        EXPECT_EQ(codec::decode<RelayUpdate>(codec::parse(codec::dump(j))), u);
    }
}

TEST(Codec, RejectsMalformedInput) {
    EXPECT_THROW(codec::parse("{not json"), codec::CodecError);
    EXPECT_THROW(codec::decode<std::vector<bool>>(codec::Json("10x1")), codec::CodecError);
    auto j = codec::to_json(small_chain().at(4).header);
    j["state_root"] = "0x1234";
    EXPECT_THROW(codec::decode<BeaconBlockHeader>(j), codec::CodecError);
    j.erase("slot");
    EXPECT_THROW(codec::decode<BeaconBlockHeader>(j), codec::CodecError);
}

TEST(Codec, StoredKeysMustMatchRoot) {
    const auto& chain = small_chain();
    auto j = codec::to_json(anchored(chain, 0, StorageMode::Store));
    auto& keys = j["trusted_committee"]["pubkeys"];
    std::swap(keys[0], keys[1]);
    EXPECT_THROW(codec::decode<RelayState>(j), codec::CodecError);
}

// ---- properties -------------------------------------------------------------------

TEST(Periods, ComputePeriodWithDefaults) {
    const RelayConfig d;
    EXPECT_EQ(compute_period(0, d), 0U);
    EXPECT_EQ(compute_period(8191, d), 0U);
    EXPECT_EQ(compute_period(8192, d), 1U);
    EXPECT_EQ(compute_period(20000, d), 2U);
}

TEST(Threshold, ParticipationCountMatchesLoop) {
    EXPECT_EQ(participation_count(std::vector<bool>(512, false)), 0U);
    EXPECT_EQ(participation_count(std::vector<bool>(512, true)), 512U);
    std::mt19937_64 rng(5);
    for (int trial = 0; trial < 50; ++trial) {
        std::vector<bool> bits(512);
        std::uint64_t naive = 0;
        for (std::size_t i = 0; i < bits.size(); ++i) {
            bits[i] = (rng() & 1) != 0;
            if (bits[i]) ++naive;
        }
        EXPECT_EQ(participation_count(bits), naive);
    }
    RelayConfig c;
    c.committee_size = 32;
    EXPECT_TRUE(meets_threshold(22, c));
    EXPECT_FALSE(meets_threshold(21, c));
}

TEST(FinalityLink, HonestAndForgedPairs) {
    const auto& chain = small_chain();
    const auto u = sim::craft_update(chain, 1, 0, 8);
    const Digest fin_root = u.finalized_header.hash_tree_root();
    EXPECT_TRUE(verify_finality_link(u.latest_header, fin_root, u.finality_branch, chain.config));
    Digest other = fin_root;
    other.bytes[31] ^= 0x80;
    EXPECT_FALSE(verify_finality_link(u.latest_header, other, u.finality_branch, chain.config));
    auto zeroed = u.latest_header;
    zeroed.state_root = Digest::zero();
    EXPECT_FALSE(verify_finality_link(zeroed, fin_root, u.finality_branch, chain.config));
    auto short_branch = u.finality_branch;
    short_branch.nodes.pop_back();
    EXPECT_THROW(verify_finality_link(u.latest_header, fin_root, short_branch, chain.config),
                 ssz::MerkleError);
}

TEST(Properties, DroppingAnySignerBitBreaksSignature) {
    const auto& chain = small_chain();
    const RelayState s = anchored(chain, 0, StorageMode::NoStore);
    const RelayUpdate honest = sim::craft_update(chain, 1, 0, 8);
    for (std::size_t i = 0; i < 8; ++i) {
        RelayUpdate u = honest;
        u.participation_bits[i] = false;
        EXPECT_EQ(rejection(s, u), ErrorCode::SignatureInvalid) << "bit " << i;
    }
}

TEST(Properties, RotationInstallsProvenRoots) {
    const auto& chain = small_chain();
    for (StorageMode mode : kModes) {
        const RelayUpdate u = sim::craft_update(chain, 3, 5, 8);
        CostMeter m;
        const RelayState next = apply_update(anchored(chain, 5, mode), u, m);
        EXPECT_EQ(next.trusted.root, u.finalized_state.current_committee_root);
        EXPECT_EQ(next.trusted_next.root, u.next_committee->root());
        EXPECT_EQ(next.trusted_next.root, u.finalized_state.next_committee_root);
    }
}

TEST(Properties, OnlyFinalizedHeadersAreStoredAndSlotsIncrease) {
    const auto& chain = small_chain();
    RelayState s = anchored(chain, 1, StorageMode::Store);
    std::uint64_t last = s.current_header.slot;
    for (int c : {1, 2, 3, 3}) {
        const RelayUpdate u = sim::craft_update(chain, c, s.current_header.slot, 8);
        CostMeter m;
        s = apply_update(s, u, m);
        EXPECT_EQ(s.current_header, u.finalized_header);
        EXPECT_NE(s.current_header, u.latest_header);
        EXPECT_GT(s.current_header.slot, last);
        last = s.current_header.slot;
    }
}

TEST(Costs, StorageBoundSmallSizes) {
    EXPECT_EQ(report_committee_storage_cost(0, CostModel{}), 0U);
    EXPECT_EQ(report_committee_storage_cost(32, CostModel{}), 48U * 32 / 32 * 5000);
}
