#include <gtest/gtest.h>

#include <filesystem>
#include <functional>
#include <fstream>
#include <set>

#include "posrelay/relay/codec.hpp"
#include "posrelay/sim/craft.hpp"
#include "posrelay/sim/export.hpp"
#include "support/small_chain.hpp"

using namespace posrelay;
using namespace posrelay::sim;
using relay::CostMeter;
using relay::ErrorCode;
using relay::StorageMode;
using testing_support::anchored;
using testing_support::small_chain;
using testing_support::small_config;

namespace {

ErrorCode rejection(const relay::RelayState& s, const RelayUpdate& u) {
    CostMeter m;
    try {
        relay::apply_update(s, u, m);
    } catch (const relay::RelayError& e) {
        return e.code();
    }
    ADD_FAILURE() << "update was accepted";
    return ErrorCode::NonMonotonic;
}

SimErrorCode sim_error(const std::function<void()>& f) {
    try {
        f();
    } catch (const SimError& e) {
        return e.code();
    }
    ADD_FAILURE() << "no SimError";
    return SimErrorCode::SlotOutOfRange;
}

std::filesystem::path scratch_dir(const std::string& name) {
    auto dir = std::filesystem::temp_directory_path() / ("posrelay_sim_test_" + name);
    std::filesystem::remove_all(dir);
    return dir;
}

}  // namespace

// ---- sampling ------------------------------------------------------------------

TEST(Sampling, UniformBelowStaysInRange) {
    std::mt19937_64 rng(3);
    std::vector<int> hits(7, 0);
    for (int i = 0; i < 7000; ++i) ++hits[uniform_below(rng, 7)];
    for (int h : hits) {
        EXPECT_GT(h, 850);
        EXPECT_LT(h, 1150);
    }
    EXPECT_EQ(uniform_below(rng, 1), 0U);
    EXPECT_THROW(uniform_below(rng, 0), std::invalid_argument);
}

TEST(Sampling, WithoutReplacementIsDistinct) {
    std::mt19937_64 rng(4);
    for (std::uint64_t k : {0, 1, 5, 20}) {
        const auto v = sample_without_replacement(rng, 20, k);
        EXPECT_EQ(v.size(), k);
        EXPECT_EQ(std::set<std::uint64_t>(v.begin(), v.end()).size(), k);
        for (auto x : v) EXPECT_LT(x, 20U);
    }
    EXPECT_THROW(sample_without_replacement(rng, 3, 4), std::invalid_argument);
}

// ---- chain structure -----------------------------------------------------------

TEST(Chain, ShapeAndConsistency) {
    const auto& chain = small_chain();
    EXPECT_EQ(chain.slot_count(), 64U);
    EXPECT_EQ(chain.committees.size(), 6U);
    EXPECT_EQ(chain.validators.size(), 16U);
    EXPECT_EQ(check_consistency(chain), "");
    for (const auto& pc : chain.committees) {
        EXPECT_EQ(pc.members.size(), 8U);
        EXPECT_EQ(std::set<std::uint64_t>(pc.members.begin(), pc.members.end()).size(), 8U);
        for (std::size_t i = 0; i < pc.members.size(); ++i) {
            EXPECT_EQ(pc.committee.pubkeys[i], chain.validators[pc.members[i]].keys.public_key);
        }
    }
    EXPECT_NE(chain.committees[0].root, chain.committees[1].root);
}

TEST(Chain, FinalityLagsTwoEpochs) {
    const auto& chain = small_chain();
    for (std::uint64_t s = 0; s < 8; ++s) {
        EXPECT_EQ(chain.at(s).state.finalized_slot, 0U);
        EXPECT_EQ(chain.at(s).state.finalized_root, Digest::zero());
    }
    EXPECT_EQ(chain.at(8).state.finalized_slot, 0U);
    EXPECT_EQ(chain.at(8).state.finalized_root, chain.at(0).header_root);
    EXPECT_EQ(chain.at(13).state.finalized_slot, 4U);
    EXPECT_EQ(chain.at(13).state.finalized_root, chain.at(4).header_root);
}

TEST(Chain, DeterministicPerSeed) {
    const auto a = build_chain(11, small_config(), 1, 10);
    const auto b = build_chain(11, small_config(), 1, 10);
    const auto c = build_chain(12, small_config(), 1, 10);
    EXPECT_EQ(a.slots.back().header_root, b.slots.back().header_root);
    EXPECT_EQ(a.committees[0].members, b.committees[0].members);
    EXPECT_NE(a.slots.back().header_root, c.slots.back().header_root);
    EXPECT_EQ(a.validators[3].seed, validator_seed(11, 3));
}

TEST(Chain, RejectsBadParameters) {
    EXPECT_EQ(sim_error([] { build_chain(1, small_config(), 1, 7); }),
              SimErrorCode::TooFewValidators);
    EXPECT_THROW(build_chain(1, small_config(), 0, 8), std::invalid_argument);
    EXPECT_EQ(sim_error([] { small_chain().at(64); }), SimErrorCode::SlotOutOfRange);
    EXPECT_EQ(sim_error([] { small_chain().committee_for_period(6); }), SimErrorCode::SlotOutOfRange);
}

TEST(Chain, ConsistencyCatchesCorruption) {
    SimChain chain = small_chain();
    chain.slots[20].state.reserved_b.bytes[0] = 1;
    EXPECT_NE(check_consistency(chain), "");
    chain = small_chain();
    chain.slots[30].header.parent_root = Digest::zero();
    EXPECT_NE(check_consistency(chain), "");
}

TEST(Chain, SnapshotMatchesChain) {
    const auto& chain = small_chain();
    const auto snap = snapshot(chain, 17);
    EXPECT_EQ(snap.header, chain.at(17).header);
    EXPECT_EQ(snap.current_committee.root(), snap.state.current_committee_root);
    EXPECT_EQ(snap.next_committee.root(), snap.state.next_committee_root);
}

// ---- case planning ---------------------------------------------------------------

TEST(Plan, PeriodPatterns) {
    const auto& chain = small_chain();
    const std::uint64_t spp = 16;
    for (std::uint64_t anchor : {0, 3, 16, 17}) {
        const std::uint64_t p = anchor / spp;
        const auto c1 = plan_case(chain, 1, anchor);
        EXPECT_EQ(c1.finalized_slot / spp, p);
        EXPECT_EQ(c1.latest_slot / spp, p);
        const auto c2 = plan_case(chain, 2, anchor);
        EXPECT_EQ(c2.finalized_slot / spp, p);
        EXPECT_EQ(c2.latest_slot / spp, p + 1);
        const auto c3 = plan_case(chain, 3, anchor);
        EXPECT_EQ(c3.finalized_slot, (p + 1) * spp);
        EXPECT_EQ(c3.latest_slot / spp, p + 1);
        for (const auto& plan : {c1, c2, c3}) {
            EXPECT_GT(plan.finalized_slot, anchor);
            EXPECT_EQ(plan.finalized_slot % 4, 0U);
            EXPECT_EQ(chain.at(plan.latest_slot).state.finalized_slot, plan.finalized_slot);
        }
    }
}

TEST(Plan, UnrealizableCases) {
    const auto& chain = small_chain();
    // Checkpoint after slot 8 is 12 and latest would be 20: no case 1 left.
    EXPECT_EQ(sim_error([&] { plan_case(chain, 1, 8); }), SimErrorCode::CaseUnrealizable);
    EXPECT_EQ(sim_error([&] { plan_case(chain, 3, 48); }), SimErrorCode::CaseUnrealizable);
    EXPECT_EQ(sim_error([&] { plan_case(chain, 4, 0); }), SimErrorCode::CaseUnrealizable);
    EXPECT_EQ(sim_error([&] { craft_update_for(chain, 0, 4, 9, 8); }),
              SimErrorCode::CaseUnrealizable);
}

TEST(Craft, NextCommitteeOnlyOnTransition) {
    const auto& chain = small_chain();
    EXPECT_FALSE(craft_update(chain, 1, 0, 8).next_committee.has_value());
    EXPECT_FALSE(craft_update(chain, 2, 0, 8).next_committee.has_value());
    const auto u = craft_update(chain, 3, 0, 8);
    ASSERT_TRUE(u.next_committee.has_value());
    EXPECT_EQ(u.next_committee->root(), chain.committee_for_period(2).root);
    EXPECT_EQ(u.resubmitted_committee->root(), chain.committee_for_period(1).root);
}

TEST(Craft, ParticipationOverflowIsRejected) {
    EXPECT_THROW(craft_update(small_chain(), 1, 0, 9), std::invalid_argument);
}

// ---- tampering -------------------------------------------------------------------

TEST(Tamper, NamesRoundTrip) {
    for (TamperKind k : kAllTamperKinds) EXPECT_EQ(tamper_kind_from_string(to_string(k)), k);
    EXPECT_THROW(tamper_kind_from_string("flip"), std::invalid_argument);
}

TEST(Tamper, EveryKindHitsItsError) {
    const auto& chain = small_chain();
    std::mt19937_64 rng(99);
    for (StorageMode mode : {StorageMode::Store, StorageMode::NoStore}) {
        for (TamperKind k : kAllTamperKinds) {
            const int c = k == TamperKind::BadNextCommittee ? 3 : 1;
            const auto honest = craft_update(chain, c, 0, 7);
            for (int trial = 0; trial < 3; ++trial) {
                const auto t = random_tampering(k, rng);
                const auto bad = tamper(honest, t, chain, 0);
                EXPECT_NE(bad, honest) << to_string(k);
                EXPECT_EQ(rejection(anchored(chain, 0, mode), bad), expected_error(k))
                    << to_string(k) << " a=" << t.a << " b=" << t.b;
            }
        }
    }
}

TEST(Tamper, NotApplicableCases) {
    const auto& chain = small_chain();
    const auto case1 = craft_update(chain, 1, 0, 8);
    EXPECT_EQ(sim_error([&] { tamper(case1, {TamperKind::BadNextCommittee, 0, 0}, chain, 0); }),
              SimErrorCode::NotApplicable);
    const auto late = craft_update(chain, 3, 32, 8);
    EXPECT_EQ(sim_error([&] { tamper(late, {TamperKind::SkipPeriod, 0, 0}, chain, 32); }),
              SimErrorCode::NotApplicable);
}

TEST(Tamper, WrongKeysAttachesCommitteeWhenAbsent) {
    const auto& chain = small_chain();
    CraftOptions bare;
    bare.resubmit_committee = false;
    const auto u = tamper(craft_update(chain, 1, 0, 8, bare), {TamperKind::WrongCommitteeKeys, 2, 5},
                          chain, 0);
    ASSERT_TRUE(u.resubmitted_committee.has_value());
    EXPECT_EQ(rejection(anchored(chain, 0, StorageMode::Store), u), ErrorCode::CommitteeMismatch);
}

// ---- export / import ----------------------------------------------------------------

TEST(Export, RoundTripWithAndWithoutSecrets) {
    const auto& chain = small_chain();
    const auto dir = scratch_dir("roundtrip");
    export_chain(chain, dir);
    EXPECT_TRUE(std::filesystem::exists(dir / "committees" / "5.json"));

    const SimChain pub = import_chain(dir, false);
    EXPECT_TRUE(pub.validators.empty());
    EXPECT_EQ(pub.validator_count, chain.validator_count);
    EXPECT_EQ(pub.config, chain.config);
    ASSERT_EQ(pub.slots.size(), chain.slots.size());
    for (std::size_t s = 0; s < pub.slots.size(); ++s) {
        EXPECT_EQ(pub.slots[s].header_root, chain.slots[s].header_root);
    }
    EXPECT_EQ(check_consistency(pub), "");
    EXPECT_EQ(sim_error([&] { craft_update(pub, 1, 0, 8); }), SimErrorCode::NotApplicable);

    const SimChain full = import_chain(dir, true);
    EXPECT_EQ(craft_update(full, 3, 0, 8), craft_update(chain, 3, 0, 8));
    std::filesystem::remove_all(dir);
}

TEST(Export, TamperedStateCaughtAtInit) {
    const auto& chain = small_chain();
    const auto dir = scratch_dir("tampered");
    export_chain(chain, dir);
    auto j = relay::codec::parse([&] {
        std::ifstream in(dir / "chain.json");
        return std::string(std::istreambuf_iterator<char>(in), {});
    }());
    j["slots"][5]["state"]["history_root"] = Digest::zero().to_hex();
    std::ofstream(dir / "chain.json") << relay::codec::dump(j);

    const SimChain bad = import_chain(dir, false);
    EXPECT_NE(check_consistency(bad), "");
    try {
        relay::initialize(snapshot(bad, 5), StorageMode::Store, bad.config);
        FAIL();
    } catch (const relay::RelayError& e) {
        EXPECT_EQ(e.code(), ErrorCode::StateRootMismatch);
    }
    std::filesystem::remove_all(dir);
}

TEST(Export, MissingFilesAreCodecErrors) {
    const auto dir = scratch_dir("missing");
    EXPECT_THROW(import_chain(dir, false), relay::codec::CodecError);
}

TEST(Chain, SpecExampleSweep) {
    RelayConfig cfg = small_config();
    const auto chain = build_chain(7, cfg, 3, 32);
    EXPECT_EQ(chain.slot_count(), 48U);
    EXPECT_EQ(check_consistency(chain), "");
}

TEST(Chain, FullValidatorSetSitsInEveryCommittee) {
    const auto chain = build_chain(3, small_config(), 2, 8);
    for (const auto& pc : chain.committees) {
        EXPECT_EQ(std::set<std::uint64_t>(pc.members.begin(), pc.members.end()).size(), 8U);
    }
}

TEST(Craft, EveryAdmissibleAnchorIsAccepted) {
    const auto chain = build_chain(21, small_config(), 3, 12);
    std::size_t accepted = 0;
    for (std::uint64_t anchor = 0; anchor < chain.slot_count(); ++anchor) {
        for (int c = 1; c <= 3; ++c) {
            RelayUpdate u;
            try {
                u = craft_update(chain, c, anchor, 6);
            } catch (const SimError& e) {
                EXPECT_EQ(e.code(), SimErrorCode::CaseUnrealizable);
                continue;
            }
            CostMeter m;
            EXPECT_NO_THROW(relay::apply_update(anchored(chain, anchor, StorageMode::NoStore), u, m))
                << "case " << c << " anchor " << anchor;
            ++accepted;
        }
    }
    EXPECT_GT(accepted, 40U);
}

TEST(Tamper, OriginalUntouched) {
    const auto& chain = small_chain();
    const auto honest = craft_update(chain, 3, 0, 8);
    const std::string before = relay::codec::dump(relay::codec::to_json(honest));
    std::mt19937_64 rng(5);
    for (TamperKind k : kAllTamperKinds) {
        try {
            tamper(honest, random_tampering(k, rng), chain, 0);
        } catch (const SimError&) {
        }
    }
    EXPECT_EQ(relay::codec::dump(relay::codec::to_json(honest)), before);
    CostMeter m;
    EXPECT_NO_THROW(relay::apply_update(anchored(chain, 0, StorageMode::Store), honest, m));
}
