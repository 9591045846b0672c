#pragma once

// Deterministic source chain for driving the relay: every slot filled,
// committees sampled per period, finality lagging two epochs.

#include <cstdint>
#include <random>
#include <stdexcept>
#include <string>
#include <vector>

#include "posrelay/bls/bls.hpp"
#include "posrelay/relay/types.hpp"

namespace posrelay::sim {

using relay::BeaconBlockHeader;
using relay::RelayConfig;
using relay::SimBeaconState;
using relay::SyncCommittee;

enum class SimErrorCode { TooFewValidators, CaseUnrealizable, NotApplicable, SlotOutOfRange };

const char* to_string(SimErrorCode code);

class SimError : public std::runtime_error {
public:
    SimError(SimErrorCode code, const std::string& detail);
    SimErrorCode code() const noexcept { return code_; }

private:
    SimErrorCode code_;
};

/// Epochs between a block and the checkpoint it finalizes.
inline constexpr std::uint64_t kFinalityLagEpochs = 2;

struct Validator {
    bls::Seed seed;
    bls::KeyPair keys;
};

struct PeriodCommittee {
    std::uint64_t period = 0;
    std::vector<std::uint64_t> members;  // validator indices, in committee order
    SyncCommittee committee;
    Digest root;
};

struct SlotEntry {
    BeaconBlockHeader header;
    SimBeaconState state;
    Digest header_root;
};

struct SimChain {
    std::uint64_t seed = 0;
    RelayConfig config;
    std::uint64_t num_periods = 0;
    /// Empty when the chain was imported without secrets.
    std::vector<Validator> validators;
    std::uint64_t validator_count = 0;
    /// Periods 0 .. num_periods + 1 (states reference the next committee, and
    /// a transition into the last period carries the one after it).
    std::vector<PeriodCommittee> committees;
    std::vector<SlotEntry> slots;

    std::uint64_t slot_count() const { return slots.size(); }
    const SlotEntry& at(std::uint64_t slot) const;
    const PeriodCommittee& committee_for_period(std::uint64_t period) const;
    const PeriodCommittee& committee_at_slot(std::uint64_t slot) const;
};

/// Throws SimError(TooFewValidators) when validator_count < committee_size and
/// std::invalid_argument on a zero period count or a bad config.
SimChain build_chain(std::uint64_t seed, const RelayConfig& config, std::uint64_t num_periods,
                     std::uint64_t validator_count);

/// Deterministic 32-byte key seed for validator `index`.
bls::Seed validator_seed(std::uint64_t chain_seed, std::uint64_t index);

/// Uniform integer in [0, bound) by rejection sampling on raw 64-bit draws.
std::uint64_t uniform_below(std::mt19937_64& rng, std::uint64_t bound);

/// Partial Fisher-Yates: `k` distinct indices from [0, n) in selection order.
std::vector<std::uint64_t> sample_without_replacement(std::mt19937_64& rng, std::uint64_t n,
                                                      std::uint64_t k);

relay::Snapshot snapshot(const SimChain& chain, std::uint64_t slot);

/// Recomputes every root and link; returns an empty string when consistent,
/// else a description of the first violation.
std::string check_consistency(const SimChain& chain);

}  // namespace posrelay::sim
