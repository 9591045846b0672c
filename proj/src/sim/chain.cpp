#include "posrelay/sim/chain.hpp"

#include <limits>

#include "posrelay/ssz/merkle.hpp"

namespace posrelay::sim {

namespace {

// Domain-separates the per-period sampling stream from validator seeds.
constexpr std::uint64_t kCommitteeTag = 0x636f6d6d69747465ULL;
constexpr std::uint64_t kBodyTag = 0x626f6479ULL;

std::uint64_t first_word(const Digest& d) {
    std::uint64_t v = 0;
    for (int i = 7; i >= 0; --i) v = (v << 8) | d.bytes[i];
    return v;
}

PeriodCommittee sample_committee(const SimChain& chain, std::uint64_t period,
                                 const std::vector<bls::PublicKey>& pubkeys) {
    const Digest stream =
        ssz::hash_node(uint64_chunk(chain.seed), ssz::hash_node(uint64_chunk(kCommitteeTag),
                                                                uint64_chunk(period)));
    std::mt19937_64 rng(first_word(stream));
    PeriodCommittee pc;
    pc.period = period;
    pc.members = sample_without_replacement(rng, pubkeys.size(), chain.config.committee_size);
    pc.committee.pubkeys.reserve(pc.members.size());
    for (std::uint64_t v : pc.members) pc.committee.pubkeys.push_back(pubkeys[v]);
    pc.root = pc.committee.root();
    return pc;
}

}  // namespace

const char* to_string(SimErrorCode code) {
    switch (code) {
        case SimErrorCode::TooFewValidators: return "TooFewValidators";
        case SimErrorCode::CaseUnrealizable: return "CaseUnrealizable";
        case SimErrorCode::NotApplicable: return "NotApplicable";
        case SimErrorCode::SlotOutOfRange: return "SlotOutOfRange";
    }
    return "Unknown";
}

SimError::SimError(SimErrorCode code, const std::string& detail)
    : std::runtime_error(std::string(to_string(code)) + ": " + detail), code_(code) {}

const SlotEntry& SimChain::at(std::uint64_t slot) const {
    if (slot >= slots.size()) {
        throw SimError(SimErrorCode::SlotOutOfRange,
                       "slot " + std::to_string(slot) + " >= " + std::to_string(slots.size()));
    }
    return slots[slot];
}

const PeriodCommittee& SimChain::committee_for_period(std::uint64_t period) const {
    if (period >= committees.size()) {
        throw SimError(SimErrorCode::SlotOutOfRange,
                       "no committee sampled for period " + std::to_string(period));
    }
    return committees[period];
}

const PeriodCommittee& SimChain::committee_at_slot(std::uint64_t slot) const {
    return committee_for_period(slot / config.slots_per_period());
}

bls::Seed validator_seed(std::uint64_t chain_seed, std::uint64_t index) {
    return ssz::hash_node(uint64_chunk(chain_seed), uint64_chunk(index)).bytes;
}

std::uint64_t uniform_below(std::mt19937_64& rng, std::uint64_t bound) {
    if (bound == 0) throw std::invalid_argument("uniform_below: empty range");
    constexpr std::uint64_t kMax = std::numeric_limits<std::uint64_t>::max();
    const std::uint64_t limit = kMax - (kMax % bound + 1) % bound;
    std::uint64_t v = 0;
    do {
        v = rng();
    } while (v > limit);
    return v % bound;
}

std::vector<std::uint64_t> sample_without_replacement(std::mt19937_64& rng, std::uint64_t n,
                                                      std::uint64_t k) {
    if (k > n) throw std::invalid_argument("cannot sample more items than available");
    std::vector<std::uint64_t> pool(n);
    for (std::uint64_t i = 0; i < n; ++i) pool[i] = i;
    for (std::uint64_t i = 0; i < k; ++i) {
        const std::uint64_t j = i + uniform_below(rng, n - i);
        std::swap(pool[i], pool[j]);
    }
    pool.resize(k);
    return pool;
}

SimChain build_chain(std::uint64_t seed, const RelayConfig& config, std::uint64_t num_periods,
                     std::uint64_t validator_count) {
    config.validate();
    if (num_periods == 0) throw std::invalid_argument("num_periods must be positive");
    if (validator_count < config.committee_size) {
        throw SimError(SimErrorCode::TooFewValidators,
                       std::to_string(validator_count) + " validators for a committee of " +
                           std::to_string(config.committee_size));
    }

    SimChain chain;
    chain.seed = seed;
    chain.config = config;
    chain.num_periods = num_periods;
    chain.validator_count = validator_count;

    std::vector<bls::PublicKey> pubkeys;
    chain.validators.reserve(validator_count);
    pubkeys.reserve(validator_count);
    for (std::uint64_t i = 0; i < validator_count; ++i) {
        const bls::Seed s = validator_seed(seed, i);
        chain.validators.push_back(Validator{s, bls::keygen(s)});
        pubkeys.push_back(chain.validators.back().keys.public_key);
    }
    for (std::uint64_t p = 0; p < num_periods + 2; ++p) {
        chain.committees.push_back(sample_committee(chain, p, pubkeys));
    }

    const std::uint64_t spe = config.slots_per_epoch;
    const std::uint64_t spp = config.slots_per_period();
    const std::uint64_t total = num_periods * spp;
    chain.slots.reserve(total);
    for (std::uint64_t s = 0; s < total; ++s) {
        const Digest parent = s == 0 ? Digest::zero() : chain.slots[s - 1].header_root;
        const Digest prev_history = s == 0 ? Digest::zero() : chain.slots[s - 1].state.history_root;

        SimBeaconState st;
        st.slot = s;
        const std::uint64_t epoch = s / spe;
        if (epoch >= kFinalityLagEpochs) {
            st.finalized_slot = (epoch - kFinalityLagEpochs) * spe;
            st.finalized_root = chain.slots[st.finalized_slot].header_root;
        }
        st.current_committee_root = chain.committees[s / spp].root;
        st.next_committee_root = chain.committees[s / spp + 1].root;
        st.history_root = ssz::hash_node(prev_history, parent);

        BeaconBlockHeader h;
        h.slot = s;
        const Digest body = ssz::hash_node(uint64_chunk(seed ^ kBodyTag), uint64_chunk(s));
        h.proposer_index = first_word(body) % validator_count;
        h.parent_root = parent;
        h.state_root = st.hash_tree_root();
        h.body_root = body;

        chain.slots.push_back(SlotEntry{h, st, h.hash_tree_root()});
    }
    return chain;
}

relay::Snapshot snapshot(const SimChain& chain, std::uint64_t slot) {
    const SlotEntry& e = chain.at(slot);
    const std::uint64_t period = slot / chain.config.slots_per_period();
    return relay::Snapshot{e.header, e.state, chain.committee_for_period(period).committee,
                           chain.committee_for_period(period + 1).committee};
}

std::string check_consistency(const SimChain& chain) {
    const std::uint64_t spe = chain.config.slots_per_epoch;
    const std::uint64_t spp = chain.config.slots_per_period();
    std::vector<Digest> roots;
    for (const auto& pc : chain.committees) {
        if (pc.committee.root() != pc.root) return "period " + std::to_string(pc.period) + ": stale committee root";
        roots.push_back(pc.root);
    }
    const std::uint64_t needed = (chain.slots.size() + spp - 1) / spp + 1;
    if (roots.size() < needed) return "missing committees";
    for (std::uint64_t s = 0; s < chain.slots.size(); ++s) {
        const SlotEntry& e = chain.slots[s];
        const std::string at = "slot " + std::to_string(s) + ": ";
        if (e.header.slot != s || e.state.slot != s) return at + "slot numbers disagree";
        if (e.state.hash_tree_root() != e.header.state_root) return at + "state root mismatch";
        if (e.header.hash_tree_root() != e.header_root) return at + "cached header root stale";
        const Digest parent = s == 0 ? Digest::zero() : chain.slots[s - 1].header_root;
        if (e.header.parent_root != parent) return at + "broken parent link";
        const std::uint64_t epoch = s / spe;
        if (epoch >= kFinalityLagEpochs) {
            const std::uint64_t cp = (epoch - kFinalityLagEpochs) * spe;
            if (e.state.finalized_slot != cp || e.state.finalized_root != chain.slots[cp].header_root) {
                return at + "finalized checkpoint mismatch";
            }
        }
        const std::uint64_t p = s / spp;
        if (e.state.current_committee_root != roots[p] || e.state.next_committee_root != roots[p + 1]) {
            return at + "committee roots mismatch";
        }
    }
    return {};
}

}  // namespace posrelay::sim
