#include "posrelay/cli/scenarios.hpp"

#include <algorithm>
#include <random>
#include <sstream>
#include <stdexcept>

#include "posrelay/relay/codec.hpp"
#include "posrelay/relay/relay.hpp"
#include "posrelay/sim/craft.hpp"

namespace posrelay::cli {

using relay::CostMeter;
using relay::ErrorCode;
using relay::RelayError;
using relay::RelayState;
using relay::StorageMode;
using sim::SimChain;

namespace {

struct Outcome {
    bool accepted = false;
    ErrorCode error = ErrorCode::NonMonotonic;
    std::string detail;
    RelayState next;
    CostMeter meter;
};

Outcome attempt(const RelayState& state, const relay::RelayUpdate& u) {
    Outcome o;
    try {
        o.next = relay::apply_update(state, u, o.meter);
        o.accepted = true;
    } catch (const RelayError& e) {
        o.error = e.code();
        o.detail = e.what();
    }
    return o;
}

std::string describe(const Outcome& o) {
    return o.accepted ? std::string("accepted") : o.detail;
}

class Recorder {
public:
    explicit Recorder(ScenarioReport& r) : r_(r) {}

    void check(std::string name, bool ok, std::string detail = {}) {
        r_.checks.push_back(Check{std::move(name), ok, ok ? std::string{} : std::move(detail)});
    }
    void note(std::string line) { r_.notes.push_back(std::move(line)); }

private:
    ScenarioReport& r_;
};

std::string mode_tag(StorageMode m) { return relay::to_string(m); }

RelayState anchor(const SimChain& chain, std::uint64_t slot, StorageMode mode) {
    return relay::initialize(sim::snapshot(chain, slot), mode, chain.config);
}

SimChain build(const ScenarioOptions& o, std::uint64_t min_periods) {
    const std::uint64_t validators = o.validators != 0 ? o.validators : 2 * o.config.committee_size;
    return sim::build_chain(o.seed, o.config, std::max(o.periods, min_periods), validators);
}

void run_case(int case_id, const ScenarioOptions& o, Recorder& rec) {
    const SimChain chain = build(o, 3);
    const auto plan = sim::plan_case(chain, case_id, 0);
    const std::uint64_t p = 0;
    rec.note("case " + std::to_string(case_id) + ": anchor slot 0, finalized slot " +
             std::to_string(plan.finalized_slot) + ", latest slot " + std::to_string(plan.latest_slot));

    std::vector<std::pair<StorageMode, CostMeter>> meters;
    for (StorageMode mode : o.modes) {
        const std::string tag = mode_tag(mode);
        // STORE relays already hold the keys, so the update leaves them out.
        sim::CraftOptions craft;
        craft.resubmit_committee = mode == StorageMode::NoStore;
        const auto update = sim::craft_update(chain, case_id, 0, o.config.committee_size, craft);
        const RelayState s = anchor(chain, 0, mode);
        const Outcome out = attempt(s, update);
        rec.check(tag + " honest case-" + std::to_string(case_id) + " update accepted", out.accepted,
                  describe(out));
        if (!out.accepted) continue;
        const RelayState& n = out.next;
        rec.check(tag + " current header is the finalized header",
                  n.current_header == chain.at(plan.finalized_slot).header);
        if (case_id == 3) {
            rec.check(tag + " trusted committee rotated to period " + std::to_string(p + 1),
                      n.trusted.root == chain.committee_for_period(p + 1).root);
            rec.check(tag + " next committee installed for period " + std::to_string(p + 2),
                      n.trusted_next.root == chain.committee_for_period(p + 2).root);
        } else {
            rec.check(tag + " committee roots unchanged",
                      n.trusted.root == chain.committee_for_period(p).root &&
                          n.trusted_next.root == chain.committee_for_period(p + 1).root);
        }
        rec.check(tag + " committee keys stored iff STORE",
                  n.trusted.keys.has_value() == (mode == StorageMode::Store) &&
                      n.trusted_next.keys.has_value() == (mode == StorageMode::Store));
        rec.check(tag + " single pairing check", out.meter.pairing_checks == 1,
                  std::to_string(out.meter.pairing_checks) + " pairing checks");
        rec.note("costs " + tag + ": " + format_costs(out.meter, o.cost_model));
        meters.emplace_back(mode, out.meter);
    }
    if (meters.size() == 2 && meters[0].first != meters[1].first) {
        const auto& store = meters[0].first == StorageMode::Store ? meters[0].second : meters[1].second;
        const auto& bare = meters[0].first == StorageMode::Store ? meters[1].second : meters[0].second;
        const std::uint64_t expected =
            case_id == 3 ? relay::committee_storage_words(o.config.committee_size) : 0;
        const std::uint64_t delta = store.storage_words_written - bare.storage_words_written;
        rec.check("STORE writes " + std::to_string(expected) + " more words than NO-STORE",
                  store.storage_words_written >= bare.storage_words_written && delta == expected,
                  "delta " + std::to_string(delta));
    }
}

void run_stall(const ScenarioOptions& o, Recorder& rec) {
    const SimChain chain = build(o, 3);
    const std::uint64_t spp = o.config.slots_per_period();
    // An honest update two periods ahead: its finality pattern is case 1 inside period 2.
    const auto ahead = sim::plan_case(chain, 1, 2 * spp);
    const auto gap = sim::craft_update_for(chain, 0, ahead.finalized_slot, ahead.latest_slot,
                                           o.config.committee_size);
    rec.note("stall: anchor slot 0, update finalizing slot " + std::to_string(ahead.finalized_slot) +
             " signed in period 2");
    for (StorageMode mode : o.modes) {
        const std::string tag = mode_tag(mode);
        const RelayState s = anchor(chain, 0, mode);
        const std::string before = relay::codec::serialize(s);
        const Outcome out = attempt(s, gap);
        rec.check(tag + " two-period jump rejected with PeriodGap",
                  !out.accepted && out.error == ErrorCode::PeriodGap, describe(out));
        rec.check(tag + " state unchanged by the rejected jump", relay::codec::serialize(s) == before);
        const Outcome next = attempt(s, sim::craft_update(chain, 3, 0, o.config.committee_size));
        rec.check(tag + " one-period step from the same state accepted", next.accepted, describe(next));
    }
}

void run_liveness(const ScenarioOptions& o, Recorder& rec) {
    constexpr std::uint64_t kSteps = 5;
    const SimChain chain = build(o, kSteps + 1);
    const std::uint64_t spp = o.config.slots_per_period();
    for (StorageMode mode : o.modes) {
        const std::string tag = mode_tag(mode);
        RelayState s = anchor(chain, 0, mode);
        bool all = true;
        std::string first_failure;
        RelayState after_first;
        for (std::uint64_t step = 1; step <= kSteps; ++step) {
            const Outcome out =
                attempt(s, sim::craft_update(chain, 3, s.current_header.slot, o.config.committee_size));
            const bool ok = out.accepted && out.next.trusted.root == chain.committee_for_period(step).root;
            if (!ok && all) first_failure = "step " + std::to_string(step) + ": " + describe(out);
            all = all && ok;
            if (!out.accepted) break;
            s = out.next;
            if (step == 1) after_first = s;
        }
        rec.check(tag + " one update per period accepted for " + std::to_string(kSteps) + " periods", all,
                  first_failure);
        rec.check(tag + " relay reached period " + std::to_string(kSteps),
                  relay::compute_period(s.current_header.slot, o.config) == kSteps);
        if (!all) continue;
        // From period 1, an update signed in period 3 skips period 2 entirely.
        const auto skip = sim::plan_case(chain, 1, 3 * spp);
        const Outcome gap = attempt(after_first, sim::craft_update_for(chain, spp, skip.finalized_slot,
                                                                       skip.latest_slot,
                                                                       o.config.committee_size));
        rec.check(tag + " skipping a period yields PeriodGap",
                  !gap.accepted && gap.error == ErrorCode::PeriodGap, describe(gap));
    }
}

// Picks a random honest update that the tampering applies to.
struct AdversarialBase {
    std::uint64_t anchor = 0;
    relay::RelayUpdate update;
    relay::RelayUpdate tampered;
};

AdversarialBase pick_base(const SimChain& chain, sim::TamperKind kind, std::mt19937_64& rng) {
    const std::uint64_t n = chain.config.committee_size;
    const std::uint64_t threshold = (2 * n + 2) / 3;
    const std::uint64_t spp = chain.config.slots_per_period();
    const std::uint64_t anchor_range = std::min<std::uint64_t>(chain.slot_count(), 2 * spp);
    for (int attempt_no = 0; attempt_no < 64; ++attempt_no) {
        AdversarialBase b;
        b.anchor = attempt_no < 48 ? sim::uniform_below(rng, anchor_range) : 0;
        int case_id = 1 + static_cast<int>(sim::uniform_below(rng, 3));
        if (kind == sim::TamperKind::BadNextCommittee) case_id = 3;
        if (kind == sim::TamperKind::SkipPeriod) case_id = 1;
        const std::uint64_t participation = threshold + sim::uniform_below(rng, n - threshold + 1);
        try {
            const auto plan = sim::plan_case(chain, case_id, b.anchor);
            if (kind == sim::TamperKind::SkipPeriod &&
                (chain.slot_count() - 1 - plan.latest_slot) / spp < 2) {
                continue;
            }
            b.update = sim::craft_update_for(chain, b.anchor, plan.finalized_slot, plan.latest_slot,
                                             participation);
            b.tampered = sim::tamper(b.update, sim::random_tampering(kind, rng), chain, b.anchor);
            return b;
        } catch (const sim::SimError& e) {
            if (e.code() != sim::SimErrorCode::CaseUnrealizable &&
                e.code() != sim::SimErrorCode::NotApplicable) {
                throw;
            }
        }
    }
    throw std::invalid_argument(std::string("chain too small for ") + sim::to_string(kind));
}

void run_adversarial(const ScenarioOptions& o, Recorder& rec) {
    const SimChain chain = build(o, 3);
    std::mt19937_64 rng(o.seed);
    for (sim::TamperKind kind : sim::kAllTamperKinds) {
        const ErrorCode want = sim::expected_error(kind);
        std::vector<std::uint64_t> hits(o.modes.size(), 0);
        std::vector<std::string> failures(o.modes.size());
        bool isolation = true;
        std::string isolation_detail;
        for (std::uint64_t trial = 0; trial < o.trials; ++trial) {
            const AdversarialBase b = pick_base(chain, kind, rng);
            for (std::size_t m = 0; m < o.modes.size(); ++m) {
                const RelayState s = anchor(chain, b.anchor, o.modes[m]);
                const std::string before = relay::codec::serialize(s);
                const Outcome out = attempt(s, b.tampered);
                const bool ok = !out.accepted && out.error == want && relay::codec::serialize(s) == before;
                if (ok) {
                    ++hits[m];
                } else if (failures[m].empty()) {
                    failures[m] = "trial " + std::to_string(trial) + ": " + describe(out);
                }
                if (trial == 0) {
                    const Outcome honest = attempt(s, b.update);
                    if (!honest.accepted) {
                        isolation = false;
                        isolation_detail = describe(honest);
                    }
                }
            }
        }
        const std::string name = sim::to_string(kind);
        for (std::size_t m = 0; m < o.modes.size(); ++m) {
            rec.check(mode_tag(o.modes[m]) + " " + name + " rejected with " + relay::to_string(want) +
                          ", state unchanged (" + std::to_string(hits[m]) + "/" +
                          std::to_string(o.trials) + ")",
                      hits[m] == o.trials, failures[m]);
        }
        rec.check(name + " untampered base update accepted", isolation, isolation_detail);
    }
}

}  // namespace

relay::RelayConfig ScenarioOptions::default_config() {
    relay::RelayConfig c;
    c.committee_size = 32;
    c.slots_per_epoch = 4;
    c.epochs_per_period = 4;
    return c;
}

bool ScenarioReport::passed() const {
    return !checks.empty() &&
           std::all_of(checks.begin(), checks.end(), [](const Check& c) { return c.passed; });
}

std::string format_costs(const CostMeter& m, const relay::CostModel& model) {
    const auto gas = relay::modeled_gas(m, model);
    std::ostringstream os;
    os << "sha256=" << m.sha256_calls << " pairings=" << m.pairing_checks
       << " point_additions=" << m.point_additions << " words_written=" << m.storage_words_written
       << " words_read=" << m.storage_words_read << " payload_bytes=" << m.payload_bytes
       << " gas=" << gas.total() << " (write " << gas.storage_write << ", read " << gas.storage_read
       << ", payload " << gas.payload << ", hashing " << gas.hashing << ", pairing " << gas.pairing
       << ")";
    return os.str();
}

ScenarioReport run_scenario(std::string_view name, const ScenarioOptions& options) {
    options.config.validate();
    if (options.modes.empty()) throw std::invalid_argument("no storage mode selected");
    ScenarioReport report;
    report.name = std::string(name);
    Recorder rec(report);
    try {
        if (name == "case1") {
            run_case(1, options, rec);
        } else if (name == "case2") {
            run_case(2, options, rec);
        } else if (name == "case3") {
            run_case(3, options, rec);
        } else if (name == "stall") {
            run_stall(options, rec);
        } else if (name == "liveness") {
            run_liveness(options, rec);
        } else if (name == "adversarial") {
            run_adversarial(options, rec);
        } else {
            throw std::invalid_argument("unknown scenario '" + std::string(name) + "'");
        }
    } catch (const sim::SimError& e) {
        // The configured chain cannot host the scenario.
        throw std::invalid_argument(e.what());
    }
    return report;
}

}  // namespace posrelay::cli
