#include "posrelay/cli/commands.hpp"

#include <CLI11.hpp>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <optional>
#include <random>
#include <sstream>
#include <string>

#include "posrelay/cli/scenarios.hpp"
#include "posrelay/relay/codec.hpp"
#include "posrelay/relay/relay.hpp"
#include "posrelay/sim/craft.hpp"
#include "posrelay/sim/export.hpp"

namespace posrelay::cli {

namespace fs = std::filesystem;
namespace codec = relay::codec;
using relay::RelayConfig;
using relay::StorageMode;

namespace {

class UsageError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

struct ConfigFlags {
    std::uint64_t committee_size = 32;
    std::uint64_t slots_per_epoch = 4;
    std::uint64_t epochs_per_period = 4;
    std::optional<std::uint64_t> trusting_period_slots;

    void attach(CLI::App* app) {
        app->add_option("--committee-size", committee_size, "Sync committee size")->capture_default_str();
        app->add_option("--slots-per-epoch", slots_per_epoch, "Slots per epoch")->capture_default_str();
        app->add_option("--epochs-per-period", epochs_per_period, "Epochs per committee period")
            ->capture_default_str();
        app->add_option("--trusting-period-slots", trusting_period_slots,
                        "Reject updates further than this many slots ahead (off by default)");
    }

    RelayConfig build() const {
        RelayConfig c;
        c.committee_size = committee_size;
        c.slots_per_epoch = slots_per_epoch;
        c.epochs_per_period = epochs_per_period;
        c.trusting_period_slots = trusting_period_slots;
        try {
            c.validate();
        } catch (const std::invalid_argument& e) {
            throw UsageError(e.what());
        }
        return c;
    }
};

struct CostFlags {
    relay::CostModel model;

    void attach(CLI::App* app) {
        app->add_option("--gas-per-word-write", model.gas_per_word_write)->capture_default_str();
        app->add_option("--gas-per-word-read", model.gas_per_word_read)->capture_default_str();
        app->add_option("--gas-per-payload-byte", model.gas_per_payload_byte)->capture_default_str();
        app->add_option("--gas-per-sha256", model.gas_per_sha256)->capture_default_str();
        app->add_option("--gas-per-pairing", model.gas_per_pairing)->capture_default_str();
        app->add_option("--gas-per-point-addition", model.gas_per_point_addition)->capture_default_str();
    }
};

std::uint64_t resolve_seed(std::uint64_t flag) {
    const char* env = std::getenv(kSeedEnvVar);
    if (env == nullptr || *env == '\0') return flag;
    try {
        std::size_t used = 0;
        const std::string text(env);
        const auto v = std::stoull(text, &used, 0);
        if (used != text.size() || text.front() == '-') throw std::invalid_argument(text);
        return v;
    } catch (const std::exception&) {
        throw UsageError(std::string(kSeedEnvVar) + " is not an unsigned integer: '" + env + "'");
    }
}

StorageMode parse_mode(const std::string& s) {
    if (s == "STORE") return StorageMode::Store;
    if (s == "NO-STORE") return StorageMode::NoStore;
    throw UsageError("mode must be STORE or NO-STORE");
}

codec::Json read_json(const fs::path& path) {
    std::ifstream in(path);
    if (!in) throw codec::CodecError("cannot read " + path.string());
    std::ostringstream ss;
    ss << in.rdbuf();
    return codec::parse(ss.str());
}

void write_text(const fs::path& path, const std::string& text) {
    if (path.has_parent_path()) fs::create_directories(path.parent_path());
    std::ofstream out(path);
    if (!out || !(out << text)) throw codec::CodecError("cannot write " + path.string());
}

template <class T>
T load(const fs::path& path) {
    const codec::Json j = read_json(path);
    try {
        return codec::decode<T>(j);
    } catch (const codec::CodecError& e) {
        throw codec::CodecError(path.string() + ": " + e.what());
    }
}

void print_costs(std::ostream& out, const relay::CostMeter& m, const relay::CostModel& model) {
    const auto g = relay::modeled_gas(m, model);
    out << "sha256_calls: " << m.sha256_calls << "\n"
        << "pairing_checks: " << m.pairing_checks << "\n"
        << "point_additions: " << m.point_additions << "\n"
        << "storage_words_written: " << m.storage_words_written << "\n"
        << "storage_words_read: " << m.storage_words_read << "\n"
        << "payload_bytes: " << m.payload_bytes << "\n"
        << "gas_storage_write: " << g.storage_write << "\n"
        << "gas_storage_read: " << g.storage_read << "\n"
        << "gas_payload: " << g.payload << "\n"
        << "gas_hashing: " << g.hashing << "\n"
        << "gas_pairing: " << g.pairing << "\n"
        << "gas_point_addition: " << g.point_addition << "\n"
        << "gas_total: " << g.total() << "\n";
}

// ---- simulate ---------------------------------------------------------------

struct SimulateCmd {
    ConfigFlags config;
    std::uint64_t seed = 7;
    std::uint64_t periods = 3;
    std::uint64_t validators = 0;
    std::string out_dir;

    void attach(CLI::App* app) {
        config.attach(app);
        app->add_option("--seed", seed, "Chain seed (POS_RELAY_SEED overrides)")->capture_default_str();
        app->add_option("--periods", periods, "Committee periods to simulate")->capture_default_str();
        app->add_option("--validators", validators, "Validator count (default: 2 x committee size)");
        app->add_option("--out", out_dir, "Output directory")->required();
    }

    int run(std::ostream& out) const {
        if (periods == 0) throw UsageError("--periods must be positive");
        const RelayConfig cfg = config.build();
        const std::uint64_t n = validators != 0 ? validators : 2 * cfg.committee_size;
        if (n < cfg.committee_size) throw UsageError("--validators must be at least the committee size");
        const sim::SimChain chain = sim::build_chain(resolve_seed(seed), cfg, periods, n);
        sim::export_chain(chain, out_dir);
        out << "seed: " << chain.seed << "\n"
            << "slots: " << chain.slot_count() << "\n"
            << "periods: " << chain.num_periods << "\n"
            << "validators: " << chain.validator_count << "\n";
        for (const auto& pc : chain.committees) {
            out << "committee_root[" << pc.period << "]: " << pc.root.to_hex() << "\n";
        }
        out << "wrote " << (fs::path(out_dir) / "chain.json").string() << "\n";
        return kExitOk;
    }
};

// ---- init -------------------------------------------------------------------

struct InitCmd {
    std::string chain_dir;
    std::uint64_t slot = 0;
    std::string mode = "STORE";
    std::string state_out;

    void attach(CLI::App* app) {
        app->add_option("--chain", chain_dir, "Chain export directory")->required();
        app->add_option("--slot", slot, "Anchor slot")->capture_default_str();
        app->add_option("--mode", mode, "STORE or NO-STORE")
            ->check(CLI::IsMember({"STORE", "NO-STORE"}))
            ->capture_default_str();
        app->add_option("--out", state_out, "Relay state file to write")->required();
    }

    int run(std::ostream& out) const {
        const sim::SimChain chain = sim::import_chain(chain_dir, false);
        const relay::Snapshot snap = sim::snapshot(chain, slot);
        const relay::RelayState s = relay::initialize(snap, parse_mode(mode), chain.config);
        write_text(state_out, codec::serialize(s));
        out << "mode: " << relay::to_string(s.mode) << "\n"
            << "slot: " << s.current_header.slot << "\n"
            << "header_root: " << s.current_header.hash_tree_root().to_hex() << "\n"
            << "trusted_committee_root: " << s.trusted.root.to_hex() << "\n"
            << "trusted_next_committee_root: " << s.trusted_next.root.to_hex() << "\n"
            << "wrote " << state_out << "\n";
        return kExitOk;
    }
};

// ---- craft ------------------------------------------------------------------

struct CraftCmd {
    std::string chain_dir;
    std::string state_in;
    int case_id = 0;
    std::optional<std::uint64_t> finalized_slot;
    std::optional<std::uint64_t> latest_slot;
    std::optional<std::uint64_t> participation;
    bool no_resubmit = false;
    std::string tamper_kind;
    std::optional<std::uint64_t> tamper_a;
    std::optional<std::uint64_t> tamper_b;
    std::uint64_t seed = 7;
    std::string update_out;

    void attach(CLI::App* app) {
        app->add_option("--chain", chain_dir, "Chain export directory (with secrets.json)")->required();
        app->add_option("--state", state_in, "Relay state the update targets")->required();
        auto* c = app->add_option("--case", case_id, "Period pattern 1, 2 or 3")->check(CLI::Range(1, 3));
        auto* f = app->add_option("--finalized-slot", finalized_slot, "Explicit finalized slot");
        auto* l = app->add_option("--latest-slot", latest_slot, "Explicit latest slot");
        f->needs(l);
        l->needs(f);
        c->excludes(f);
        app->add_option("--participation", participation, "Signers (default: whole committee)");
        app->add_flag("--no-resubmit", no_resubmit, "Leave out the signing committee's keys");
        std::vector<std::string> kinds;
        for (auto k : sim::kAllTamperKinds) kinds.emplace_back(sim::to_string(k));
        app->add_option("--tamper", tamper_kind, "Apply one tampering kind")->check(CLI::IsMember(kinds));
        app->add_option("--tamper-a", tamper_a, "First tampering parameter (default: from seed)");
        app->add_option("--tamper-b", tamper_b, "Second tampering parameter (default: from seed)");
        app->add_option("--seed", seed, "Seed for unset tampering parameters")->capture_default_str();
        app->add_option("--out", update_out, "Update file to write")->required();
    }

    int run(std::ostream& out) const {
        if (case_id == 0 && !finalized_slot) throw UsageError("give --case or --finalized-slot/--latest-slot");
        const sim::SimChain chain = sim::import_chain(chain_dir, true);
        const auto state = load<relay::RelayState>(state_in);
        const std::uint64_t anchor = state.current_header.slot;
        const std::uint64_t signers = participation.value_or(chain.config.committee_size);
        sim::CraftOptions opts;
        opts.resubmit_committee = !no_resubmit;

        relay::RelayUpdate u;
        if (case_id != 0) {
            u = sim::craft_update(chain, case_id, anchor, signers, opts);
        } else {
            u = sim::craft_update_for(chain, anchor, *finalized_slot, *latest_slot, signers, opts);
        }
        if (!tamper_kind.empty()) {
            std::mt19937_64 rng(resolve_seed(seed));
            sim::Tampering t = sim::random_tampering(sim::tamper_kind_from_string(tamper_kind), rng);
            if (tamper_a) t.a = *tamper_a;
            if (tamper_b) t.b = *tamper_b;
            u = sim::tamper(u, t, chain, anchor);
            out << "tamper: " << tamper_kind << " a=" << t.a << " b=" << t.b
                << " expect=" << relay::to_string(sim::expected_error(t.kind)) << "\n";
        }
        write_text(update_out, codec::dump(codec::to_json(u)));
        out << "finalized_slot: " << u.finalized_header.slot << "\n"
            << "latest_slot: " << u.latest_header.slot << "\n"
            << "participation: " << relay::participation_count(u.participation_bits) << "\n"
            << "wrote " << update_out << "\n";
        return kExitOk;
    }
};

// ---- update -----------------------------------------------------------------

struct UpdateCmd {
    std::string state_in;
    std::string update_in;
    std::string state_out;
    CostFlags costs;

    void attach(CLI::App* app) {
        app->add_option("--state", state_in, "Relay state file")->required();
        app->add_option("--update", update_in, "Update file")->required();
        app->add_option("--out", state_out, "Where to write the new state on acceptance");
        costs.attach(app);
    }

    int run(std::ostream& out) const {
        const auto state = load<relay::RelayState>(state_in);
        const auto update = load<relay::RelayUpdate>(update_in);
        relay::CostMeter meter;
        relay::RelayState next;
        try {
            next = relay::apply_update(state, update, meter);
        } catch (const relay::RelayError& e) {
            out << "REJECTED " << relay::to_string(e.code()) << "\n" << e.what() << "\n";
            print_costs(out, meter, costs.model);
            return kExitRejected;
        }
        if (!state_out.empty()) write_text(state_out, codec::serialize(next));
        out << "ACCEPTED\n"
            << "finalized_slot: " << next.current_header.slot << "\n"
            << "header_root: " << next.current_header.hash_tree_root().to_hex() << "\n"
            << "trusted_committee_root: " << next.trusted.root.to_hex() << "\n"
            << "trusted_next_committee_root: " << next.trusted_next.root.to_hex() << "\n";
        print_costs(out, meter, costs.model);
        if (!state_out.empty()) out << "wrote " << state_out << "\n";
        return kExitOk;
    }
};

// ---- scenario -----------------------------------------------------------------

struct ScenarioCmd {
    std::string name;
    ConfigFlags config;
    CostFlags costs;
    std::uint64_t seed = 7;
    std::uint64_t periods = 3;
    std::uint64_t validators = 0;
    std::string mode = "both";
    std::uint64_t trials = 1;

    void attach(CLI::App* app) {
        std::vector<std::string> names(kScenarioNames.begin(), kScenarioNames.end());
        app->add_option("name", name, "Scenario name")->required()->check(CLI::IsMember(names));
        config.attach(app);
        costs.attach(app);
        app->add_option("--seed", seed, "Chain seed (POS_RELAY_SEED overrides)")->capture_default_str();
        app->add_option("--periods", periods, "Minimum periods to simulate")->capture_default_str();
        app->add_option("--validators", validators, "Validator count (default: 2 x committee size)");
        app->add_option("--mode", mode, "STORE, NO-STORE or both")
            ->check(CLI::IsMember({"STORE", "NO-STORE", "both"}))
            ->capture_default_str();
        app->add_option("--trials", trials, "Tampered updates per kind (adversarial)")
            ->check(CLI::PositiveNumber)
            ->capture_default_str();
    }

    int run(std::ostream& out) const {
        ScenarioOptions o;
        o.config = config.build();
        o.seed = resolve_seed(seed);
        o.periods = periods;
        o.validators = validators;
        o.trials = trials;
        o.cost_model = costs.model;
        if (mode != "both") o.modes = {parse_mode(mode)};
        if (validators != 0 && validators < o.config.committee_size) {
            throw UsageError("--validators must be at least the committee size");
        }
        const ScenarioReport r = run_scenario(name, o);
        for (const auto& line : r.notes) out << line << "\n";
        std::size_t passed = 0;
        for (const auto& c : r.checks) {
            out << (c.passed ? "PASS " : "FAIL ") << c.name;
            if (!c.passed && !c.detail.empty()) out << " -- " << c.detail;
            out << "\n";
            passed += c.passed ? 1 : 0;
        }
        out << "scenario " << r.name << ": " << passed << "/" << r.checks.size() << " checks passed\n";
        return r.passed() ? kExitOk : kExitRejected;
    }
};

// ---- costs --------------------------------------------------------------------

struct CostsCmd {
    ConfigFlags config;
    CostFlags costs;
    std::uint64_t seed = 7;
    bool bound_only = false;

    void attach(CLI::App* app) {
        config.attach(app);
        costs.attach(app);
        app->add_option("--seed", seed, "Chain seed (POS_RELAY_SEED overrides)")->capture_default_str();
        app->add_flag("--bound-only", bound_only, "Only print the committee storage bound");
    }

    int run(std::ostream& out) const {
        const RelayConfig cfg = config.build();
        const std::uint64_t words = relay::committee_storage_words(cfg.committee_size);
        out << "committee_size: " << cfg.committee_size << "\n"
            << "committee_key_bytes: " << cfg.committee_size * bls::PublicKey::kSize << "\n"
            << "committee_storage_words: " << words << "\n"
            << "committee_storage_gas: " << relay::report_committee_storage_cost(cfg, costs.model)
            << "\n";
        if (bound_only) return kExitOk;

        ScenarioOptions o;
        o.config = cfg;
        o.seed = resolve_seed(seed);
        o.cost_model = costs.model;
        bool ok = true;
        for (std::string_view name : {"case1", "case2", "case3"}) {
            const ScenarioReport r = run_scenario(name, o);
            for (const auto& line : r.notes) out << name << " " << line << "\n";
            ok = ok && r.passed();
        }
        return ok ? kExitOk : kExitRejected;
    }
};

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
    CLI::App app{"Proof-of-stake chain relay: simulator, relay state files and scenarios", "pos-relay"};
    app.require_subcommand(1);

    SimulateCmd simulate;
    InitCmd init;
    CraftCmd craft;
    UpdateCmd update;
    ScenarioCmd scenario;
    CostsCmd costs;
    auto* simulate_app = app.add_subcommand("simulate", "Simulate a chain and export it");
    auto* init_app = app.add_subcommand("init", "Anchor a relay state at a chain slot");
    auto* craft_app = app.add_subcommand("craft", "Write an (optionally tampered) update file");
    auto* update_app = app.add_subcommand("update", "Apply an update file to a relay state");
    auto* scenario_app = app.add_subcommand("scenario", "Run an end-to-end scenario");
    auto* costs_app = app.add_subcommand("costs", "Report storage bound and per-case costs");
    simulate.attach(simulate_app);
    init.attach(init_app);
    craft.attach(craft_app);
    update.attach(update_app);
    scenario.attach(scenario_app);
    costs.attach(costs_app);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e, out, err);
        return rc == 0 ? kExitOk : kExitUsage;
    }

    try {
        if (simulate_app->parsed()) return simulate.run(out);
        if (init_app->parsed()) return init.run(out);
        if (craft_app->parsed()) return craft.run(out);
        if (update_app->parsed()) return update.run(out);
        if (scenario_app->parsed()) return scenario.run(out);
        if (costs_app->parsed()) return costs.run(out);
    } catch (const relay::RelayError& e) {
        out << "REJECTED " << relay::to_string(e.code()) << "\n";
        err << "error: " << e.what() << "\n";
        return kExitRejected;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
        return kExitUsage;
    }
    return kExitUsage;
}

}  // namespace posrelay::cli
