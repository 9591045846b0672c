#include "posrelay/relay/codec.hpp"

namespace posrelay::relay::codec {

namespace {

const Json& field(const Json& j, const char* key) {
    if (!j.is_object()) throw CodecError(std::string("expected an object holding '") + key + "'");
    const auto it = j.find(key);
    if (it == j.end()) throw CodecError(std::string("missing field '") + key + "'");
    return *it;
}

std::uint64_t u64(const Json& j, const char* key) {
    const Json& v = field(j, key);
    if (!v.is_number_unsigned() && !(v.is_number_integer() && v.get<std::int64_t>() >= 0)) {
        throw CodecError(std::string("field '") + key + "' must be a non-negative integer");
    }
    return v.get<std::uint64_t>();
}

std::string str(const Json& j, const char* key) {
    const Json& v = field(j, key);
    if (!v.is_string()) throw CodecError(std::string("field '") + key + "' must be a string");
    return v.get<std::string>();
}

Digest digest(const Json& j, const char* key) {
    try {
        return Digest::from_hex(str(j, key));
    } catch (const HexError& e) {
        throw CodecError(std::string("field '") + key + "': " + e.what());
    }
}

bls::PublicKey pubkey(const Json& v) {
    if (!v.is_string()) throw CodecError("public key must be a hex string");
    try {
        return bls::PublicKey::from_hex(v.get<std::string>());
    } catch (const HexError& e) {
        throw CodecError(std::string("public key: ") + e.what());
    }
}

Json committee_material(const CommitteeMaterial& m) {
    Json j;
    j["root"] = m.root.to_hex();
    if (m.keys) j["pubkeys"] = to_json(*m.keys)["pubkeys"];
    return j;
}

CommitteeMaterial decode_material(const Json& j, StorageMode mode) {
    CommitteeMaterial m;
    m.root = digest(j, "root");
    const bool has_keys = j.contains("pubkeys");
    if (mode == StorageMode::Store) {
        if (!has_keys) throw CodecError("STORE state must carry committee keys");
        m.keys = decode<SyncCommittee>(j);
        if (m.keys->root() != m.root) throw CodecError("stored keys do not match stored root");
    } else if (has_keys) {
        throw CodecError("NO-STORE state must not carry committee keys");
    }
    return m;
}

}  // namespace

Json to_json(const BeaconBlockHeader& h) {
    Json j;
    j["slot"] = h.slot;
    j["proposer_index"] = h.proposer_index;
    j["parent_root"] = h.parent_root.to_hex();
    j["state_root"] = h.state_root.to_hex();
    j["body_root"] = h.body_root.to_hex();
    return j;
}

Json to_json(const SimBeaconState& s) {
    Json j;
    j["slot"] = s.slot;
    j["finalized_root"] = s.finalized_root.to_hex();
    j["finalized_slot"] = s.finalized_slot;
    j["current_committee_root"] = s.current_committee_root.to_hex();
    j["next_committee_root"] = s.next_committee_root.to_hex();
    j["history_root"] = s.history_root.to_hex();
    j["reserved_a"] = s.reserved_a.to_hex();
    j["reserved_b"] = s.reserved_b.to_hex();
    return j;
}

Json to_json(const SyncCommittee& c) {
    Json keys = Json::array();
    for (const auto& pk : c.pubkeys) keys.push_back(pk.to_hex());
    Json j;
    j["pubkeys"] = std::move(keys);
    return j;
}

Json to_json(const MerkleBranch& b) {
    Json nodes = Json::array();
    for (const auto& n : b.nodes) nodes.push_back(n.to_hex());
    Json j;
    j["gindex"] = b.gindex;
    j["nodes"] = std::move(nodes);
    return j;
}

Json to_json(const RelayConfig& c) {
    Json j;
    j["slots_per_epoch"] = c.slots_per_epoch;
    j["epochs_per_period"] = c.epochs_per_period;
    j["committee_size"] = c.committee_size;
    j["domain"] = c.domain.to_hex();
    j["finalized_root_gindex"] = c.finalized_root_gindex;
    j["current_committee_gindex"] = c.current_committee_gindex;
    j["next_committee_gindex"] = c.next_committee_gindex;
    j["trusting_period_slots"] = c.trusting_period_slots ? Json(*c.trusting_period_slots) : Json();
    return j;
}

Json bits_to_json(const std::vector<bool>& bits) {
    std::string s;
    s.reserve(bits.size());
    for (bool b : bits) s.push_back(b ? '1' : '0');
    return s;
}

Json to_json(const RelayUpdate& u) {
    Json j;
    j["finalized_header"] = to_json(u.finalized_header);
    j["finalized_state"] = to_json(u.finalized_state);
    j["latest_header"] = to_json(u.latest_header);
    j["finality_branch"] = to_json(u.finality_branch);
    j["participation_bits"] = bits_to_json(u.participation_bits);
    j["aggregate_signature"] = u.aggregate_signature.to_hex();
    j["next_committee"] = u.next_committee ? to_json(*u.next_committee) : Json();
    j["next_committee_branch"] = u.next_committee_branch ? to_json(*u.next_committee_branch) : Json();
    j["resubmitted_committee"] =
        u.resubmitted_committee ? to_json(*u.resubmitted_committee) : Json();
    return j;
}

Json to_json(const RelayState& s) {
    Json j;
    j["mode"] = to_string(s.mode);
    j["config"] = to_json(s.config);
    j["current_header"] = to_json(s.current_header);
    j["trusted_committee"] = committee_material(s.trusted);
    j["trusted_next_committee"] = committee_material(s.trusted_next);
    return j;
}

Json to_json(const Snapshot& s) {
    Json j;
    j["header"] = to_json(s.header);
    j["state"] = to_json(s.state);
    j["current_committee"] = to_json(s.current_committee);
    j["next_committee"] = to_json(s.next_committee);
    return j;
}

template <>
BeaconBlockHeader decode<BeaconBlockHeader>(const Json& j) {
    BeaconBlockHeader h;
    h.slot = u64(j, "slot");
    h.proposer_index = u64(j, "proposer_index");
    h.parent_root = digest(j, "parent_root");
    h.state_root = digest(j, "state_root");
    h.body_root = digest(j, "body_root");
    return h;
}

template <>
SimBeaconState decode<SimBeaconState>(const Json& j) {
    SimBeaconState s;
    s.slot = u64(j, "slot");
    s.finalized_root = digest(j, "finalized_root");
    s.finalized_slot = u64(j, "finalized_slot");
    s.current_committee_root = digest(j, "current_committee_root");
    s.next_committee_root = digest(j, "next_committee_root");
    s.history_root = digest(j, "history_root");
    s.reserved_a = digest(j, "reserved_a");
    s.reserved_b = digest(j, "reserved_b");
    return s;
}

template <>
SyncCommittee decode<SyncCommittee>(const Json& j) {
    const Json& keys = field(j, "pubkeys");
    if (!keys.is_array()) throw CodecError("'pubkeys' must be an array");
    SyncCommittee c;
    c.pubkeys.reserve(keys.size());
    for (const auto& k : keys) c.pubkeys.push_back(pubkey(k));
    return c;
}

template <>
MerkleBranch decode<MerkleBranch>(const Json& j) {
    MerkleBranch b;
    b.gindex = u64(j, "gindex");
    const Json& nodes = field(j, "nodes");
    if (!nodes.is_array()) throw CodecError("'nodes' must be an array");
    for (const auto& n : nodes) {
        if (!n.is_string()) throw CodecError("branch node must be a hex string");
        try {
            b.nodes.push_back(Digest::from_hex(n.get<std::string>()));
        } catch (const HexError& e) {
            throw CodecError(std::string("branch node: ") + e.what());
        }
    }
    return b;
}

template <>
RelayConfig decode<RelayConfig>(const Json& j) {
    RelayConfig c;
    c.slots_per_epoch = u64(j, "slots_per_epoch");
    c.epochs_per_period = u64(j, "epochs_per_period");
    c.committee_size = u64(j, "committee_size");
    c.domain = digest(j, "domain");
    c.finalized_root_gindex = u64(j, "finalized_root_gindex");
    c.current_committee_gindex = u64(j, "current_committee_gindex");
    c.next_committee_gindex = u64(j, "next_committee_gindex");
    if (j.contains("trusting_period_slots") && !j["trusting_period_slots"].is_null()) {
        c.trusting_period_slots = u64(j, "trusting_period_slots");
    }
    try {
        c.validate();
    } catch (const std::invalid_argument& e) {
        throw CodecError(std::string("config: ") + e.what());
    }
    return c;
}

template <>
std::vector<bool> decode<std::vector<bool>>(const Json& j) {
    if (!j.is_string()) throw CodecError("participation bits must be a string of 0/1");
    std::vector<bool> bits;
    for (char ch : j.get<std::string>()) {
        if (ch != '0' && ch != '1') throw CodecError("participation bits must be 0 or 1");
        bits.push_back(ch == '1');
    }
    return bits;
}

template <>
RelayUpdate decode<RelayUpdate>(const Json& j) {
    RelayUpdate u;
    u.finalized_header = decode<BeaconBlockHeader>(field(j, "finalized_header"));
    u.finalized_state = decode<SimBeaconState>(field(j, "finalized_state"));
    u.latest_header = decode<BeaconBlockHeader>(field(j, "latest_header"));
    u.finality_branch = decode<MerkleBranch>(field(j, "finality_branch"));
    u.participation_bits = decode<std::vector<bool>>(field(j, "participation_bits"));
    try {
        u.aggregate_signature = bls::Signature::from_hex(str(j, "aggregate_signature"));
    } catch (const HexError& e) {
        throw CodecError(std::string("aggregate_signature: ") + e.what());
    }
    const auto optional_field = [&](const char* key) -> const Json* {
        const auto it = j.find(key);
        return it == j.end() || it->is_null() ? nullptr : &*it;
    };
    if (const Json* v = optional_field("next_committee")) u.next_committee = decode<SyncCommittee>(*v);
    if (const Json* v = optional_field("next_committee_branch")) {
        u.next_committee_branch = decode<MerkleBranch>(*v);
    }
    if (const Json* v = optional_field("resubmitted_committee")) {
        u.resubmitted_committee = decode<SyncCommittee>(*v);
    }
    return u;
}

template <>
RelayState decode<RelayState>(const Json& j) {
    RelayState s;
    const std::string mode = str(j, "mode");
    if (mode == "STORE") s.mode = StorageMode::Store;
    else if (mode == "NO-STORE") s.mode = StorageMode::NoStore;
    else throw CodecError("unknown mode '" + mode + "'");
    s.config = decode<RelayConfig>(field(j, "config"));
    s.current_header = decode<BeaconBlockHeader>(field(j, "current_header"));
    s.trusted = decode_material(field(j, "trusted_committee"), s.mode);
    s.trusted_next = decode_material(field(j, "trusted_next_committee"), s.mode);
    return s;
}

template <>
Snapshot decode<Snapshot>(const Json& j) {
    Snapshot s;
    s.header = decode<BeaconBlockHeader>(field(j, "header"));
    s.state = decode<SimBeaconState>(field(j, "state"));
    s.current_committee = decode<SyncCommittee>(field(j, "current_committee"));
    s.next_committee = decode<SyncCommittee>(field(j, "next_committee"));
    return s;
}

std::string dump(const Json& j) { return j.dump(2) + "\n"; }

Json parse(const std::string& text) {
    try {
        return Json::parse(text);
    } catch (const nlohmann::json::exception& e) {
        throw CodecError(std::string("invalid JSON: ") + e.what());
    }
}

std::string serialize(const RelayState& s) { return dump(to_json(s)); }

}  // namespace posrelay::relay::codec
