#pragma once

// Canonical JSON for relay objects: fixed key order, 0x-hex byte strings,
// integers as JSON numbers. Participation bits are a string of '0'/'1'.

#include <stdexcept>
#include <string>

#include <nlohmann/json.hpp>

#include "posrelay/relay/types.hpp"

namespace posrelay::relay::codec {

using Json = nlohmann::ordered_json;

class CodecError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

Json to_json(const BeaconBlockHeader& h);
Json to_json(const SimBeaconState& s);
Json to_json(const SyncCommittee& c);
Json to_json(const MerkleBranch& b);
Json to_json(const RelayConfig& c);
Json to_json(const RelayUpdate& u);
Json to_json(const RelayState& s);
Json to_json(const Snapshot& s);
Json bits_to_json(const std::vector<bool>& bits);

template <class T>
T decode(const Json& j);

template <> BeaconBlockHeader decode<BeaconBlockHeader>(const Json& j);
template <> SimBeaconState decode<SimBeaconState>(const Json& j);
template <> SyncCommittee decode<SyncCommittee>(const Json& j);
template <> MerkleBranch decode<MerkleBranch>(const Json& j);
template <> RelayConfig decode<RelayConfig>(const Json& j);
template <> RelayUpdate decode<RelayUpdate>(const Json& j);
template <> RelayState decode<RelayState>(const Json& j);
template <> Snapshot decode<Snapshot>(const Json& j);
template <> std::vector<bool> decode<std::vector<bool>>(const Json& j);

/// Two-space indented text with a trailing newline.
std::string dump(const Json& j);

/// Throws CodecError on malformed JSON.
Json parse(const std::string& text);

std::string serialize(const RelayState& s);

}  // namespace posrelay::relay::codec
