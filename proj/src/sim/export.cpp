#include "posrelay/sim/export.hpp"

#include <fstream>
#include <sstream>

#include "posrelay/relay/codec.hpp"

namespace posrelay::sim {

namespace codec = relay::codec;
using codec::Json;

namespace {

void write_file(const std::filesystem::path& path, const Json& j) {
    std::ofstream out(path);
    if (!out) throw codec::CodecError("cannot write " + path.string());
    out << codec::dump(j);
}

Json read_file(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw codec::CodecError("cannot read " + path.string());
    std::ostringstream ss;
    ss << in.rdbuf();
    return codec::parse(ss.str());
}

std::filesystem::path committee_path(const std::filesystem::path& dir, std::uint64_t period) {
    return dir / "committees" / (std::to_string(period) + ".json");
}

}  // namespace

void export_chain(const SimChain& chain, const std::filesystem::path& dir) {
    std::filesystem::create_directories(dir / "committees");

    Json slots = Json::array();
    for (const auto& e : chain.slots) {
        slots.push_back(Json{{"header", codec::to_json(e.header)}, {"state", codec::to_json(e.state)}});
    }
    write_file(dir / "chain.json", Json{{"seed", chain.seed},
                                        {"config", codec::to_json(chain.config)},
                                        {"num_periods", chain.num_periods},
                                        {"validator_count", chain.validator_count},
                                        {"committee_count", chain.committees.size()},
                                        {"slots", std::move(slots)}});

    for (const auto& pc : chain.committees) {
        write_file(committee_path(dir, pc.period),
                   Json{{"period", pc.period},
                        {"root", pc.root.to_hex()},
                        {"members", pc.members},
                        {"pubkeys", codec::to_json(pc.committee).at("pubkeys")}});
    }

    Json seeds = Json::array();
    for (const auto& v : chain.validators) seeds.push_back(to_hex(v.seed));
    write_file(dir / "secrets.json", Json{{"seed", chain.seed}, {"validator_seeds", std::move(seeds)}});
}

SimChain import_chain(const std::filesystem::path& dir, bool with_secrets) {
    const Json j = read_file(dir / "chain.json");
    SimChain chain;
    try {
        chain.seed = j.at("seed").get<std::uint64_t>();
        chain.config = codec::decode<RelayConfig>(j.at("config"));
        chain.num_periods = j.at("num_periods").get<std::uint64_t>();
        chain.validator_count = j.at("validator_count").get<std::uint64_t>();
        const auto committee_count = j.at("committee_count").get<std::uint64_t>();
        for (const auto& s : j.at("slots")) {
            SlotEntry e;
            e.header = codec::decode<BeaconBlockHeader>(s.at("header"));
            e.state = codec::decode<SimBeaconState>(s.at("state"));
            e.header_root = e.header.hash_tree_root();
            chain.slots.push_back(std::move(e));
        }
        for (std::uint64_t p = 0; p < committee_count; ++p) {
            const Json c = read_file(committee_path(dir, p));
            PeriodCommittee pc;
            pc.period = c.at("period").get<std::uint64_t>();
            if (pc.period != p) throw codec::CodecError("committee file period mismatch");
            pc.root = Digest::from_hex(c.at("root").get<std::string>());
            pc.members = c.at("members").get<std::vector<std::uint64_t>>();
            pc.committee = codec::decode<SyncCommittee>(Json{{"pubkeys", c.at("pubkeys")}});
            chain.committees.push_back(std::move(pc));
        }
        if (with_secrets) {
            const Json s = read_file(dir / "secrets.json");
            if (s.at("seed").get<std::uint64_t>() != chain.seed) {
                throw codec::CodecError("secrets.json belongs to another chain");
            }
            const auto& seeds = s.at("validator_seeds");
            if (seeds.size() != chain.validator_count) {
                throw codec::CodecError("secrets.json has the wrong number of validators");
            }
            for (const auto& h : seeds) {
                const auto seed = from_hex_fixed<32>(h.get<std::string>());
                chain.validators.push_back(Validator{seed, bls::keygen(seed)});
            }
        }
    } catch (const Json::exception& e) {
        throw codec::CodecError(std::string("chain export: ") + e.what());
    } catch (const std::invalid_argument& e) {
        throw codec::CodecError(std::string("chain export: ") + e.what());
    }
    return chain;
}

}  // namespace posrelay::sim
