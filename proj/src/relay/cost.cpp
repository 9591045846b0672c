#include "posrelay/relay/cost.hpp"

namespace posrelay::relay {

namespace {

constexpr std::uint64_t kHeaderBytes = 112;
constexpr std::uint64_t kStateBytes = 208;
constexpr std::uint64_t kGindexBytes = 8;

std::uint64_t branch_bytes(const MerkleBranch& b) {
    return Digest::kSize * b.nodes.size() + kGindexBytes;
}

std::uint64_t committee_bytes(const SyncCommittee& c) {
    return bls::PublicKey::kSize * c.size();
}

}  // namespace

CostMeter& CostMeter::operator+=(const CostMeter& o) {
    sha256_calls += o.sha256_calls;
    pairing_checks += o.pairing_checks;
    point_additions += o.point_additions;
    storage_words_written += o.storage_words_written;
    storage_words_read += o.storage_words_read;
    payload_bytes += o.payload_bytes;
    return *this;
}

GasBreakdown modeled_gas(const CostMeter& meter, const CostModel& model) {
    GasBreakdown g;
    g.storage_write = meter.storage_words_written * model.gas_per_word_write;
    g.storage_read = meter.storage_words_read * model.gas_per_word_read;
    g.payload = meter.payload_bytes * model.gas_per_payload_byte;
    g.hashing = meter.sha256_calls * model.gas_per_sha256;
    g.pairing = meter.pairing_checks * model.gas_per_pairing;
    g.point_addition = meter.point_additions * model.gas_per_point_addition;
    return g;
}

std::uint64_t committee_storage_words(std::uint64_t n) {
    return (n * bls::PublicKey::kSize + Digest::kSize - 1) / Digest::kSize;
}

std::uint64_t report_committee_storage_cost(std::uint64_t committee_size, const CostModel& model) {
    return committee_storage_words(committee_size) * model.gas_per_word_write;
}

std::uint64_t report_committee_storage_cost(const RelayConfig& config, const CostModel& model) {
    return report_committee_storage_cost(config.committee_size, model);
}

std::uint64_t payload_size(const RelayUpdate& u) {
    std::uint64_t n = 2 * kHeaderBytes + kStateBytes + branch_bytes(u.finality_branch);
    n += (u.participation_bits.size() + 7) / 8;
    n += bls::Signature::kSize;
    if (u.next_committee) n += committee_bytes(*u.next_committee);
    if (u.next_committee_branch) n += branch_bytes(*u.next_committee_branch);
    if (u.resubmitted_committee) n += committee_bytes(*u.resubmitted_committee);
    return n;
}

}  // namespace posrelay::relay
