#pragma once

// On-disk layout of a simulated chain:
//   <dir>/chain.json             config, seed, every slot's header and state
//   <dir>/committees/<p>.json    period, root, member indices, pubkeys
//   <dir>/secrets.json           chain seed and per-validator key seeds

#include <filesystem>

#include "posrelay/sim/chain.hpp"

namespace posrelay::sim {

void export_chain(const SimChain& chain, const std::filesystem::path& dir);

/// Reads the files back without checking any root, so a tampered export is
/// only caught where the relay checks it. Keys are rederived from the seeds
/// when `with_secrets` is set; otherwise `validators` stays empty.
/// Throws relay::codec::CodecError on missing files or malformed content.
SimChain import_chain(const std::filesystem::path& dir, bool with_secrets);

}  // namespace posrelay::sim
