#pragma once

#include <string>
#include <vector>

#include "agenda/core/jsonl.hpp"
#include "agenda/core/rng.hpp"
#include "agenda/model/state.hpp"

namespace agenda::model {

// Versioned state file: params, vocabulary fingerprint, topic count tables,
// assignments and the RNG stream position. Loading replays the assignments
// against the provided documents and verifies that every stored count table
// is reproduced exactly; any mismatch is an InvariantError.

struct SavedStateInfo {
  ModelParams params;
  std::uint32_t vocab_size = 0;
  int seed_topic_count = 0;
  std::uint64_t vocab_hash = 0;
  int completed_sweeps = 0;
};

void save_model_state(const std::string& path, const ModelState& state,
                      const Rng& rng, int completed_sweeps,
                      std::uint64_t vocab_hash, const FileHeader& header);

struct LoadedState {
  ModelState state;
  Rng rng;
  SavedStateInfo info;
};

LoadedState load_model_state(const std::string& path,
                             std::vector<text::TokenDocument> docs);

// Reads only the header block (for tools that need params without the docs).
SavedStateInfo read_state_info(const std::string& path,
                               std::optional<FileHeader>* header = nullptr);

}  // namespace agenda::model
