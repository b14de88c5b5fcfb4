// Copyright 2026 The ordrec Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>

#include "ordrec/model.hpp"

namespace ordrec {

/// Everything needed to rebuild the forward pass around a trained table.
struct CheckpointHeader {
  std::size_t n_users = 0;
  std::size_t n_items = 0;
  std::size_t d = 0;
  int order_count = 0;
  Mode mode = Mode::full;
  double tau = 0.5;
  bool hard = false;
  HiddenMode hidden = HiddenMode::prior;
  std::optional<std::size_t> cap;
  bool binary_values = false;
  std::string config_hash;
  std::uint64_t seed = 0;
  int best_epoch = 0;
};

struct Checkpoint {
  CheckpointHeader header;
  EmbeddingTable embeddings;
};

/// Writes `<stem>.json` (header) and `<stem>.bin` (row-major little-endian
/// float64 payload of X_0). `path` names the JSON file.
void save_checkpoint(const Checkpoint& checkpoint, const std::filesystem::path& path);
Checkpoint load_checkpoint(const std::filesystem::path& path);

}  // namespace ordrec
