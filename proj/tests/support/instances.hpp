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
#include <memory>
#include <vector>

#include "ordrec/data.hpp"
#include "ordrec/model.hpp"
#include "ordrec/train.hpp"

namespace oracle {

/// A small random training problem with frozen Gumbel noise.
struct GradientInstance {
  ordrec::InteractionSet data;
  std::unique_ptr<ordrec::ModelContext> ctx;
  ordrec::EmbeddingTable emb;
  std::vector<ordrec::BprTriple> batch;
  ordrec::ForwardOptions options;
  ordrec::LossSettings settings;
};

/// Random bipartite graph without isolated nodes (at most 50 nodes), L = 2,
/// d <= 8, embeddings of scale 0.5, beta = 0.4, lambda = 1e-4.
GradientInstance make_gradient_instance(std::uint64_t seed, ordrec::Mode mode = ordrec::Mode::full,
                                        ordrec::HiddenMode hidden = ordrec::HiddenMode::prior);

struct GradientCheck {
  double max_relative_error = 0.0;
  std::size_t entries_checked = 0;
  std::size_t worst_entry = 0;
};

/// Analytic gradient vs central differences with step h over every entry
/// whose analytic magnitude exceeds 1e-8.
GradientCheck check_gradient(const GradientInstance& inst, double h = 1e-5);

}  // namespace oracle
