// Copyright 2026 the pacore authors
//
// Licensed under the Apache License, Version 2.0 (the "License"); you may not
// use this file except in compliance with the License. You may obtain a copy of
// the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS, WITHOUT
// WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied. See the
// License for the specific language governing permissions and limitations under
// the License.

#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "pacore/client/types.hpp"

namespace pacore::synthesis {

struct SynthesisRequest {
  std::string original_prompt;
  std::vector<std::string> references;  // order preserved from sampling
};

inline constexpr int kMinSynthesisRefs = 16;
inline constexpr int kMaxSynthesisRefs = 24;

/// The reference-serialization template, byte-identical to
/// templates/synthesis_v1.txt (a test enforces this). The {{#references}}
/// block repeats once per reference with 1-based {{index}}; prompt bytes
/// drive model behavior, so the layout is frozen.
const std::string& builtin_synthesis_template();

/// Renders `tpl` (same marker grammar as the builtin) for the request.
/// Throws ConfigError when the template lacks the reference block markers.
std::string render_synthesis_template(const std::string& tpl,
                                      const SynthesisRequest& req);

/// Builds the coordinated-reasoning context. With no references the template
/// is bypassed entirely and the original prompt is returned unchanged.
std::string serialize_synthesis_prompt(const SynthesisRequest& req);

/// Draws k uniform in [min_k, max_k], then selects min(k, available)
/// non-failed rollout texts without replacement, keeping pool order.
/// Deterministic for a fixed seed. All-failed entries give an empty result.
std::vector<std::string> sample_references(const client::MessagePoolEntry& entry,
                                           int min_k, int max_k,
                                           std::uint64_t seed);

}  // namespace pacore::synthesis
