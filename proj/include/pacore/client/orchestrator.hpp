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

#include <atomic>
#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "pacore/client/chat_client.hpp"
#include "pacore/client/types.hpp"

namespace pacore::client {

using ClockFn = std::function<std::int64_t()>;

std::int64_t system_epoch_ms();

// Seed and identity context for a batch of requests. Rollout index i derives
// its seed as derive_seed(base_seed, prompt_id, i), so a rerun against a
// seed-honoring endpoint replays identical requests in any interleaving.
struct RolloutContext {
  std::string prompt_id = "prompt";
  std::uint64_t base_seed = 0;
  ClockFn clock;                         // defaults to system_epoch_ms
  const std::atomic<bool>* cancel = nullptr;  // optional; checked before each
                                              // request is issued

  std::int64_t now() const { return clock ? clock() : system_epoch_ms(); }
  bool cancelled() const {
    return cancel && cancel->load(std::memory_order_acquire);
  }
};

/// n rollouts in stable index order regardless of completion order. Transport
/// failures past the retry budget become finish_reason Error entries so the
/// batch stays index-aligned; only configuration problems throw.
std::vector<Rollout> sample_rollouts(const std::vector<ChatMessage>& prompt,
                                     int n, const EndpointConfig& ep,
                                     const SamplingParams& sp,
                                     const RolloutContext& ctx);

/// One rollout under the default single-pass sampling parameters
/// (temperature 1.0, top_p 1.0, top_k 0, 65,536 tokens); sp_override
/// substitutes them wholesale when given.
Rollout run_sere(const std::vector<ChatMessage>& prompt,
                 const EndpointConfig& ep, const RolloutContext& ctx,
                 const SamplingParams* sp_override = nullptr);

struct PacoreResult {
  Rollout final;                  // the synthesized answer
  std::vector<Rollout> rollouts;  // the n first-stage rollouts, index order
  std::string synthesis_prompt;   // exact serialized final prompt
  bool bypassed = false;          // no usable references; original prompt sent
};

/// The coordinated pipeline: n parallel rollouts, reference sampling, one
/// synthesis call with a 131,072-token budget. Exactly n + 1 endpoint calls
/// (plus retries). When every rollout failed, the reference set is empty and
/// the final call carries the original prompt unchanged.
PacoreResult run_pacore(const std::vector<ChatMessage>& prompt,
                        const EndpointConfig& ep, int n,
                        const RolloutContext& ctx,
                        const SamplingParams* rollout_sp = nullptr,
                        const SamplingParams* final_sp = nullptr);

}  // namespace pacore::client
