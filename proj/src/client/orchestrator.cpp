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

#include "pacore/client/orchestrator.hpp"

#include <chrono>

#include "pacore/client/parallel.hpp"
#include "pacore/errors.hpp"
#include "pacore/rng.hpp"
#include "pacore/synthesis/synthesis.hpp"

namespace pacore::client {

std::int64_t system_epoch_ms() {
  return std::chrono::duration_cast<std::chrono::milliseconds>(
             std::chrono::system_clock::now().time_since_epoch())
      .count();
}

namespace {

Rollout error_rollout(const RolloutContext& ctx, std::uint64_t seed) {
  Rollout r;
  r.prompt_id = ctx.prompt_id;
  r.finish_reason = FinishReason::Error;
  r.seed = seed;
  r.created_at = ctx.now();
  return r;
}

Rollout one_request(const ChatClient& client,
                    const std::vector<ChatMessage>& messages,
                    const SamplingParams& sp, const RolloutContext& ctx,
                    std::uint64_t seed) {
  if (ctx.cancelled()) return error_rollout(ctx, seed);
  try {
    const CompletionResult res = client.complete(messages, sp, seed);
    Rollout r;
    r.prompt_id = ctx.prompt_id;
    r.text = res.text;
    r.completion_tokens = res.completion_tokens;
    r.finish_reason = res.finish_reason;
    r.seed = seed;
    r.created_at = ctx.now();
    r.tokens_estimated = res.tokens_estimated;
    return r;
  } catch (const TransportError&) {
    return error_rollout(ctx, seed);
  }
}

}  // namespace

std::vector<Rollout> sample_rollouts(const std::vector<ChatMessage>& prompt,
                                     int n, const EndpointConfig& ep,
                                     const SamplingParams& sp,
                                     const RolloutContext& ctx) {
  if (n < 1) throw ValidationError("rollout count must be at least 1");
  if (prompt.empty()) throw ValidationError("prompt has no messages");
  ep.validate();
  sp.validate();
  const ChatClient client(ep);
  std::vector<Rollout> out(static_cast<std::size_t>(n));
  run_indexed(out.size(), ep.max_in_flight, [&](std::size_t i) {
    const std::uint64_t seed = derive_seed(ctx.base_seed, ctx.prompt_id, i);
    out[i] = one_request(client, prompt, sp, ctx, seed);
  });
  return out;
}

Rollout run_sere(const std::vector<ChatMessage>& prompt,
                 const EndpointConfig& ep, const RolloutContext& ctx,
                 const SamplingParams* sp_override) {
  const SamplingParams sp = sp_override ? *sp_override : SamplingParams{};
  return sample_rollouts(prompt, 1, ep, sp, ctx).front();
}

PacoreResult run_pacore(const std::vector<ChatMessage>& prompt,
                        const EndpointConfig& ep, int n,
                        const RolloutContext& ctx,
                        const SamplingParams* rollout_sp,
                        const SamplingParams* final_sp) {
  if (n < 1) throw ValidationError("rollout count must be at least 1");
  if (prompt.empty()) throw ValidationError("prompt has no messages");

  PacoreResult result;
  const SamplingParams stage_sp = rollout_sp ? *rollout_sp : SamplingParams{};
  result.rollouts = sample_rollouts(prompt, n, ep, stage_sp, ctx);

  MessagePoolEntry entry;
  entry.prompt_id = ctx.prompt_id;
  entry.rollouts = result.rollouts;
  const std::uint64_t ref_seed =
      derive_seed(ctx.base_seed, "refs:" + ctx.prompt_id, 0);
  std::vector<std::string> refs = synthesis::sample_references(
      entry, synthesis::kMinSynthesisRefs, synthesis::kMaxSynthesisRefs,
      ref_seed);

  // the latest user turn is the problem slot; earlier history stays intact
  std::vector<ChatMessage> final_messages = prompt;
  synthesis::SynthesisRequest req;
  req.original_prompt = final_messages.back().content;
  req.references = std::move(refs);
  result.synthesis_prompt = synthesis::serialize_synthesis_prompt(req);
  result.bypassed = req.references.empty();
  final_messages.back().content = result.synthesis_prompt;

  // same sampling parameters as the rollouts unless overridden, except the
  // raised token budget for the long synthesis pass
  SamplingParams fsp = final_sp ? *final_sp : stage_sp;
  if (!final_sp) fsp.max_tokens = kPacoreFinalMaxTokens;

  const ChatClient client(ep);
  const std::uint64_t final_seed =
      derive_seed(ctx.base_seed, ctx.prompt_id, static_cast<std::uint64_t>(n));
  result.final = one_request(client, final_messages, fsp, ctx, final_seed);
  return result;
}

}  // namespace pacore::client
