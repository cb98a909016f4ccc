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
#include <string>
#include <vector>

#include "pacore/client/types.hpp"

namespace pacore::client {

struct CompletionResult {
  std::string text;
  long completion_tokens = 0;
  bool tokens_estimated = false;  // usage field absent, whitespace fallback
  FinishReason finish_reason = FinishReason::Stop;
  double latency_ms = 0.0;
};

struct ClientTelemetry {
  std::atomic<long> requests{0};
  std::atomic<long> retries{0};
  std::atomic<long> usage_fallbacks{0};
};

/// Chat-completion client. POSTs {base_url}/chat/completions with the body
/// produced by request_body below; retries transport failures and 5xx with
/// exponential backoff up to the configured budget, and never retries other
/// statuses or malformed bodies. Safe to call concurrently (each call uses its
/// own connection).
class ChatClient {
 public:
  explicit ChatClient(EndpointConfig config);

  /// Throws TransportError once the retry budget is exhausted or on a
  /// non-retryable failure. The bearer token is read from config.api_key_env
  /// at call time; an empty or unset variable sends no Authorization header.
  CompletionResult complete(const std::vector<ChatMessage>& messages,
                            const SamplingParams& params,
                            std::uint64_t seed) const;

  /// The exact request body for (model, messages, params, seed). Keys are
  /// emitted in sorted order, so identical inputs give identical bytes; the
  /// determinism tests compare these against the mock's recorded bodies.
  static std::string request_body(const std::string& model,
                                  const std::vector<ChatMessage>& messages,
                                  const SamplingParams& params,
                                  std::uint64_t seed);

  const EndpointConfig& config() const { return config_; }
  ClientTelemetry& telemetry() const { return telemetry_; }

  /// First backoff delay; doubles per retry. Tests shrink it.
  void set_backoff_base_ms(long ms) { backoff_base_ms_ = ms; }

 private:
  EndpointConfig config_;
  std::string host_;         // scheme://authority
  std::string path_prefix_;  // leading path from base_url, usually empty
  long backoff_base_ms_ = 50;
  mutable ClientTelemetry telemetry_;
};

}  // namespace pacore::client
