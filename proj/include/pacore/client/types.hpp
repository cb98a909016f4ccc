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
#include <optional>
#include <string>
#include <vector>

namespace pacore::client {

struct ChatMessage {
  std::string role;
  std::string content;
};

// Defaults are the single-pass reasoning configuration: temperature 1.0,
// top_p 1.0, top_k disabled, 65,536-token budget. The coordinated final call
// raises the budget to 131,072.
struct SamplingParams {
  double temperature = 1.0;
  double top_p = 1.0;
  int top_k = 0;
  long max_tokens = 65536;

  void validate() const;
};

inline constexpr long kSereMaxTokens = 65536;
inline constexpr long kPacoreFinalMaxTokens = 131072;
inline constexpr int kPacoreDefaultRollouts = 16;

struct EndpointConfig {
  std::string base_url;           // e.g. http://127.0.0.1:8080
  std::string model_name;
  std::string api_key_env;        // env var holding the bearer token; may be ""
  int max_in_flight = 4;
  int retry_budget = 3;           // transport/5xx retries per request
  long timeout_ms = 30000;

  void validate() const;
};

enum class FinishReason { Stop, Length, Error };

const char* to_string(FinishReason r);
FinishReason finish_reason_from_string(const std::string& s);

struct Rollout {
  std::string prompt_id;
  std::string text;
  std::optional<std::string> extracted_answer;
  std::optional<double> reward;
  long completion_tokens = 0;
  FinishReason finish_reason = FinishReason::Stop;
  std::uint64_t seed = 0;
  std::int64_t created_at = 0;     // epoch milliseconds
  bool tokens_estimated = false;   // endpoint omitted usage; whitespace fallback

  bool operator==(const Rollout&) const = default;
};

enum class SolvabilityLabel { AllAccept, SomeAccept, NoneAccept };

const char* to_string(SolvabilityLabel label);
SolvabilityLabel solvability_from_string(const std::string& s);

struct MessagePoolEntry {
  std::string prompt_id;
  std::vector<Rollout> rollouts;
  SolvabilityLabel label = SolvabilityLabel::NoneAccept;

  bool operator==(const MessagePoolEntry&) const = default;
};

}  // namespace pacore::client
