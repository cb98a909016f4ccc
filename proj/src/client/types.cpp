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

#include "pacore/client/types.hpp"

#include <cmath>

#include "pacore/errors.hpp"

namespace pacore::client {

void SamplingParams::validate() const {
  if (!(temperature >= 0.0) || !std::isfinite(temperature)) {
    throw ValidationError("temperature must be finite and non-negative");
  }
  if (!(top_p > 0.0 && top_p <= 1.0)) {
    throw ValidationError("top_p must be within (0, 1]");
  }
  if (top_k < 0) throw ValidationError("top_k must be non-negative");
  if (max_tokens < 1) throw ValidationError("max_tokens must be at least 1");
}

void EndpointConfig::validate() const {
  if (base_url.empty()) throw ValidationError("base_url must not be empty");
  if (max_in_flight < 1) {
    throw ValidationError("max_in_flight must be at least 1");
  }
  if (retry_budget < 0) {
    throw ValidationError("retry_budget must be non-negative");
  }
  if (timeout_ms < 1) throw ValidationError("timeout_ms must be positive");
}

const char* to_string(FinishReason r) {
  switch (r) {
    case FinishReason::Stop: return "stop";
    case FinishReason::Length: return "length";
    case FinishReason::Error: return "error";
  }
  return "error";
}

FinishReason finish_reason_from_string(const std::string& s) {
  if (s == "stop") return FinishReason::Stop;
  if (s == "length") return FinishReason::Length;
  if (s == "error") return FinishReason::Error;
  throw ValidationError("unknown finish reason: " + s);
}

const char* to_string(SolvabilityLabel label) {
  switch (label) {
    case SolvabilityLabel::AllAccept: return "all_accept";
    case SolvabilityLabel::SomeAccept: return "some_accept";
    case SolvabilityLabel::NoneAccept: return "none_accept";
  }
  return "none_accept";
}

SolvabilityLabel solvability_from_string(const std::string& s) {
  if (s == "all_accept") return SolvabilityLabel::AllAccept;
  if (s == "some_accept") return SolvabilityLabel::SomeAccept;
  if (s == "none_accept") return SolvabilityLabel::NoneAccept;
  throw ValidationError("unknown solvability label: " + s);
}

}  // namespace pacore::client
