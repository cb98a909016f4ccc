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

#include <functional>
#include <string>
#include <string_view>
#include <vector>

namespace pacore::reward {

struct JudgeEndpoint;

/// Fraction of the response's script-classified characters whose script class
/// (Latin, CJK, or other) differs from the question's dominant class. 0 when
/// either side has no classifiable characters. This is a script heuristic,
/// not a language identifier; unclassified characters (digits, punctuation,
/// symbols) are ignored.
double language_consistency_penalty(std::string_view question,
                                    std::string_view response);

/// 1 when every citation token in the response appears in allowed_refs,
/// else 0. Tokens are http(s) URLs (trailing sentence punctuation stripped)
/// and numeric bracket references, each matched as its canonical "[n]" form.
/// A response with no citation tokens passes.
double citation_gate(std::string_view response,
                     const std::vector<std::string>& allowed_refs);

/// (product of gates) * max(0, base - sum of penalties). base and penalties
/// must lie in [0,1]; gates must be exactly 0 or 1. Result is in [0,1].
double compose_reward(double base, const std::vector<double>& penalties,
                      const std::vector<double>& gates);

enum class PenaltyKind { Soft, Gate };

struct PenaltyContext {
  std::string_view question;
  std::string_view response;
  const std::vector<std::string>* allowed_refs = nullptr;
  const JudgeEndpoint* judge = nullptr;  // optional; judge-backed penalties
                                         // return 0 without one
};

struct PenaltyEntry {
  std::string name;
  PenaltyKind kind = PenaltyKind::Soft;
  std::function<double(const PenaltyContext&)> fn;
};

/// Registry keyed by the identifiers a reward spec's penalty_set may list.
class PenaltyRegistry {
 public:
  void add(PenaltyEntry entry);
  const PenaltyEntry* find(const std::string& name) const;
  const std::vector<PenaltyEntry>& entries() const { return entries_; }

 private:
  std::vector<PenaltyEntry> entries_;
};

/// Built-in identifiers: "language_consistency" (soft), "citation" (gate),
/// and "epistemic_calibration" (soft, judge-backed; no accuracy claim is made
/// for its default, and it contributes 0 without a judge).
const PenaltyRegistry& default_penalty_registry();

}  // namespace pacore::reward
