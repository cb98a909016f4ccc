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

#include <string>
#include <vector>

#include "pacore/reward/extract.hpp"

namespace pacore::reward {

enum class VerifierKind {
  ExactMatch,
  NumericMatch,
  ModelJudge,
  IoUGate,
  PointDecay,
};

const char* to_string(VerifierKind v);
VerifierKind verifier_kind_from_string(const std::string& s);

// Per-task scoring recipe: how the answer is pulled out, which verifier sets
// the base reward, and which penalty identifiers apply on top. Makes the
// string-vs-judge verification choice explicit per task.
struct RewardSpec {
  ExtractionMode extraction = ExtractionMode::Raw;
  VerifierKind verifier = VerifierKind::ExactMatch;
  std::vector<std::string> penalty_set;
  int judge_passes = 1;
  double iou_gate = 0.0;    // IoUGate only; 0 disables the gate
  double tau_frac = 0.1;    // PointDecay decay scale, fraction of diagonal
  double cut_frac = 0.5;    // PointDecay hard cutoff, fraction of diagonal
  std::vector<std::string> allowed_refs;  // citation gate whitelist

  void validate() const;
  bool operator==(const RewardSpec&) const = default;
};

/// JSON round-trip. Absent fields take the defaults above; geometry verifiers
/// reject inconsistent decay parameters at validate().
std::string reward_spec_to_json(const RewardSpec& spec);
RewardSpec reward_spec_from_json(const std::string& json_text);

}  // namespace pacore::reward
