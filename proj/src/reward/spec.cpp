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

#include "pacore/reward/spec.hpp"

#include "json.hpp"
#include "pacore/errors.hpp"

namespace pacore::reward {

using nlohmann::json;

const char* to_string(VerifierKind v) {
  switch (v) {
    case VerifierKind::ExactMatch: return "exact_match";
    case VerifierKind::NumericMatch: return "numeric_match";
    case VerifierKind::ModelJudge: return "model_judge";
    case VerifierKind::IoUGate: return "iou_gate";
    case VerifierKind::PointDecay: return "point_decay";
  }
  return "exact_match";
}

VerifierKind verifier_kind_from_string(const std::string& s) {
  if (s == "exact_match") return VerifierKind::ExactMatch;
  if (s == "numeric_match") return VerifierKind::NumericMatch;
  if (s == "model_judge") return VerifierKind::ModelJudge;
  if (s == "iou_gate") return VerifierKind::IoUGate;
  if (s == "point_decay") return VerifierKind::PointDecay;
  throw ValidationError("unknown verifier kind: " + s);
}

void RewardSpec::validate() const {
  if (judge_passes < 1) {
    throw ValidationError("judge_passes must be at least 1");
  }
  if (!(iou_gate >= 0.0 && iou_gate <= 1.0)) {
    throw ValidationError("iou_gate must be within [0, 1]");
  }
  if (!(tau_frac > 0.0)) throw ValidationError("tau_frac must be positive");
  if (!(cut_frac >= tau_frac)) {
    throw ValidationError("cut_frac must be at least tau_frac");
  }
}

std::string reward_spec_to_json(const RewardSpec& spec) {
  json j{
      {"allowed_refs", spec.allowed_refs},
      {"cut_frac", spec.cut_frac},
      {"extraction", to_string(spec.extraction)},
      {"iou_gate", spec.iou_gate},
      {"judge_passes", spec.judge_passes},
      {"penalty_set", spec.penalty_set},
      {"tau_frac", spec.tau_frac},
      {"verifier", to_string(spec.verifier)},
  };
  return j.dump();
}

RewardSpec reward_spec_from_json(const std::string& json_text) {
  json j;
  try {
    j = json::parse(json_text);
  } catch (const json::exception& e) {
    throw ParseError(std::string("bad reward spec: ") + e.what());
  }
  if (!j.is_object()) throw ParseError("reward spec must be a JSON object");
  RewardSpec spec;
  try {
    if (j.contains("extraction")) {
      spec.extraction =
          extraction_mode_from_string(j["extraction"].get<std::string>());
    }
    if (j.contains("verifier")) {
      spec.verifier =
          verifier_kind_from_string(j["verifier"].get<std::string>());
    }
    if (j.contains("penalty_set")) {
      spec.penalty_set = j["penalty_set"].get<std::vector<std::string>>();
    }
    if (j.contains("judge_passes")) {
      spec.judge_passes = j["judge_passes"].get<int>();
    }
    if (j.contains("iou_gate")) spec.iou_gate = j["iou_gate"].get<double>();
    if (j.contains("tau_frac")) spec.tau_frac = j["tau_frac"].get<double>();
    if (j.contains("cut_frac")) spec.cut_frac = j["cut_frac"].get<double>();
    if (j.contains("allowed_refs")) {
      spec.allowed_refs = j["allowed_refs"].get<std::vector<std::string>>();
    }
  } catch (const json::exception& e) {
    throw ParseError(std::string("bad reward spec field: ") + e.what());
  }
  spec.validate();
  return spec;
}

}  // namespace pacore::reward
