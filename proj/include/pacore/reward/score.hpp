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

#include <optional>
#include <string>
#include <vector>

#include "pacore/reward/judge.hpp"
#include "pacore/reward/spec.hpp"
#include "pacore/reward/verify.hpp"

namespace pacore::reward {

struct ScoreOutcome {
  double reward = 0.0;     // final composed scalar
  Verdict verdict = Verdict::Unparseable;
  std::optional<std::string> extracted;
  double base = 0.0;       // verifier output before penalties/gates
  std::vector<double> penalties;
  std::vector<double> gates;
};

/// Scores one response under the spec: extraction, then the configured
/// verifier for the base reward, then the spec's penalty set composed via
/// compose_reward. Geometry verifiers read gold as JSON ({"box": [x0,y0,
/// x1,y1]} or {"point": [x,y], "width": W, "height": H}) and call their
/// verdict Correct at base >= 0.5. judge may be null unless the spec needs
/// one (ModelJudge verifier or a judge-backed penalty; the latter degrades
/// to 0). A malformed gold payload is a task defect and throws.
ScoreOutcome score_response(const std::string& question,
                            const std::string& response_text,
                            const std::string& gold, const RewardSpec& spec,
                            const JudgeEndpoint* judge = nullptr);

}  // namespace pacore::reward
