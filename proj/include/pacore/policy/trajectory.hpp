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

#include <cstddef>
#include <vector>

namespace pacore::policy {

// One response trajectory at token granularity. values carries one entry per
// step plus the bootstrap value; the caller must pass 0 there for terminal
// states, this module never infers terminality.
struct Trajectory {
  std::vector<double> rewards;       // r_t, length T
  std::vector<double> values;        // V(s_t), length T+1
  std::vector<double> logprob_new;   // log pi_new(a_t|s_t), length T
  std::vector<double> logprob_old;   // log pi_old(a_t|s_t), length T

  std::size_t steps() const { return rewards.size(); }

  /// Throws ValidationError on length mismatch or non-finite entries.
  void validate() const;
};

struct AdvantageParams {
  double gamma = 1.0;         // discount, [0,1]
  double lambda = 1.0;        // smoothing, [0,1]
  double clip_epsilon = 0.2;  // surrogate clip width, > 0
  double is_threshold = 8.0;  // importance-ratio cap, >= 1

  void validate() const;
};

struct AdvantageResult {
  std::vector<double> deltas;
  std::vector<double> advantages;
  std::vector<double> value_targets;
};

}  // namespace pacore::policy
