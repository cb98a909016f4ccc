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
#include <vector>

#include "pacore/policy/trajectory.hpp"

namespace pacore::policy {

// Advantage estimation and the clipped-surrogate / value objectives. All
// functions are pure, double precision, and reentrant. Objectives are
// evaluated, not differentiated; there is no optimizer here.

/// delta_t = rewards[t] + gamma * values[t+1] - values[t]
std::vector<double> compute_td_residuals(const Trajectory& traj,
                                         const AdvantageParams& p);

/// Exponentially weighted advantage estimate, computed by the backward
/// recursion A_t = delta_t + gamma*lambda*A_{t+1}. Matches the literal
/// double-sum definition within 1e-10 (see the oracle suite in test_numerics).
/// value_targets[t] = advantages[t] + values[t].
AdvantageResult compute_gae(const Trajectory& traj, const AdvantageParams& p);

/// Mean over steps of min(rho_t * A_t, clamp(rho_t, 1-eps, 1+eps) * A_t),
/// rho_t = exp(logprob_new - logprob_old).
double ppo_clipped_objective(const std::vector<double>& logprob_new,
                             const std::vector<double>& logprob_old,
                             const std::vector<double>& advantages,
                             double clip_epsilon);

/// Batch aggregation: mean over steps within each trajectory, then mean over
/// trajectories, so short and long responses carry equal weight. Advantages
/// come from compute_gae under p.
double ppo_batch_objective(const std::vector<Trajectory>& batch,
                           const AdvantageParams& p);

/// 0.5 * sum((values[t] - targets[t])^2). Sum form; the mini-batch mean is
/// taken by the caller.
double value_loss(const std::vector<double>& values,
                  const std::vector<double>& targets);

/// value_loss divided by the step count.
double value_loss_mean(const std::vector<double>& values,
                       const std::vector<double>& targets);

/// Per-step min(exp(logprob_train - logprob_infer), C). One-sided clamp.
std::vector<double> truncated_is_ratios(const std::vector<double>& logprob_train,
                                        const std::vector<double>& logprob_infer,
                                        double C);

/// Shuffles the indices under the seed, then deals them into n_splits disjoint
/// chunks whose sizes differ by at most 1 (earlier chunks take the remainder:
/// 9 indices over 4 splits gives sizes 3,2,2,2).
std::vector<std::vector<std::size_t>> split_minibatches(
    const std::vector<std::size_t>& indices, std::size_t n_splits,
    std::uint64_t seed);

}  // namespace pacore::policy
