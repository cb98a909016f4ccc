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

#include "pacore/policy/objectives.hpp"

#include <cmath>
#include <string>

#include "pacore/errors.hpp"
#include "pacore/kernels/dispatch.hpp"
#include "pacore/rng.hpp"

namespace pacore::policy {
namespace {

void require_finite(const std::vector<double>& v, const char* what) {
  for (double x : v) {
    if (!std::isfinite(x)) {
      throw ValidationError(std::string(what) + " contains a non-finite entry");
    }
  }
}

void require_same_length(std::size_t a, std::size_t b, const char* what) {
  if (a != b) {
    throw ValidationError(std::string(what) + ": length mismatch (" +
                          std::to_string(a) + " vs " + std::to_string(b) + ")");
  }
}

}  // namespace

void Trajectory::validate() const {
  const std::size_t t = rewards.size();
  if (t < 1) throw ValidationError("trajectory must have at least one step");
  require_same_length(logprob_new.size(), t, "trajectory logprob_new");
  require_same_length(logprob_old.size(), t, "trajectory logprob_old");
  if (values.size() != t + 1) {
    throw ValidationError(
        "trajectory values must have one bootstrap entry beyond the steps (" +
        std::to_string(values.size()) + " vs " + std::to_string(t + 1) + ")");
  }
  require_finite(rewards, "rewards");
  require_finite(values, "values");
  require_finite(logprob_new, "logprob_new");
  require_finite(logprob_old, "logprob_old");
}

void AdvantageParams::validate() const {
  if (!(gamma >= 0.0 && gamma <= 1.0)) {
    throw ValidationError("gamma must be within [0, 1]");
  }
  if (!(lambda >= 0.0 && lambda <= 1.0)) {
    throw ValidationError("lambda must be within [0, 1]");
  }
  if (!(clip_epsilon > 0.0)) {
    throw ValidationError("clip_epsilon must be positive");
  }
  if (!(is_threshold >= 1.0)) {
    throw ValidationError("is_threshold must be at least 1");
  }
}

std::vector<double> compute_td_residuals(const Trajectory& traj,
                                         const AdvantageParams& p) {
  traj.validate();
  p.validate();
  std::vector<double> out(traj.steps());
  kernels::active_table().td_residuals(traj.rewards.data(), traj.values.data(),
                                       p.gamma, traj.steps(), out.data());
  return out;
}

AdvantageResult compute_gae(const Trajectory& traj, const AdvantageParams& p) {
  AdvantageResult res;
  res.deltas = compute_td_residuals(traj, p);
  const std::size_t t = traj.steps();
  res.advantages.resize(t);
  const double decay = p.gamma * p.lambda;
  double acc = 0.0;
  for (std::size_t i = t; i-- > 0;) {
    acc = res.deltas[i] + decay * acc;
    res.advantages[i] = acc;
  }
  res.value_targets.resize(t);
  for (std::size_t i = 0; i < t; ++i) {
    res.value_targets[i] = res.advantages[i] + traj.values[i];
  }
  return res;
}

double ppo_clipped_objective(const std::vector<double>& logprob_new,
                             const std::vector<double>& logprob_old,
                             const std::vector<double>& advantages,
                             double clip_epsilon) {
  const std::size_t n = logprob_new.size();
  if (n == 0) throw ValidationError("clipped objective over empty sequences");
  require_same_length(logprob_old.size(), n, "logprob_old");
  require_same_length(advantages.size(), n, "advantages");
  if (!(clip_epsilon > 0.0)) {
    throw ValidationError("clip_epsilon must be positive");
  }
  require_finite(logprob_new, "logprob_new");
  require_finite(logprob_old, "logprob_old");
  require_finite(advantages, "advantages");
  const double sum = kernels::active_table().clipped_surrogate_sum(
      logprob_new.data(), logprob_old.data(), advantages.data(), clip_epsilon,
      n);
  return sum / static_cast<double>(n);
}

double ppo_batch_objective(const std::vector<Trajectory>& batch,
                           const AdvantageParams& p) {
  if (batch.empty()) throw ValidationError("empty trajectory batch");
  double acc = 0.0;
  for (const Trajectory& traj : batch) {
    const AdvantageResult adv = compute_gae(traj, p);
    acc += ppo_clipped_objective(traj.logprob_new, traj.logprob_old,
                                 adv.advantages, p.clip_epsilon);
  }
  return acc / static_cast<double>(batch.size());
}

double value_loss(const std::vector<double>& values,
                  const std::vector<double>& targets) {
  if (values.empty()) throw ValidationError("value loss over empty sequences");
  require_same_length(targets.size(), values.size(), "value targets");
  require_finite(values, "values");
  require_finite(targets, "targets");
  return kernels::active_table().half_squared_error_sum(
      values.data(), targets.data(), values.size());
}

double value_loss_mean(const std::vector<double>& values,
                       const std::vector<double>& targets) {
  return value_loss(values, targets) / static_cast<double>(values.size());
}

std::vector<double> truncated_is_ratios(
    const std::vector<double>& logprob_train,
    const std::vector<double>& logprob_infer, double C) {
  require_same_length(logprob_infer.size(), logprob_train.size(),
                      "logprob_infer");
  if (!(C >= 1.0)) throw ValidationError("is threshold must be at least 1");
  require_finite(logprob_train, "logprob_train");
  require_finite(logprob_infer, "logprob_infer");
  std::vector<double> out(logprob_train.size());
  kernels::active_table().truncated_ratios(logprob_train.data(),
                                           logprob_infer.data(), C,
                                           out.size(), out.data());
  return out;
}

std::vector<std::vector<std::size_t>> split_minibatches(
    const std::vector<std::size_t>& indices, std::size_t n_splits,
    std::uint64_t seed) {
  if (n_splits < 1) throw ValidationError("n_splits must be at least 1");
  if (n_splits > indices.size()) {
    throw ValidationError("n_splits exceeds the number of indices");
  }
  std::vector<std::size_t> order = indices;
  DetRng rng(seed);
  rng.shuffle(order);
  const std::size_t base = order.size() / n_splits;
  const std::size_t extra = order.size() % n_splits;
  std::vector<std::vector<std::size_t>> out(n_splits);
  std::size_t pos = 0;
  for (std::size_t s = 0; s < n_splits; ++s) {
    const std::size_t take = base + (s < extra ? 1 : 0);
    out[s].assign(order.begin() + static_cast<std::ptrdiff_t>(pos),
                  order.begin() + static_cast<std::ptrdiff_t>(pos + take));
    pos += take;
  }
  return out;
}

}  // namespace pacore::policy
