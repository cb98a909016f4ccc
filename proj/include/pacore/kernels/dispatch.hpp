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
#include <string>
#include <vector>

namespace pacore::kernels {

// Element-wise inner loops of the policy-optimization numerics. Trajectories
// are token-level (tens of thousands of steps), so these are the hot paths; a
// lane is picked once at startup and every variant must agree with the scalar
// reference (see test_kernels).
//
// The GAE backward scan is a recurrence and deliberately has no SIMD variant;
// it lives in policy/objectives.cpp on top of td_residuals.
struct KernelTable {
  const char* name;

  // out[t] = rewards[t] + gamma * values[t+1] - values[t].  values has n+1
  // entries. Bit-identical across lanes (no FMA, contraction disabled).
  void (*td_residuals)(const double* rewards, const double* values,
                       double gamma, std::size_t n, double* out);

  // 0.5 * sum((values[t] - targets[t])^2). Reduction order differs per lane.
  double (*half_squared_error_sum)(const double* values, const double* targets,
                                   std::size_t n);

  // out[t] = min(exp(lp_num[t] - lp_den[t]), cap)
  void (*truncated_ratios)(const double* lp_num, const double* lp_den,
                           double cap, std::size_t n, double* out);

  // sum over t of min(rho_t * adv[t], clamp(rho_t, 1-eps, 1+eps) * adv[t])
  // with rho_t = exp(lp_new[t] - lp_old[t]). Caller divides for the mean.
  double (*clipped_surrogate_sum)(const double* lp_new, const double* lp_old,
                                  const double* advantages, double clip_eps,
                                  std::size_t n);
};

const KernelTable& scalar_table();

bool avx2_supported();

/// nullptr when this build or CPU has no AVX2 lane.
const KernelTable* avx2_table();

/// The lane in effect: best available, unless overridden by set_active_lane or
/// the PACORE_KERNEL_LANE environment variable ("scalar" or "avx2").
const KernelTable& active_table();

/// Force a lane by name ("scalar", "avx2", "auto"). Throws ValidationError for
/// an unknown or unavailable lane. Intended for tests and diagnostics.
void set_active_lane(const std::string& name);

/// Every lane available on this machine, scalar first.
std::vector<const KernelTable*> available_tables();

}  // namespace pacore::kernels
