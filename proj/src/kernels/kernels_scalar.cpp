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

// Scalar reference lane. Compiled with -ffp-contract=off so the AVX2 lane
// (plain mul + add, no FMA) can match td_residuals bit for bit.

#include <algorithm>
#include <cmath>
#include <cstddef>

#include "pacore/kernels/dispatch.hpp"

namespace pacore::kernels {
namespace {

void td_residuals_scalar(const double* rewards, const double* values,
                         double gamma, std::size_t n, double* out) {
  for (std::size_t t = 0; t < n; ++t) {
    out[t] = rewards[t] + gamma * values[t + 1] - values[t];
  }
}

double half_squared_error_sum_scalar(const double* values,
                                     const double* targets, std::size_t n) {
  double acc = 0.0;
  for (std::size_t t = 0; t < n; ++t) {
    const double d = values[t] - targets[t];
    acc += d * d;
  }
  return 0.5 * acc;
}

void truncated_ratios_scalar(const double* lp_num, const double* lp_den,
                             double cap, std::size_t n, double* out) {
  for (std::size_t t = 0; t < n; ++t) {
    out[t] = std::min(std::exp(lp_num[t] - lp_den[t]), cap);
  }
}

double clipped_surrogate_sum_scalar(const double* lp_new, const double* lp_old,
                                    const double* advantages, double clip_eps,
                                    std::size_t n) {
  const double lo = 1.0 - clip_eps;
  const double hi = 1.0 + clip_eps;
  double acc = 0.0;
  for (std::size_t t = 0; t < n; ++t) {
    const double rho = std::exp(lp_new[t] - lp_old[t]);
    const double unclipped = rho * advantages[t];
    const double clipped = std::clamp(rho, lo, hi) * advantages[t];
    acc += std::min(unclipped, clipped);
  }
  return acc;
}

}  // namespace

const KernelTable& scalar_table() {
  static const KernelTable table{
      "scalar",
      td_residuals_scalar,
      half_squared_error_sum_scalar,
      truncated_ratios_scalar,
      clipped_surrogate_sum_scalar,
  };
  return table;
}

}  // namespace pacore::kernels
