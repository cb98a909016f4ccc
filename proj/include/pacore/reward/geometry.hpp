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
#include <string_view>

namespace pacore::reward {

struct BoundingBox {
  double x_min = 0, y_min = 0, x_max = 0, y_max = 0;

  double area() const { return (x_max - x_min) * (y_max - y_min); }
  void validate() const;  // finite, non-negative, min <= max
  bool operator==(const BoundingBox&) const = default;
};

struct Point2D {
  double x = 0, y = 0;

  void validate() const;
  bool operator==(const Point2D&) const = default;
};

struct ImageDims {
  long width = 0, height = 0;

  double diagonal() const;
  void validate() const;  // both >= 1
};

inline constexpr double kDefaultTauFrac = 0.1;
inline constexpr double kDefaultCutFrac = 0.5;

/// Area IoU in [0,1]. Zero-area boxes score 0 against anything except an
/// identical zero-area box, which scores 1 by convention.
double iou(const BoundingBox& a, const BoundingBox& b);

/// iou(pred, gold) when it reaches the gate, else 0. gate in [0,1]; 0 turns
/// the gate off.
double grounding_reward(const BoundingBox& pred, const BoundingBox& gold,
                        double gate);

/// exp(-d / (tau_frac * diagonal)) when d <= cut_frac * diagonal, else 0.
/// Monotone in distance, 1 exactly at d = 0.
double point_reward(const Point2D& pred, const Point2D& gold,
                    const ImageDims& dims, double tau_frac = kDefaultTauFrac,
                    double cut_frac = kDefaultCutFrac);

/// Last 4-number group "[a, b, c, d]" or "(a, b, c, d)" in the text, read as
/// x_min, y_min, x_max, y_max. Groups that violate box invariants are skipped.
std::optional<BoundingBox> extract_box(std::string_view text);

/// Last 2-number group in the text, read as x, y.
std::optional<Point2D> extract_point(std::string_view text);

}  // namespace pacore::reward
