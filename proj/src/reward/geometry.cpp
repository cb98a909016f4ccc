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

#include "pacore/reward/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <cstring>
#include <string>
#include <vector>

#include "pacore/errors.hpp"

namespace pacore::reward {

void BoundingBox::validate() const {
  const double v[4] = {x_min, y_min, x_max, y_max};
  for (double c : v) {
    if (!std::isfinite(c) || c < 0) {
      throw ValidationError("box coordinates must be finite and non-negative");
    }
  }
  if (x_min > x_max || y_min > y_max) {
    throw ValidationError("box min corner must not exceed max corner");
  }
}

void Point2D::validate() const {
  if (!std::isfinite(x) || !std::isfinite(y) || x < 0 || y < 0) {
    throw ValidationError("point coordinates must be finite and non-negative");
  }
}

double ImageDims::diagonal() const {
  return std::hypot(static_cast<double>(width), static_cast<double>(height));
}

void ImageDims::validate() const {
  if (width < 1 || height < 1) {
    throw ValidationError("image dimensions must be at least 1x1");
  }
}

double iou(const BoundingBox& a, const BoundingBox& b) {
  a.validate();
  b.validate();
  if (a.area() == 0.0 || b.area() == 0.0) {
    return (a.area() == 0.0 && b.area() == 0.0 && a == b) ? 1.0 : 0.0;
  }
  const double iw =
      std::max(0.0, std::min(a.x_max, b.x_max) - std::max(a.x_min, b.x_min));
  const double ih =
      std::max(0.0, std::min(a.y_max, b.y_max) - std::max(a.y_min, b.y_min));
  const double inter = iw * ih;
  const double uni = a.area() + b.area() - inter;
  return std::clamp(inter / uni, 0.0, 1.0);
}

double grounding_reward(const BoundingBox& pred, const BoundingBox& gold,
                        double gate) {
  if (!(gate >= 0.0 && gate <= 1.0)) {
    throw ValidationError("iou gate must be within [0, 1]");
  }
  const double v = iou(pred, gold);
  return v >= gate ? v : 0.0;
}

double point_reward(const Point2D& pred, const Point2D& gold,
                    const ImageDims& dims, double tau_frac, double cut_frac) {
  pred.validate();
  gold.validate();
  dims.validate();
  if (!(tau_frac > 0.0)) throw ValidationError("tau_frac must be positive");
  if (!(cut_frac >= tau_frac)) {
    throw ValidationError("cut_frac must be at least tau_frac");
  }
  const double diag = dims.diagonal();
  const double d = std::hypot(pred.x - gold.x, pred.y - gold.y);
  if (d > cut_frac * diag) return 0.0;
  return std::exp(-d / (tau_frac * diag));
}

namespace {

// strtod over a view is unsafe (no terminator guarantee), so numbers are
// copied into a bounded buffer first.
std::size_t parse_number(std::string_view text, std::size_t pos, double* out) {
  char buf[64];
  const std::size_t n = std::min(text.size() - pos, sizeof(buf) - 1);
  std::memcpy(buf, text.data() + pos, n);
  buf[n] = '\0';
  char* end = nullptr;
  const double v = std::strtod(buf, &end);
  if (end == buf) return 0;
  *out = v;
  return static_cast<std::size_t>(end - buf);
}

// Parses count comma-separated numbers after an opening ( or [ at pos,
// requiring the matching closer. Returns true and advances past the closer.
bool parse_tuple(std::string_view text, std::size_t pos, int count,
                 double* out) {
  const char open = text[pos];
  const char close = open == '[' ? ']' : ')';
  std::size_t i = pos + 1;
  for (int k = 0; k < count; ++k) {
    while (i < text.size() && (text[i] == ' ' || text[i] == '\t')) ++i;
    const std::size_t used = parse_number(text, i, &out[k]);
    if (used == 0) return false;
    i += used;
    while (i < text.size() && (text[i] == ' ' || text[i] == '\t')) ++i;
    if (k + 1 < count) {
      if (i >= text.size() || text[i] != ',') return false;
      ++i;
    }
  }
  return i < text.size() && text[i] == close;
}

}  // namespace

std::optional<BoundingBox> extract_box(std::string_view text) {
  std::optional<BoundingBox> found;
  for (std::size_t i = 0; i < text.size(); ++i) {
    if (text[i] != '[' && text[i] != '(') continue;
    double v[4];
    if (!parse_tuple(text, i, 4, v)) continue;
    BoundingBox b{v[0], v[1], v[2], v[3]};
    try {
      b.validate();
    } catch (const ValidationError&) {
      continue;
    }
    found = b;
  }
  return found;
}

std::optional<Point2D> extract_point(std::string_view text) {
  std::optional<Point2D> found;
  for (std::size_t i = 0; i < text.size(); ++i) {
    if (text[i] != '[' && text[i] != '(') continue;
    double v[2];
    if (!parse_tuple(text, i, 2, v)) continue;
    Point2D p{v[0], v[1]};
    try {
      p.validate();
    } catch (const ValidationError&) {
      continue;
    }
    found = p;
  }
  return found;
}

}  // namespace pacore::reward
