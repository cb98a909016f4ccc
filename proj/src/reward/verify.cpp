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

#include "pacore/reward/verify.hpp"

#include <cmath>
#include <cstdlib>
#include <cstring>

#include "pacore/errors.hpp"
#include "pacore/strings.hpp"

namespace pacore::reward {

const char* to_string(Verdict v) {
  switch (v) {
    case Verdict::Correct: return "correct";
    case Verdict::Incorrect: return "incorrect";
    case Verdict::Unparseable: return "unparseable";
  }
  return "unparseable";
}

Verdict verdict_from_string(const std::string& s) {
  if (s == "correct") return Verdict::Correct;
  if (s == "incorrect") return Verdict::Incorrect;
  if (s == "unparseable") return Verdict::Unparseable;
  throw ValidationError("unknown verdict: " + s);
}

std::string normalize_answer(std::string_view s) {
  std::string_view t = trim(s);
  if (!t.empty() && t.back() == '.') t.remove_suffix(1);
  t = trim(t);
  std::string out;
  out.reserve(t.size());
  bool pending_space = false;
  for (char c : t) {
    if (is_space(c)) {
      pending_space = !out.empty();
      continue;
    }
    if (pending_space) {
      out += ' ';
      pending_space = false;
    }
    if (c >= 'A' && c <= 'Z') c = static_cast<char>(c - 'A' + 'a');
    out += c;
  }
  return out;
}

namespace {

constexpr double kRelTol = 1e-6;

bool numbers_match(double a, double b) {
  if (a == b) return true;
  return std::abs(a - b) <= kRelTol * std::max(std::abs(a), std::abs(b));
}

std::optional<double> strict_strtod(std::string_view s) {
  s = trim(s);
  if (s.empty() || s.size() >= 64) return std::nullopt;
  char buf[64];
  std::memcpy(buf, s.data(), s.size());
  buf[s.size()] = '\0';
  char* end = nullptr;
  const double v = std::strtod(buf, &end);
  if (end != buf + s.size()) return std::nullopt;
  if (!std::isfinite(v)) return std::nullopt;
  return v;
}

// \frac{a}{b} with plain-decimal a and b
std::optional<double> parse_latex_frac(std::string_view s) {
  s = trim(s);
  const std::string_view marker = "\\frac{";
  if (s.substr(0, marker.size()) != marker) return std::nullopt;
  const std::size_t num_end = s.find('}', marker.size());
  if (num_end == std::string_view::npos) return std::nullopt;
  if (num_end + 1 >= s.size() || s[num_end + 1] != '{') return std::nullopt;
  const std::size_t den_end = s.find('}', num_end + 2);
  if (den_end == std::string_view::npos || den_end + 1 != s.size()) {
    return std::nullopt;
  }
  const auto num = strict_strtod(s.substr(marker.size(), num_end - marker.size()));
  const auto den = strict_strtod(s.substr(num_end + 2, den_end - num_end - 2));
  if (!num || !den || *den == 0.0) return std::nullopt;
  return *num / *den;
}

}  // namespace

std::optional<double> parse_plain_number(std::string_view s) {
  return strict_strtod(s);
}

std::optional<double> parse_numeric(std::string_view s) {
  s = trim(s);
  if (auto v = strict_strtod(s)) return v;
  if (auto v = parse_latex_frac(s)) return v;
  const std::size_t slash = s.find('/');
  if (slash != std::string_view::npos && slash > 0 && slash + 1 < s.size()) {
    const auto num = strict_strtod(s.substr(0, slash));
    const auto den = strict_strtod(s.substr(slash + 1));
    if (num && den && *den != 0.0) return *num / *den;
  }
  return std::nullopt;
}

Verdict verify_exact(std::string_view pred, std::string_view gold) {
  const std::string np = normalize_answer(pred);
  const std::string ng = normalize_answer(gold);
  const auto vp = parse_plain_number(np);
  const auto vg = parse_plain_number(ng);
  if (vp && vg) {
    return numbers_match(*vp, *vg) ? Verdict::Correct : Verdict::Incorrect;
  }
  return np == ng ? Verdict::Correct : Verdict::Incorrect;
}

Verdict verify_numeric(std::string_view pred, std::string_view gold) {
  const auto vp = parse_numeric(trim(pred));
  const auto vg = parse_numeric(trim(gold));
  if (vp && vg) {
    return numbers_match(*vp, *vg) ? Verdict::Correct : Verdict::Incorrect;
  }
  return verify_exact(pred, gold);
}

bool consensus_all_agree(const std::vector<Verdict>& verdicts) {
  if (verdicts.empty()) {
    throw ValidationError("consensus over an empty verdict sequence");
  }
  bool all_correct = true, all_incorrect = true;
  for (Verdict v : verdicts) {
    all_correct = all_correct && v == Verdict::Correct;
    all_incorrect = all_incorrect && v == Verdict::Incorrect;
  }
  return all_correct || all_incorrect;
}

}  // namespace pacore::reward
