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

#include "pacore/reward/penalties.hpp"

#include <cmath>
#include <cstdint>

#include "pacore/errors.hpp"
#include "pacore/reward/judge.hpp"
#include "pacore/strings.hpp"

namespace pacore::reward {
namespace {

enum class Script { None, Latin, Cjk, Other };

// Invalid sequences consume one byte and classify as None; no input panics.
std::uint32_t next_codepoint(std::string_view s, std::size_t& i) {
  const auto byte = [&](std::size_t k) {
    return static_cast<std::uint32_t>(static_cast<unsigned char>(s[k]));
  };
  const std::uint32_t b0 = byte(i);
  if (b0 < 0x80) {
    i += 1;
    return b0;
  }
  auto cont = [&](std::size_t k) {
    return k < s.size() && (static_cast<unsigned char>(s[k]) & 0xC0) == 0x80;
  };
  if ((b0 & 0xE0) == 0xC0 && cont(i + 1)) {
    const std::uint32_t cp = ((b0 & 0x1F) << 6) | (byte(i + 1) & 0x3F);
    i += 2;
    return cp;
  }
  if ((b0 & 0xF0) == 0xE0 && cont(i + 1) && cont(i + 2)) {
    const std::uint32_t cp =
        ((b0 & 0x0F) << 12) | ((byte(i + 1) & 0x3F) << 6) | (byte(i + 2) & 0x3F);
    i += 3;
    return cp;
  }
  if ((b0 & 0xF8) == 0xF0 && cont(i + 1) && cont(i + 2) && cont(i + 3)) {
    const std::uint32_t cp = ((b0 & 0x07) << 18) | ((byte(i + 1) & 0x3F) << 12) |
                             ((byte(i + 2) & 0x3F) << 6) | (byte(i + 3) & 0x3F);
    i += 4;
    return cp;
  }
  i += 1;
  return 0xFFFD;
}

Script classify(std::uint32_t cp) {
  if ((cp >= 'A' && cp <= 'Z') || (cp >= 'a' && cp <= 'z')) return Script::Latin;
  if ((cp >= 0x00C0 && cp <= 0x024F) || (cp >= 0x1E00 && cp <= 0x1EFF)) {
    return Script::Latin;
  }
  if ((cp >= 0x3040 && cp <= 0x30FF) ||  // kana
      (cp >= 0x3400 && cp <= 0x4DBF) || (cp >= 0x4E00 && cp <= 0x9FFF) ||
      (cp >= 0xF900 && cp <= 0xFAFF) ||  // ideographs
      (cp >= 0xAC00 && cp <= 0xD7A3) || (cp >= 0x1100 && cp <= 0x11FF)) {
    return Script::Cjk;  // hangul counted with the CJK class
  }
  if ((cp >= 0x0370 && cp <= 0x03FF) || (cp >= 0x0400 && cp <= 0x04FF) ||
      (cp >= 0x0590 && cp <= 0x05FF) || (cp >= 0x0600 && cp <= 0x06FF) ||
      (cp >= 0x0900 && cp <= 0x097F) || (cp >= 0x0E00 && cp <= 0x0E7F)) {
    return Script::Other;
  }
  return Script::None;
}

struct ScriptCounts {
  long latin = 0, cjk = 0, other = 0;

  long total() const { return latin + cjk + other; }
  Script dominant() const {
    if (latin >= cjk && latin >= other) return Script::Latin;
    if (cjk >= other) return Script::Cjk;
    return Script::Other;
  }
};

ScriptCounts count_scripts(std::string_view s) {
  ScriptCounts c;
  std::size_t i = 0;
  while (i < s.size()) {
    switch (classify(next_codepoint(s, i))) {
      case Script::Latin: ++c.latin; break;
      case Script::Cjk: ++c.cjk; break;
      case Script::Other: ++c.other; break;
      case Script::None: break;
    }
  }
  return c;
}

bool is_url_stop(char c) {
  return is_space(c) || c == '<' || c == '>' || c == '"' || c == '\'' ||
         c == '`' || c == ')' || c == ']' || c == '}' || c == ',' || c == ';';
}

void collect_citation_tokens(std::string_view text,
                             std::vector<std::string>& out) {
  for (std::size_t i = 0; i < text.size(); ++i) {
    if ((text[i] == 'h' || text[i] == 'H') && i + 7 <= text.size()) {
      const std::string head = to_lower_ascii(text.substr(i, 8));
      std::size_t body = 0;
      if (head.rfind("https://", 0) == 0) {
        body = i + 8;
      } else if (head.rfind("http://", 0) == 0) {
        body = i + 7;
      }
      if (body != 0) {
        const std::size_t scheme_len = body - i;
        std::size_t end = body;
        while (end < text.size() && !is_url_stop(text[end])) ++end;
        std::string_view url = text.substr(i, end - i);
        while (!url.empty() && (url.back() == '.' || url.back() == '!' ||
                                url.back() == '?' || url.back() == ':')) {
          url.remove_suffix(1);
        }
        if (url.size() > scheme_len) out.emplace_back(url);
        i = end - 1;
        continue;
      }
    }
    if (text[i] == '[') {
      std::size_t j = i + 1;
      std::vector<std::string> nums;
      std::string cur;
      bool ok = false;
      for (; j < text.size(); ++j) {
        const char c = text[j];
        if (c >= '0' && c <= '9') {
          cur += c;
        } else if (c == ',' || c == ' ') {
          if (!cur.empty()) nums.push_back(cur);
          cur.clear();
        } else if (c == ']') {
          if (!cur.empty()) nums.push_back(cur);
          ok = !nums.empty();
          break;
        } else {
          break;
        }
      }
      if (ok) {
        for (const std::string& n : nums) out.push_back("[" + n + "]");
        i = j;
      }
    }
  }
}

}  // namespace

double language_consistency_penalty(std::string_view question,
                                    std::string_view response) {
  const ScriptCounts q = count_scripts(question);
  if (q.total() == 0) return 0.0;
  const Script dom = q.dominant();
  const ScriptCounts r = count_scripts(response);
  if (r.total() == 0) return 0.0;
  long matched = 0;
  switch (dom) {
    case Script::Latin: matched = r.latin; break;
    case Script::Cjk: matched = r.cjk; break;
    case Script::Other: matched = r.other; break;
    case Script::None: return 0.0;
  }
  const double mismatched =
      static_cast<double>(r.total() - matched) / static_cast<double>(r.total());
  return std::min(1.0, mismatched);
}

double citation_gate(std::string_view response,
                     const std::vector<std::string>& allowed_refs) {
  std::vector<std::string> tokens;
  collect_citation_tokens(response, tokens);
  for (const std::string& tok : tokens) {
    bool ok = false;
    for (const std::string& ref : allowed_refs) {
      if (tok == ref) {
        ok = true;
        break;
      }
    }
    if (!ok) return 0.0;
  }
  return 1.0;
}

double compose_reward(double base, const std::vector<double>& penalties,
                      const std::vector<double>& gates) {
  if (!std::isfinite(base) || base < 0.0 || base > 1.0) {
    throw ValidationError("base reward must lie in [0, 1]");
  }
  double penalty_sum = 0.0;
  for (double p : penalties) {
    if (!std::isfinite(p) || p < 0.0 || p > 1.0) {
      throw ValidationError("penalties must lie in [0, 1]");
    }
    penalty_sum += p;
  }
  double gate_product = 1.0;
  for (double g : gates) {
    if (g != 0.0 && g != 1.0) {
      throw ValidationError("gates must be exactly 0 or 1");
    }
    gate_product *= g;
  }
  return gate_product * std::max(0.0, base - penalty_sum);
}

void PenaltyRegistry::add(PenaltyEntry entry) {
  entries_.push_back(std::move(entry));
}

const PenaltyEntry* PenaltyRegistry::find(const std::string& name) const {
  for (const PenaltyEntry& e : entries_) {
    if (e.name == name) return &e;
  }
  return nullptr;
}

const PenaltyRegistry& default_penalty_registry() {
  static const PenaltyRegistry registry = [] {
    PenaltyRegistry r;
    r.add({"language_consistency", PenaltyKind::Soft,
           [](const PenaltyContext& ctx) {
             return language_consistency_penalty(ctx.question, ctx.response);
           }});
    r.add({"citation", PenaltyKind::Gate, [](const PenaltyContext& ctx) {
             static const std::vector<std::string> kEmpty;
             return citation_gate(ctx.response,
                                  ctx.allowed_refs ? *ctx.allowed_refs
                                                   : kEmpty);
           }});
    r.add({"epistemic_calibration", PenaltyKind::Soft,
           [](const PenaltyContext& ctx) { return epistemic_penalty(ctx); }});
    return r;
  }();
  return registry;
}

}  // namespace pacore::reward
