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

#include "pacore/reward/extract.hpp"

#include <cctype>

#include "pacore/errors.hpp"
#include "pacore/strings.hpp"

namespace pacore::reward {

const char* to_string(ExtractionMode m) {
  switch (m) {
    case ExtractionMode::BoxedLatex: return "boxed_latex";
    case ExtractionMode::FinalAnswerLine: return "final_answer_line";
    case ExtractionMode::AnswerPrefix: return "answer_prefix";
    case ExtractionMode::YesNo: return "yes_no";
    case ExtractionMode::OptionLetter: return "option_letter";
    case ExtractionMode::Raw: return "raw";
  }
  return "raw";
}

ExtractionMode extraction_mode_from_string(const std::string& s) {
  if (s == "boxed_latex") return ExtractionMode::BoxedLatex;
  if (s == "final_answer_line") return ExtractionMode::FinalAnswerLine;
  if (s == "answer_prefix") return ExtractionMode::AnswerPrefix;
  if (s == "yes_no") return ExtractionMode::YesNo;
  if (s == "option_letter") return ExtractionMode::OptionLetter;
  if (s == "raw") return ExtractionMode::Raw;
  throw ValidationError("unknown extraction mode: " + s);
}

namespace {

bool is_word_char(char c) {
  return std::isalnum(static_cast<unsigned char>(c)) != 0;
}

/// Content of the last \boxed{...} whose braces balance. Earlier occurrences
/// are fallbacks when the last one never closes.
std::optional<std::string> extract_boxed(std::string_view text) {
  const std::string_view marker = "\\boxed{";
  std::optional<std::string> found;
  std::size_t pos = 0;
  while ((pos = text.find(marker, pos)) != std::string_view::npos) {
    const std::size_t open = pos + marker.size() - 1;
    int depth = 0;
    for (std::size_t i = open; i < text.size(); ++i) {
      if (text[i] == '{') {
        ++depth;
      } else if (text[i] == '}') {
        --depth;
        if (depth == 0) {
          found = std::string(trim(text.substr(open + 1, i - open - 1)));
          break;
        }
      }
    }
    pos += marker.size();
  }
  return found;
}

/// Remainder of the line holding the last case-insensitive `prefix`, with
/// markdown emphasis characters stripped from the edges.
std::optional<std::string> extract_after_prefix(std::string_view text,
                                                std::string_view prefix) {
  const std::size_t at = rfind_ci(text, prefix);
  if (at == std::string_view::npos) return std::nullopt;
  std::size_t start = at + prefix.size();
  std::size_t end = text.find('\n', start);
  if (end == std::string_view::npos) end = text.size();
  std::string_view rest = trim(text.substr(start, end - start));
  while (!rest.empty() && (rest.front() == '*' || rest.front() == '_')) {
    rest.remove_prefix(1);
  }
  while (!rest.empty() && (rest.back() == '*' || rest.back() == '_')) {
    rest.remove_suffix(1);
  }
  rest = trim(rest);
  if (rest.empty()) return std::nullopt;
  return std::string(rest);
}

std::optional<std::string> extract_yes_no(std::string_view text) {
  std::optional<std::string> found;
  for (std::size_t i = 0; i + 2 <= text.size(); ++i) {
    if (i > 0 && is_word_char(text[i - 1])) continue;
    const std::string_view two = text.substr(i, 2);
    if ((two[0] == 'n' || two[0] == 'N') && (two[1] == 'o' || two[1] == 'O') &&
        (i + 2 == text.size() || !is_word_char(text[i + 2]))) {
      found = "no";
    }
    if (i + 3 <= text.size()) {
      const std::string_view three = text.substr(i, 3);
      if (to_lower_ascii(three) == "yes" &&
          (i + 3 == text.size() || !is_word_char(text[i + 3]))) {
        found = "yes";
      }
    }
  }
  return found;
}

/// Last standalone letter in `text`. Lowercase letters are accepted only when
/// `allow_lower` (inside an explicit final-answer span); a bare-text scan
/// would otherwise match the article "a".
std::optional<std::string> last_option_letter(std::string_view text,
                                              bool allow_lower) {
  for (std::size_t i = text.size(); i-- > 0;) {
    const char c = text[i];
    const bool upper = c >= 'A' && c <= 'Z';
    const bool lower = c >= 'a' && c <= 'z';
    if (!upper && !(allow_lower && lower)) continue;
    if (i > 0 && is_word_char(text[i - 1])) continue;
    if (i + 1 < text.size() && is_word_char(text[i + 1])) continue;
    return std::string(1, static_cast<char>(std::toupper(
                              static_cast<unsigned char>(c))));
  }
  return std::nullopt;
}

std::optional<std::string> extract_option_letter(std::string_view text) {
  if (auto span = extract_after_prefix(text, "final answer:")) {
    if (auto letter = last_option_letter(*span, true)) return letter;
  }
  if (auto span = extract_after_prefix(text, "answer:")) {
    if (auto letter = last_option_letter(*span, true)) return letter;
  }
  return last_option_letter(text, false);
}

}  // namespace

std::optional<std::string> extract_answer(std::string_view text,
                                          ExtractionMode mode) {
  switch (mode) {
    case ExtractionMode::BoxedLatex:
      return extract_boxed(text);
    case ExtractionMode::FinalAnswerLine:
      return extract_after_prefix(text, "final answer:");
    case ExtractionMode::AnswerPrefix:
      return extract_after_prefix(text, "answer:");
    case ExtractionMode::YesNo:
      return extract_yes_no(text);
    case ExtractionMode::OptionLetter:
      return extract_option_letter(text);
    case ExtractionMode::Raw: {
      std::string_view t = trim(text);
      if (t.empty()) return std::nullopt;
      return std::string(t);
    }
  }
  return std::nullopt;
}

}  // namespace pacore::reward
