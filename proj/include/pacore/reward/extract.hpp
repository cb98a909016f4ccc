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
#include <string>
#include <string_view>

namespace pacore::reward {

// How a final answer is pulled out of free-form response text. Every mode
// follows the last-occurrence rule: the latest matching span wins, since
// models restate answers after reasoning.
enum class ExtractionMode {
  BoxedLatex,       // content of the final \boxed{...}, balanced braces
  FinalAnswerLine,  // remainder of the last "final answer:" line
  AnswerPrefix,     // remainder of the last "answer:" line
  YesNo,            // last standalone yes/no word, normalized to lowercase
  OptionLetter,     // single letter A-Z from the final-answer line
  Raw,              // whole text, trimmed
};

const char* to_string(ExtractionMode m);
ExtractionMode extraction_mode_from_string(const std::string& s);

/// Returns the extracted span, or nothing when the mode finds no match.
/// Absence is a value, not an error.
std::optional<std::string> extract_answer(std::string_view text,
                                          ExtractionMode mode);

}  // namespace pacore::reward
