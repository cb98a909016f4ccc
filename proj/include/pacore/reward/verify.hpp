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
#include <vector>

namespace pacore::reward {

enum class Verdict { Correct, Incorrect, Unparseable };

const char* to_string(Verdict v);
Verdict verdict_from_string(const std::string& s);

/// The exact-match normalization, applied to both sides before comparison:
/// trim, fold ASCII case, collapse internal whitespace runs to one space,
/// strip one trailing period. These rules are exhaustive; nothing else is
/// altered.
std::string normalize_answer(std::string_view s);

/// Full-string plain decimal (sign, digits, optional point/exponent).
/// Fractions are not plain decimals.
std::optional<double> parse_plain_number(std::string_view s);

/// Extended numeric parse: plain decimals, a/b fractions, \frac{a}{b}.
std::optional<double> parse_numeric(std::string_view s);

/// Correct iff normalized strings are equal, or both parse as plain decimals
/// within relative tolerance 1e-6. "0.5" vs "1/2" is Incorrect here; fraction
/// awareness belongs to verify_numeric.
Verdict verify_exact(std::string_view pred, std::string_view gold);

/// Numeric comparison with fraction support (relative tolerance 1e-6); falls
/// back to verify_exact when either side fails to parse as a number.
Verdict verify_numeric(std::string_view pred, std::string_view gold);

/// True iff every verdict is Correct or every verdict is Incorrect. Agreement
/// on Incorrect counts; any Unparseable breaks agreement.
bool consensus_all_agree(const std::vector<Verdict>& verdicts);

}  // namespace pacore::reward
