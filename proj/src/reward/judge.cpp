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

#include "pacore/reward/judge.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>

#include "pacore/errors.hpp"
#include "pacore/rng.hpp"
#include "pacore/strings.hpp"

namespace pacore::reward {

const std::string& builtin_verdict_template() {
  static const std::string tpl =
      "You are a strict grader. Compare the candidate response against the "
      "reference answer and decide whether the candidate arrives at the same "
      "final answer.\n"
      "\n"
      "Question:\n"
      "{{question}}\n"
      "\n"
      "Reference Answer:\n"
      "{{gold}}\n"
      "\n"
      "Candidate Response:\n"
      "{{response}}\n"
      "\n"
      "Reason briefly, then give your decision on the last line in exactly "
      "this form:\n"
      "Verdict: CORRECT or Verdict: INCORRECT\n";
  return tpl;
}

const std::string& builtin_pairwise_template() {
  static const std::string tpl =
      "You are comparing a candidate response against a reference response to "
      "the same prompt. Judge which is better grounded, accurate, and "
      "complete.\n"
      "\n"
      "Prompt:\n"
      "{{prompt}}\n"
      "\n"
      "Reference Response:\n"
      "{{reference}}\n"
      "\n"
      "Candidate Response:\n"
      "{{candidate}}\n"
      "\n"
      "Explain your reasoning first. Then, on the last line, rate the "
      "candidate relative to the reference as a real number between 0 and 1 "
      "(0.5 means equal quality), in exactly this form:\n"
      "Score: <value>\n";
  return tpl;
}

const std::string& builtin_epistemic_template() {
  static const std::string tpl =
      "You are auditing a response for unjustified certainty. Identify claims "
      "stated with confidence that the response does not support with "
      "evidence or reasoning.\n"
      "\n"
      "Question:\n"
      "{{question}}\n"
      "\n"
      "Response:\n"
      "{{response}}\n"
      "\n"
      "Explain any overconfident claims you find. Then, on the last line, "
      "give a penalty between 0 (fully calibrated) and 1 (severely "
      "overconfident), in exactly this form:\n"
      "Penalty: <value>\n";
  return tpl;
}

std::string render_template(
    std::string_view tpl,
    const std::vector<std::pair<std::string, std::string>>& vars) {
  std::string out(tpl);
  for (const auto& [key, value] : vars) {
    const std::string needle = "{{" + key + "}}";
    std::size_t pos = 0;
    while ((pos = out.find(needle, pos)) != std::string::npos) {
      out.replace(pos, needle.size(), value);
      pos += value.size();
    }
  }
  return out;
}

std::string load_template_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("cannot read template file: " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

namespace {

// last scalar following `label` (case-insensitive); nullopt when absent or
// non-numeric
std::optional<double> last_labeled_number(std::string_view text,
                                          std::string_view label) {
  const std::size_t at = rfind_ci(text, label);
  if (at == std::string_view::npos) return std::nullopt;
  std::size_t start = at + label.size();
  std::size_t end = text.find('\n', start);
  if (end == std::string_view::npos) end = text.size();
  return parse_plain_number(trim(text.substr(start, end - start)));
}

}  // namespace

Verdict parse_verdict(std::string_view text) {
  const std::size_t at = rfind_ci(text, "verdict:");
  if (at != std::string_view::npos) {
    std::size_t end = text.find('\n', at);
    if (end == std::string_view::npos) end = text.size();
    const std::string_view line = text.substr(at, end - at);
    if (rfind_ci(line, "incorrect") != std::string_view::npos) {
      return Verdict::Incorrect;
    }
    if (rfind_ci(line, "correct") != std::string_view::npos) {
      return Verdict::Correct;
    }
  }
  // no verdict line: last standalone mention wins
  const std::string lowered = to_lower_ascii(text);
  Verdict verdict = Verdict::Unparseable;
  std::size_t pos = 0;
  while ((pos = lowered.find("correct", pos)) != std::string::npos) {
    const bool negated =
        pos >= 2 && lowered[pos - 2] == 'i' && lowered[pos - 1] == 'n';
    verdict = negated ? Verdict::Incorrect : Verdict::Correct;
    pos += 1;
  }
  return verdict;
}

double parse_pairwise_score(std::string_view text) {
  const auto v = last_labeled_number(text, "score:");
  if (!v) throw ScoringError("judge reply carries no parseable score");
  if (!std::isfinite(*v) || *v < 0.0 || *v > 1.0) {
    throw ScoringError("judge score outside [0, 1]: " + format_sig(*v));
  }
  return *v;
}

std::vector<Verdict> judge_with_model(const std::string& question,
                                      const std::string& response,
                                      const std::string& gold,
                                      const JudgeEndpoint& judge, int passes) {
  if (passes < 1) throw ValidationError("judge passes must be at least 1");
  if (!judge.chat) throw ValidationError("judge endpoint has no client");
  const std::string prompt = render_template(judge.templates.verdict,
                                             {{"question", question},
                                              {"gold", gold},
                                              {"response", response}});
  std::vector<Verdict> verdicts;
  verdicts.reserve(static_cast<std::size_t>(passes));
  for (int i = 0; i < passes; ++i) {
    const std::uint64_t seed =
        derive_seed(judge.seed_base, "judge-pass", static_cast<std::uint64_t>(i));
    try {
      const client::CompletionResult res =
          judge.chat->complete({{"user", prompt}}, judge.params, seed);
      verdicts.push_back(parse_verdict(res.text));
    } catch (const TransportError& e) {
      throw TransportError(e.what(), i);
    }
  }
  return verdicts;
}

double genrm_pairwise(const std::string& prompt, const std::string& candidate,
                      const std::string& reference,
                      const JudgeEndpoint& judge) {
  if (!judge.chat) throw ValidationError("judge endpoint has no client");
  const std::string rendered = render_template(judge.templates.pairwise,
                                               {{"prompt", prompt},
                                                {"reference", reference},
                                                {"candidate", candidate}});
  const std::uint64_t seed = derive_seed(judge.seed_base, "genrm", 0);
  const client::CompletionResult res =
      judge.chat->complete({{"user", rendered}}, judge.params, seed);
  return parse_pairwise_score(res.text);
}

double epistemic_penalty(const PenaltyContext& ctx) {
  if (!ctx.judge || !ctx.judge->chat) return 0.0;
  const std::string rendered =
      render_template(ctx.judge->templates.epistemic,
                      {{"question", std::string(ctx.question)},
                       {"response", std::string(ctx.response)}});
  const std::uint64_t seed = derive_seed(ctx.judge->seed_base, "epistemic", 0);
  try {
    const client::CompletionResult res =
        ctx.judge->chat->complete({{"user", rendered}}, ctx.judge->params, seed);
    const auto v = last_labeled_number(res.text, "penalty:");
    if (!v || !std::isfinite(*v)) return 0.0;
    return std::clamp(*v, 0.0, 1.0);
  } catch (const TransportError&) {
    return 0.0;
  }
}

}  // namespace pacore::reward
