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

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "pacore/client/chat_client.hpp"
#include "pacore/reward/penalties.hpp"
#include "pacore/reward/verify.hpp"

namespace pacore::reward {

// Prompt wording is versioned: the strings below must stay byte-identical to
// the files under templates/, which a test enforces. Editing one side means
// editing both.
const std::string& builtin_verdict_template();    // templates/judge_verdict_v1.txt
const std::string& builtin_pairwise_template();   // templates/genrm_pairwise_v1.txt
const std::string& builtin_epistemic_template();  // templates/epistemic_penalty_v1.txt

/// Replaces each {{key}} with its value; unknown placeholders pass through.
std::string render_template(
    std::string_view tpl,
    const std::vector<std::pair<std::string, std::string>>& vars);

/// Whole file as bytes. Throws ConfigError when unreadable.
std::string load_template_file(const std::string& path);

struct JudgeTemplates {
  std::string verdict = builtin_verdict_template();
  std::string pairwise = builtin_pairwise_template();
  std::string epistemic = builtin_epistemic_template();
};

/// A verifier endpoint: a chat client plus the sampling and seed context
/// judge calls run under. Safe for concurrent use (the client is).
struct JudgeEndpoint {
  const client::ChatClient* chat = nullptr;
  client::SamplingParams params;
  std::uint64_t seed_base = 0;
  JudgeTemplates templates;
};

/// Verdict from a judge reply: the last "Verdict:" line wins; without one,
/// the last standalone CORRECT/INCORRECT mention wins ("incorrect" is checked
/// before "correct", which it contains). No decision parses as Unparseable.
Verdict parse_verdict(std::string_view text);

/// Last "Score:" value in the reply. Throws ScoringError when absent,
/// non-numeric, or outside [0, 1].
double parse_pairwise_score(std::string_view text);

/// `passes` independent judge calls, each with a per-pass derived seed, each
/// reply parsed into a Verdict (order preserved). Transport failure past the
/// retry budget raises TransportError carrying the failing pass index.
std::vector<Verdict> judge_with_model(const std::string& question,
                                      const std::string& response,
                                      const std::string& gold,
                                      const JudgeEndpoint& judge, int passes);

/// One pairwise call scoring candidate against reference in [0, 1].
/// Unparseable replies raise ScoringError; the caller decides what to do.
double genrm_pairwise(const std::string& prompt, const std::string& candidate,
                      const std::string& reference,
                      const JudgeEndpoint& judge);

/// Judge-backed calibration penalty in [0, 1]. Returns 0 without a judge, on
/// transport failure, or on an unparseable reply; no accuracy claim is made
/// for this default.
double epistemic_penalty(const PenaltyContext& ctx);

}  // namespace pacore::reward
