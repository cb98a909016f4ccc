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
#include <functional>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "pacore/client/orchestrator.hpp"
#include "pacore/client/types.hpp"
#include "pacore/reward/judge.hpp"
#include "pacore/reward/spec.hpp"

namespace pacore::filter {

inline constexpr int kCheckabilityPasses = 4;
inline constexpr int kDifficultyRollouts = 24;
inline constexpr int kSynthesisRegenerations = 8;

struct TaskRecord {
  std::string id;
  std::string prompt;
  std::string gold;
  reward::RewardSpec reward_spec;
  std::vector<std::string> image_refs;  // opaque, passed through untouched

  bool operator==(const TaskRecord&) const = default;
};

std::string task_to_json(const TaskRecord& task);

/// One JSON task per line, no header. Throws ParseError with the 1-based
/// line number on malformed records or a duplicate id (the id is named).
std::vector<TaskRecord> load_tasks(const std::string& path);
void save_tasks(const std::vector<TaskRecord>& tasks, const std::string& path);

/// Accept threshold when the config leaves it unset: 1.0 for the binary
/// verifiers, 0.5 for the continuous geometry rewards.
double default_pass_threshold(const reward::RewardSpec& spec);

/// passes = #{r >= pass_threshold}. AllAccept at passes == n, NoneAccept at
/// 0, SomeAccept strictly between. Permutation-invariant. Throws
/// ValidationError on empty rewards or a threshold outside (0, 1].
client::SolvabilityLabel classify_solvability(const std::vector<double>& rewards,
                                              double pass_threshold);

struct CheckOutcome {
  bool retained = false;
  bool gold_repair = false;  // unanimous Incorrect: gold label suspect
  bool stage_error = false;  // transport failure, dropped conservatively
  std::string error;
};

/// Four independent judge passes on the task's gold answer as its own
/// candidate; retained iff all passes agree. Unanimous Incorrect still
/// retains but flags the task for gold repair. Transport failure never
/// throws here; it comes back as stage_error.
CheckOutcome checkability_filter(const TaskRecord& task,
                                 const reward::JudgeEndpoint& judge,
                                 int passes = kCheckabilityPasses);

// Knobs shared by the per-stage entry points. The pipeline fills these from
// its own config; standalone callers mostly keep the defaults.
struct StageOptions {
  std::uint64_t base_seed = 0;
  client::SamplingParams sampling;  // single-pass defaults
  std::optional<double> pass_threshold;  // unset: default_pass_threshold
  const reward::JudgeEndpoint* judge = nullptr;  // ModelJudge tasks only
  client::ClockFn clock;
};

/// k rollouts of the prompt, each scored under the task's RewardSpec, then
/// classified. The pool entry keeps all k rollouts whatever the label; Error
/// rollouts carry no reward and count as failures for classification.
std::pair<client::SolvabilityLabel, client::MessagePoolEntry> difficulty_filter(
    const TaskRecord& task, const client::EndpointConfig& ep,
    int k = kDifficultyRollouts, const StageOptions& opt = {});

/// Replays the task m times in the coordinated setting: references sampled
/// from the entry, serialized, one generation each, scored. True iff the m
/// coordinated rewards still classify SomeAccept. Requires entry.label ==
/// SomeAccept (ValidationError otherwise).
bool synthesis_filter(const TaskRecord& task,
                      const client::MessagePoolEntry& entry,
                      const client::EndpointConfig& ep,
                      int m = kSynthesisRegenerations,
                      const StageOptions& opt = {});

using RelevanceHook = std::function<bool(const TaskRecord&)>;

struct TaskAudit {
  std::string id;
  bool checkable = false;
  bool gold_repair = false;
  bool check_error = false;
  bool relevant = false;
  std::optional<client::SolvabilityLabel> label;
  bool pool_reused = false;  // difficulty rollouts came from the pool file
  bool synthesis_ran = false;
  bool synthesis_retained = false;
  std::string error;

  bool operator==(const TaskAudit&) const = default;
};

struct FiltrationReport {
  long input = 0;
  long checkable = 0;
  long relevant = 0;
  long all_accept = 0;
  long some_accept = 0;
  long none_accept = 0;
  long synthesis_retained = 0;
  bool synthesis_enabled = true;
  std::string relevance_stage = "identity";
  std::vector<TaskAudit> audits;  // input order

  bool operator==(const FiltrationReport&) const = default;
};

/// Byte-stable JSON (sorted keys); the resume test compares these strings.
/// pool_reused is deliberately excluded so a resumed run serializes
/// identically to an uninterrupted one.
std::string report_to_json(const FiltrationReport& report);
FiltrationReport report_from_json(const std::string& text);

void persist_report(const FiltrationReport& report, const std::string& path);
FiltrationReport load_report(const std::string& path);

struct PipelineConfig {
  client::EndpointConfig endpoint;
  std::optional<client::EndpointConfig> judge_endpoint;  // unset: endpoint
  int checkability_passes = kCheckabilityPasses;
  int difficulty_k = kDifficultyRollouts;
  int synthesis_m = kSynthesisRegenerations;
  bool run_synthesis = true;
  std::uint64_t seed = 0;
  client::SamplingParams sampling;
  client::SamplingParams judge_sampling;
  std::optional<double> pass_threshold;
  RelevanceHook relevance;  // empty: identity stage
  std::string relevance_name = "identity";
  std::string pool_path;  // set: entries persisted per task, reused on rerun
  client::ClockFn clock;
};

struct PipelineResult {
  std::vector<TaskRecord> retained;
  std::vector<client::MessagePoolEntry> pools;  // tasks that reached difficulty
  FiltrationReport report;
};

/// checkability, then the relevance hook, then difficulty tagging, then
/// (optionally) synthesis filtration, each stage a subset of the last.
/// Per-task failures are recorded in the audit and the run continues. With
/// pool_path set, each difficulty entry is appended as soon as it is
/// computed, and a rerun reuses persisted entries instead of resampling, so
/// a killed run resumes to an identical report.
PipelineResult run_pipeline(const std::vector<TaskRecord>& tasks,
                            const PipelineConfig& config);

}  // namespace pacore::filter
