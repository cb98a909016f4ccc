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
#include <vector>

#include "pacore/client/orchestrator.hpp"
#include "pacore/filter/pipeline.hpp"
#include "pacore/reward/judge.hpp"
#include "pacore/reward/spec.hpp"

namespace pacore::eval {

enum class RunMode { SeRe, PaCoRe };

const char* to_string(RunMode m);
RunMode run_mode_from_string(const std::string& s);

struct BenchmarkSpec {
  std::string name;
  std::string task_file;
  reward::ExtractionMode extraction = reward::ExtractionMode::Raw;
  reward::RewardSpec verifier;  // extraction above overrides the one in here
  int repeats = 1;
  RunMode mode = RunMode::SeRe;
  int pacore_n = 16;

  void validate() const;
  bool operator==(const BenchmarkSpec&) const = default;
};

std::string benchmark_spec_to_json(const BenchmarkSpec& spec);
BenchmarkSpec benchmark_spec_from_json(const std::string& text);

/// A JSON document: either one spec object, an array of them, or an object
/// with a "benchmarks" array. Throws ParseError / ValidationError.
std::vector<BenchmarkSpec> load_benchmark_specs(const std::string& path);

/// The spec's task file, id-sorted. Duplicate ids and malformed lines are
/// rejected by the underlying task loader with line numbers.
std::vector<filter::TaskRecord> load_benchmark(const BenchmarkSpec& spec);

struct RunRecord {
  std::string task_id;
  int repeat = 0;
  reward::Verdict verdict = reward::Verdict::Unparseable;
  double reward = 0.0;
  long completion_tokens = 0;  // the answer rollout only
  double latency_ms = 0.0;     // whole pipeline wall time for PaCoRe
  bool error = false;          // generation failed; scored per error policy
};

struct RunResult {
  std::string benchmark;
  RunMode mode = RunMode::SeRe;
  long samples = 0;
  int repeats = 0;
  std::vector<RunRecord> records;  // repeat-major, tasks in id order
  std::vector<double> per_repeat_accuracy;
  double accuracy_mean = 0.0;
  double accuracy_stdev = 0.0;  // population stdev across repeats
  double mean_completion_tokens = 0.0;  // over non-error records
  long errors = 0;
  bool errors_excluded = false;  // error policy used for the denominators
};

struct RunOptions {
  bool exclude_errors = false;  // default: errors count as Incorrect
  std::string template_dir;     // "" sends the question verbatim
  client::ClockFn clock;
  const reward::JudgeEndpoint* judge = nullptr;
};

/// The prompt actually sent for a task: template_dir/{benchmark}.txt with
/// {{question}} substituted when that file exists, the raw question
/// otherwise.
std::string render_benchmark_prompt(const BenchmarkSpec& spec,
                                    const std::string& template_dir,
                                    const std::string& question);

/// samples x repeats runs, each SeRe single-pass or a full coordinated
/// pipeline (pacore_n + 1 requests). Per-repeat accuracy over the repeat's
/// denominator, mean over repeats, population stdev. Deterministic against a
/// seed-honoring endpoint: cell (task, repeat) derives its seeds from
/// (seed, repeat index, task id). Scoring uses the raw question, not the
/// rendered template.
RunResult run_benchmark(const BenchmarkSpec& spec,
                        const client::EndpointConfig& ep, std::uint64_t seed,
                        const RunOptions& opt = {});

struct SummaryRow {
  std::string benchmark;
  RunMode mode = RunMode::SeRe;
  long samples = 0;
  int repeats = 0;
  double accuracy_mean = 0.0;
  double accuracy_stdev = 0.0;
  double mean_completion_tokens = 0.0;
  long errors = 0;
  std::string error_policy;  // "count_incorrect" or "exclude"

  bool operator==(const SummaryRow&) const = default;
};

/// One row per result, result order. Throws ValidationError when empty.
std::vector<SummaryRow> aggregate(const std::vector<RunResult>& results);

enum class ReportFormat { JsonLines, Csv, Markdown };

const char* to_string(ReportFormat f);
ReportFormat report_format_from_string(const std::string& s);

/// All floats rendered to 6 significant digits with a fixed key/column
/// order, so identical results give byte-identical files in every format.
std::string render_report(const std::vector<SummaryRow>& rows,
                          ReportFormat format);
void emit_report(const std::vector<RunResult>& results, ReportFormat format,
                 const std::string& path);

/// Reads back a json-lines report. Round trip: emitting the loaded rows
/// reproduces the file byte for byte.
std::vector<SummaryRow> load_report_jsonl(const std::string& path);

}  // namespace pacore::eval
