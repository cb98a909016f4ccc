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

#include "pacore/eval/harness.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "json.hpp"
#include "pacore/errors.hpp"
#include "pacore/reward/score.hpp"
#include "pacore/rng.hpp"

namespace pacore::eval {
namespace {

using nlohmann::json;

std::string format_sig(double x) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.6g", x);
  return buf;
}

std::string json_string(const std::string& s) { return json(s).dump(); }

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  out += '"';
  return out;
}

}  // namespace

const char* to_string(RunMode m) {
  return m == RunMode::SeRe ? "sere" : "pacore";
}

RunMode run_mode_from_string(const std::string& s) {
  if (s == "sere") return RunMode::SeRe;
  if (s == "pacore") return RunMode::PaCoRe;
  throw ValidationError("unknown run mode \"" + s + "\"");
}

void BenchmarkSpec::validate() const {
  if (name.empty()) throw ValidationError("benchmark name is empty");
  if (task_file.empty()) throw ValidationError("benchmark task_file is empty");
  if (repeats < 1) throw ValidationError("repeats must be at least 1");
  if (pacore_n < 1) throw ValidationError("pacore_n must be at least 1");
  verifier.validate();
}

namespace {

json spec_to_obj(const BenchmarkSpec& spec) {
  json o;
  o["name"] = spec.name;
  o["task_file"] = spec.task_file;
  o["extraction"] = reward::to_string(spec.extraction);
  o["verifier"] = json::parse(reward::reward_spec_to_json(spec.verifier));
  o["repeats"] = spec.repeats;
  o["mode"] = to_string(spec.mode);
  o["pacore_n"] = spec.pacore_n;
  return o;
}

BenchmarkSpec spec_from_obj(const json& o) {
  BenchmarkSpec s;
  s.name = o.at("name").get<std::string>();
  s.task_file = o.at("task_file").get<std::string>();
  if (o.contains("extraction")) {
    s.extraction =
        reward::extraction_mode_from_string(o.at("extraction").get<std::string>());
  }
  if (o.contains("verifier")) {
    s.verifier = reward::reward_spec_from_json(o.at("verifier").dump());
  }
  s.repeats = o.value("repeats", 1);
  if (o.contains("mode")) {
    s.mode = run_mode_from_string(o.at("mode").get<std::string>());
  }
  s.pacore_n = o.value("pacore_n", 16);
  s.validate();
  return s;
}

}  // namespace

std::string benchmark_spec_to_json(const BenchmarkSpec& spec) {
  return spec_to_obj(spec).dump();
}

BenchmarkSpec benchmark_spec_from_json(const std::string& text) {
  try {
    return spec_from_obj(json::parse(text));
  } catch (const json::exception& e) {
    throw ParseError(std::string("malformed benchmark spec: ") + e.what());
  }
}

std::vector<BenchmarkSpec> load_benchmark_specs(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open benchmark spec file: " + path);
  std::stringstream buf;
  buf << in.rdbuf();
  json doc;
  try {
    doc = json::parse(buf.str());
  } catch (const json::exception& e) {
    throw ParseError(std::string("malformed benchmark spec file: ") + e.what());
  }
  const json* arr = nullptr;
  if (doc.is_array()) {
    arr = &doc;
  } else if (doc.is_object() && doc.contains("benchmarks")) {
    arr = &doc.at("benchmarks");
  }
  std::vector<BenchmarkSpec> specs;
  try {
    if (arr) {
      for (const json& o : *arr) specs.push_back(spec_from_obj(o));
    } else {
      specs.push_back(spec_from_obj(doc));
    }
  } catch (const json::exception& e) {
    throw ParseError(std::string("malformed benchmark spec: ") + e.what());
  }
  return specs;
}

std::vector<filter::TaskRecord> load_benchmark(const BenchmarkSpec& spec) {
  spec.validate();
  std::vector<filter::TaskRecord> tasks = filter::load_tasks(spec.task_file);
  std::sort(tasks.begin(), tasks.end(),
            [](const filter::TaskRecord& a, const filter::TaskRecord& b) {
              return a.id < b.id;
            });
  return tasks;
}

std::string render_benchmark_prompt(const BenchmarkSpec& spec,
                                    const std::string& template_dir,
                                    const std::string& question) {
  if (template_dir.empty()) return question;
  std::ifstream in(template_dir + "/" + spec.name + ".txt");
  if (!in) return question;
  std::stringstream buf;
  buf << in.rdbuf();
  return reward::render_template(buf.str(), {{"question", question}});
}

RunResult run_benchmark(const BenchmarkSpec& spec,
                        const client::EndpointConfig& ep, std::uint64_t seed,
                        const RunOptions& opt) {
  spec.validate();
  ep.validate();
  const std::vector<filter::TaskRecord> tasks = load_benchmark(spec);

  RunResult res;
  res.benchmark = spec.name;
  res.mode = spec.mode;
  res.samples = static_cast<long>(tasks.size());
  res.repeats = spec.repeats;
  res.errors_excluded = opt.exclude_errors;

  reward::RewardSpec rs = spec.verifier;
  rs.extraction = spec.extraction;

  std::vector<long> correct(static_cast<std::size_t>(spec.repeats), 0);
  std::vector<long> denom(static_cast<std::size_t>(spec.repeats), 0);
  double token_sum = 0.0;
  long token_count = 0;

  for (int rep = 0; rep < spec.repeats; ++rep) {
    const std::uint64_t rep_seed =
        derive_seed(seed, "repeat", static_cast<std::uint64_t>(rep));
    for (const filter::TaskRecord& task : tasks) {
      client::RolloutContext ctx;
      ctx.prompt_id = task.id;
      ctx.base_seed = rep_seed;
      ctx.clock = opt.clock;
      const std::vector<client::ChatMessage> messages = {
          {"user", render_benchmark_prompt(spec, opt.template_dir,
                                           task.prompt)}};
      const std::int64_t t0 = ctx.now();
      client::Rollout answer;
      if (spec.mode == RunMode::SeRe) {
        answer = client::run_sere(messages, ep, ctx);
      } else {
        answer = client::run_pacore(messages, ep, spec.pacore_n, ctx).final;
      }
      RunRecord rec;
      rec.task_id = task.id;
      rec.repeat = rep;
      rec.latency_ms = static_cast<double>(ctx.now() - t0);

      bool scored = false;
      if (answer.finish_reason != client::FinishReason::Error) {
        rec.completion_tokens = answer.completion_tokens;
        token_sum += static_cast<double>(answer.completion_tokens);
        ++token_count;
        try {
          const reward::ScoreOutcome sc = reward::score_response(
              task.prompt, answer.text, task.gold, rs, opt.judge);
          rec.verdict = sc.verdict;
          rec.reward = sc.reward;
          scored = true;
        } catch (const TransportError&) {
          // judge down for this cell; handled as an error below
        }
      }
      rec.error = !scored;
      const std::size_t r = static_cast<std::size_t>(rep);
      if (scored) {
        ++denom[r];
        if (rec.verdict == reward::Verdict::Correct) ++correct[r];
      } else {
        ++res.errors;
        if (!opt.exclude_errors) ++denom[r];
      }
      res.records.push_back(std::move(rec));
    }
  }

  long total_correct = 0;
  long total_denom = 0;
  bool balanced = true;
  for (std::size_t r = 0; r < denom.size(); ++r) {
    total_correct += correct[r];
    total_denom += denom[r];
    balanced = balanced && denom[r] == denom[0];
    res.per_repeat_accuracy.push_back(
        denom[r] > 0 ? static_cast<double>(correct[r]) /
                           static_cast<double>(denom[r])
                     : 0.0);
  }
  // with equal denominators the mean of per-repeat ratios reduces to one
  // division, which keeps the two accuracy computations bit-identical
  if (balanced && total_denom > 0) {
    res.accuracy_mean = static_cast<double>(total_correct) /
                        static_cast<double>(total_denom);
  } else if (!res.per_repeat_accuracy.empty()) {
    double sum = 0.0;
    for (double a : res.per_repeat_accuracy) sum += a;
    res.accuracy_mean = sum / static_cast<double>(res.per_repeat_accuracy.size());
  }
  double ss = 0.0;
  for (double a : res.per_repeat_accuracy) {
    const double d = a - res.accuracy_mean;
    ss += d * d;
  }
  res.accuracy_stdev =
      res.per_repeat_accuracy.empty()
          ? 0.0
          : std::sqrt(ss / static_cast<double>(res.per_repeat_accuracy.size()));
  res.mean_completion_tokens =
      token_count > 0 ? token_sum / static_cast<double>(token_count) : 0.0;
  return res;
}

std::vector<SummaryRow> aggregate(const std::vector<RunResult>& results) {
  if (results.empty()) {
    throw ValidationError("aggregate over an empty result set");
  }
  std::vector<SummaryRow> rows;
  rows.reserve(results.size());
  for (const RunResult& r : results) {
    SummaryRow row;
    row.benchmark = r.benchmark;
    row.mode = r.mode;
    row.samples = r.samples;
    row.repeats = r.repeats;
    row.accuracy_mean = r.accuracy_mean;
    row.accuracy_stdev = r.accuracy_stdev;
    row.mean_completion_tokens = r.mean_completion_tokens;
    row.errors = r.errors;
    row.error_policy = r.errors_excluded ? "exclude" : "count_incorrect";
    rows.push_back(std::move(row));
  }
  return rows;
}

const char* to_string(ReportFormat f) {
  switch (f) {
    case ReportFormat::JsonLines:
      return "json-lines";
    case ReportFormat::Csv:
      return "csv";
    case ReportFormat::Markdown:
      return "markdown";
  }
  return "json-lines";
}

ReportFormat report_format_from_string(const std::string& s) {
  if (s == "json-lines" || s == "jsonl") return ReportFormat::JsonLines;
  if (s == "csv") return ReportFormat::Csv;
  if (s == "markdown" || s == "md") return ReportFormat::Markdown;
  throw ValidationError("unknown report format \"" + s + "\"");
}

std::string render_report(const std::vector<SummaryRow>& rows,
                          ReportFormat format) {
  std::string out;
  switch (format) {
    case ReportFormat::JsonLines:
      for (const SummaryRow& r : rows) {
        out += "{\"accuracy_mean\":" + format_sig(r.accuracy_mean);
        out += ",\"accuracy_stdev\":" + format_sig(r.accuracy_stdev);
        out += ",\"benchmark\":" + json_string(r.benchmark);
        out += ",\"error_policy\":" + json_string(r.error_policy);
        out += ",\"errors\":" + std::to_string(r.errors);
        out += ",\"mean_completion_tokens\":" +
               format_sig(r.mean_completion_tokens);
        out += ",\"mode\":" + json_string(to_string(r.mode));
        out += ",\"repeats\":" + std::to_string(r.repeats);
        out += ",\"samples\":" + std::to_string(r.samples);
        out += "}\n";
      }
      break;
    case ReportFormat::Csv:
      out =
          "benchmark,mode,samples,repeats,accuracy_mean,accuracy_stdev,"
          "mean_completion_tokens,errors,error_policy\n";
      for (const SummaryRow& r : rows) {
        out += csv_field(r.benchmark);
        out += ",";
        out += to_string(r.mode);
        out += "," + std::to_string(r.samples);
        out += "," + std::to_string(r.repeats);
        out += "," + format_sig(r.accuracy_mean);
        out += "," + format_sig(r.accuracy_stdev);
        out += "," + format_sig(r.mean_completion_tokens);
        out += "," + std::to_string(r.errors);
        out += "," + csv_field(r.error_policy);
        out += "\n";
      }
      break;
    case ReportFormat::Markdown:
      out = "# Evaluation report\n\n";
      out +=
          "| benchmark | mode | samples | repeats | accuracy | stdev | errors "
          "| error policy |\n";
      out += "|---|---|---|---|---|---|---|---|\n";
      for (const SummaryRow& r : rows) {
        out += "| " + r.benchmark + " | " + to_string(r.mode) + " | " +
               std::to_string(r.samples) + " | " + std::to_string(r.repeats) +
               " | " + format_sig(r.accuracy_mean) + " | " +
               format_sig(r.accuracy_stdev) + " | " +
               std::to_string(r.errors) + " | " + r.error_policy + " |\n";
      }
      out += "\n## Length dynamics\n\n";
      out += "| benchmark | mode | mean completion tokens |\n";
      out += "|---|---|---|\n";
      for (const SummaryRow& r : rows) {
        out += "| " + r.benchmark + " | " + to_string(r.mode) + " | " +
               format_sig(r.mean_completion_tokens) + " |\n";
      }
      break;
  }
  return out;
}

void emit_report(const std::vector<RunResult>& results, ReportFormat format,
                 const std::string& path) {
  const std::vector<SummaryRow> rows = aggregate(results);
  std::ofstream out(path, std::ios::trunc | std::ios::binary);
  if (!out) throw ConfigError("cannot open for writing: " + path);
  out << render_report(rows, format);
  if (!out) throw ConfigError("write failed: " + path);
}

std::vector<SummaryRow> load_report_jsonl(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open report file: " + path);
  std::vector<SummaryRow> rows;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty()) continue;
    json o;
    try {
      o = json::parse(line);
      SummaryRow r;
      r.benchmark = o.at("benchmark").get<std::string>();
      r.mode = run_mode_from_string(o.at("mode").get<std::string>());
      r.samples = o.at("samples").get<long>();
      r.repeats = o.at("repeats").get<int>();
      r.accuracy_mean = o.at("accuracy_mean").get<double>();
      r.accuracy_stdev = o.at("accuracy_stdev").get<double>();
      r.mean_completion_tokens = o.at("mean_completion_tokens").get<double>();
      r.errors = o.at("errors").get<long>();
      r.error_policy = o.at("error_policy").get<std::string>();
      rows.push_back(std::move(r));
    } catch (const json::exception& e) {
      throw ParseError(std::string("malformed report row: ") + e.what(),
                       lineno);
    }
  }
  return rows;
}

}  // namespace pacore::eval
