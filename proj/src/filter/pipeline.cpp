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

#include "pacore/filter/pipeline.hpp"

#include <fstream>
#include <unordered_map>
#include <unordered_set>

#include "json.hpp"
#include "pacore/client/parallel.hpp"
#include "pacore/client/pool_io.hpp"
#include "pacore/errors.hpp"
#include "pacore/reward/score.hpp"
#include "pacore/rng.hpp"
#include "pacore/synthesis/synthesis.hpp"

namespace pacore::filter {
namespace {

using nlohmann::json;

json task_to_obj(const TaskRecord& task) {
  json o;
  o["id"] = task.id;
  o["prompt"] = task.prompt;
  o["gold"] = task.gold;
  o["reward_spec"] = json::parse(reward::reward_spec_to_json(task.reward_spec));
  o["image_refs"] = task.image_refs;
  return o;
}

TaskRecord task_from_obj(const json& o) {
  TaskRecord t;
  t.id = o.at("id").get<std::string>();
  t.prompt = o.at("prompt").get<std::string>();
  t.gold = o.at("gold").get<std::string>();
  t.reward_spec = reward::reward_spec_from_json(o.at("reward_spec").dump());
  if (o.contains("image_refs")) {
    t.image_refs = o.at("image_refs").get<std::vector<std::string>>();
  }
  return t;
}

std::vector<double> entry_rewards(const client::MessagePoolEntry& entry) {
  std::vector<double> rewards;
  rewards.reserve(entry.rollouts.size());
  for (const client::Rollout& r : entry.rollouts) {
    rewards.push_back(r.reward.value_or(0.0));
  }
  return rewards;
}

}  // namespace

std::string task_to_json(const TaskRecord& task) {
  return task_to_obj(task).dump();
}

std::vector<TaskRecord> load_tasks(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open task file: " + path);
  std::vector<TaskRecord> tasks;
  std::unordered_set<std::string> seen;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty()) continue;
    TaskRecord t;
    try {
      t = task_from_obj(json::parse(line));
      t.reward_spec.validate();
    } catch (const json::exception& e) {
      throw ParseError(std::string("malformed task record: ") + e.what(),
                       lineno);
    } catch (const ValidationError& e) {
      throw ParseError(std::string("invalid task record: ") + e.what(),
                       lineno);
    }
    if (!seen.insert(t.id).second) {
      throw ParseError("duplicate task id \"" + t.id + "\"", lineno);
    }
    tasks.push_back(std::move(t));
  }
  return tasks;
}

void save_tasks(const std::vector<TaskRecord>& tasks, const std::string& path) {
  std::ofstream out(path, std::ios::trunc);
  if (!out) throw ConfigError("cannot open for writing: " + path);
  for (const TaskRecord& t : tasks) out << task_to_json(t) << "\n";
  if (!out) throw ConfigError("write failed: " + path);
}

double default_pass_threshold(const reward::RewardSpec& spec) {
  switch (spec.verifier) {
    case reward::VerifierKind::IoUGate:
    case reward::VerifierKind::PointDecay:
      return 0.5;
    default:
      return 1.0;
  }
}

client::SolvabilityLabel classify_solvability(const std::vector<double>& rewards,
                                              double pass_threshold) {
  if (rewards.empty()) {
    throw ValidationError("classify_solvability over an empty reward sequence");
  }
  if (!(pass_threshold > 0.0) || pass_threshold > 1.0) {
    throw ValidationError("pass_threshold must lie in (0, 1]");
  }
  std::size_t passes = 0;
  for (double r : rewards) {
    if (r >= pass_threshold) ++passes;
  }
  if (passes == rewards.size()) return client::SolvabilityLabel::AllAccept;
  if (passes == 0) return client::SolvabilityLabel::NoneAccept;
  return client::SolvabilityLabel::SomeAccept;
}

CheckOutcome checkability_filter(const TaskRecord& task,
                                 const reward::JudgeEndpoint& judge,
                                 int passes) {
  CheckOutcome out;
  std::vector<reward::Verdict> verdicts;
  try {
    verdicts =
        reward::judge_with_model(task.prompt, task.gold, task.gold, judge,
                                 passes);
  } catch (const TransportError& e) {
    out.stage_error = true;
    out.error = e.what();
    return out;
  }
  out.retained = reward::consensus_all_agree(verdicts);
  out.gold_repair =
      out.retained && verdicts.front() == reward::Verdict::Incorrect;
  return out;
}

std::pair<client::SolvabilityLabel, client::MessagePoolEntry> difficulty_filter(
    const TaskRecord& task, const client::EndpointConfig& ep, int k,
    const StageOptions& opt) {
  if (k < 2) throw ValidationError("difficulty_filter needs k >= 2");
  client::RolloutContext ctx;
  ctx.prompt_id = task.id;
  ctx.base_seed = opt.base_seed;
  ctx.clock = opt.clock;
  const std::vector<client::ChatMessage> prompt = {{"user", task.prompt}};
  client::MessagePoolEntry entry;
  entry.prompt_id = task.id;
  entry.rollouts = client::sample_rollouts(prompt, k, ep, opt.sampling, ctx);

  for (client::Rollout& r : entry.rollouts) {
    if (r.finish_reason == client::FinishReason::Error) continue;
    try {
      const reward::ScoreOutcome sc = reward::score_response(
          task.prompt, r.text, task.gold, task.reward_spec, opt.judge);
      r.reward = sc.reward;
      r.extracted_answer = sc.extracted;
    } catch (const TransportError&) {
      // judge unreachable for this rollout; unscored entries count as fails
    }
  }
  const double threshold =
      opt.pass_threshold.value_or(default_pass_threshold(task.reward_spec));
  entry.label = classify_solvability(entry_rewards(entry), threshold);
  return {entry.label, entry};
}

bool synthesis_filter(const TaskRecord& task,
                      const client::MessagePoolEntry& entry,
                      const client::EndpointConfig& ep, int m,
                      const StageOptions& opt) {
  if (entry.label != client::SolvabilityLabel::SomeAccept) {
    throw ValidationError(
        "synthesis_filter expects a SomeAccept pool entry for task \"" +
        task.id + "\"");
  }
  if (m < 1) throw ValidationError("synthesis_filter needs m >= 1");
  ep.validate();

  // same raised budget the coordinated final pass runs under
  client::SamplingParams sp = opt.sampling;
  sp.max_tokens = client::kPacoreFinalMaxTokens;

  const client::ChatClient chat(ep);
  std::vector<double> rewards(static_cast<std::size_t>(m), 0.0);
  client::run_indexed(rewards.size(), ep.max_in_flight, [&](std::size_t j) {
    synthesis::SynthesisRequest req;
    req.original_prompt = task.prompt;
    req.references = synthesis::sample_references(
        entry, synthesis::kMinSynthesisRefs, synthesis::kMaxSynthesisRefs,
        derive_seed(opt.base_seed, "synth-refs:" + task.id, j));
    const std::vector<client::ChatMessage> messages = {
        {"user", synthesis::serialize_synthesis_prompt(req)}};
    const std::uint64_t seed =
        derive_seed(opt.base_seed, "synth-gen:" + task.id, j);
    try {
      const client::CompletionResult res = chat.complete(messages, sp, seed);
      const reward::ScoreOutcome sc = reward::score_response(
          task.prompt, res.text, task.gold, task.reward_spec, opt.judge);
      rewards[j] = sc.reward;
    } catch (const TransportError&) {
      // failed regeneration scores zero
    }
  });
  const double threshold =
      opt.pass_threshold.value_or(default_pass_threshold(task.reward_spec));
  return classify_solvability(rewards, threshold) ==
         client::SolvabilityLabel::SomeAccept;
}

namespace {

json audit_to_obj(const TaskAudit& a) {
  json o;
  o["id"] = a.id;
  o["checkable"] = a.checkable;
  o["gold_repair"] = a.gold_repair;
  o["check_error"] = a.check_error;
  o["relevant"] = a.relevant;
  o["label"] = a.label ? json(to_string(*a.label)) : json(nullptr);
  o["synthesis_ran"] = a.synthesis_ran;
  o["synthesis_retained"] = a.synthesis_retained;
  o["error"] = a.error;
  return o;
}

TaskAudit audit_from_obj(const json& o) {
  TaskAudit a;
  a.id = o.at("id").get<std::string>();
  a.checkable = o.at("checkable").get<bool>();
  a.gold_repair = o.at("gold_repair").get<bool>();
  a.check_error = o.at("check_error").get<bool>();
  a.relevant = o.at("relevant").get<bool>();
  if (!o.at("label").is_null()) {
    a.label = client::solvability_from_string(o.at("label").get<std::string>());
  }
  a.synthesis_ran = o.at("synthesis_ran").get<bool>();
  a.synthesis_retained = o.at("synthesis_retained").get<bool>();
  a.error = o.at("error").get<std::string>();
  return a;
}

}  // namespace

std::string report_to_json(const FiltrationReport& report) {
  json o;
  o["input"] = report.input;
  o["checkable"] = report.checkable;
  o["relevant"] = report.relevant;
  o["all_accept"] = report.all_accept;
  o["some_accept"] = report.some_accept;
  o["none_accept"] = report.none_accept;
  o["synthesis_retained"] = report.synthesis_retained;
  o["synthesis_enabled"] = report.synthesis_enabled;
  o["relevance_stage"] = report.relevance_stage;
  json audits = json::array();
  for (const TaskAudit& a : report.audits) audits.push_back(audit_to_obj(a));
  o["audits"] = std::move(audits);
  return o.dump();
}

FiltrationReport report_from_json(const std::string& text) {
  json o;
  try {
    o = json::parse(text);
  } catch (const json::exception& e) {
    throw ParseError(std::string("malformed report: ") + e.what());
  }
  FiltrationReport r;
  r.input = o.at("input").get<long>();
  r.checkable = o.at("checkable").get<long>();
  r.relevant = o.at("relevant").get<long>();
  r.all_accept = o.at("all_accept").get<long>();
  r.some_accept = o.at("some_accept").get<long>();
  r.none_accept = o.at("none_accept").get<long>();
  r.synthesis_retained = o.at("synthesis_retained").get<long>();
  r.synthesis_enabled = o.at("synthesis_enabled").get<bool>();
  r.relevance_stage = o.at("relevance_stage").get<std::string>();
  for (const json& a : o.at("audits")) r.audits.push_back(audit_from_obj(a));
  return r;
}

void persist_report(const FiltrationReport& report, const std::string& path) {
  std::ofstream out(path, std::ios::trunc);
  if (!out) throw ConfigError("cannot open for writing: " + path);
  out << client::kPoolHeader << "\n";
  json o = json::parse(report_to_json(report));
  o["kind"] = "report";
  out << o.dump() << "\n";
  if (!out) throw ConfigError("write failed: " + path);
}

FiltrationReport load_report(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open report file: " + path);
  std::string line;
  if (!std::getline(in, line) || line != client::kPoolHeader) {
    throw ParseError("expected header \"" + std::string(client::kPoolHeader) +
                         "\"",
                     1);
  }
  std::size_t lineno = 1;
  while (std::getline(in, line)) {
    ++lineno;
    json o;
    try {
      o = json::parse(line);
    } catch (const json::exception& e) {
      throw ParseError(std::string("malformed record: ") + e.what(), lineno);
    }
    if (o.value("kind", "") != "report") continue;
    o.erase("kind");
    return report_from_json(o.dump());
  }
  throw ParseError("no report record found", lineno);
}

PipelineResult run_pipeline(const std::vector<TaskRecord>& tasks,
                            const PipelineConfig& config) {
  config.endpoint.validate();
  if (config.judge_endpoint) config.judge_endpoint->validate();
  PipelineResult result;
  FiltrationReport& report = result.report;
  report.input = static_cast<long>(tasks.size());
  report.synthesis_enabled = config.run_synthesis;
  report.relevance_stage = config.relevance_name;

  const client::EndpointConfig& judge_ep =
      config.judge_endpoint ? *config.judge_endpoint : config.endpoint;
  const client::ChatClient judge_chat(judge_ep);

  std::unordered_map<std::string, client::MessagePoolEntry> resume;
  if (!config.pool_path.empty()) {
    std::ifstream probe(config.pool_path);
    if (probe) {
      for (client::MessagePoolEntry& e : client::load_pool(config.pool_path)) {
        resume.emplace(e.prompt_id, std::move(e));
      }
    }
  }

  StageOptions opt;
  opt.base_seed = config.seed;
  opt.sampling = config.sampling;
  opt.pass_threshold = config.pass_threshold;
  opt.clock = config.clock;

  for (const TaskRecord& task : tasks) {
    TaskAudit audit;
    audit.id = task.id;

    reward::JudgeEndpoint judge;
    judge.chat = &judge_chat;
    judge.params = config.judge_sampling;
    judge.seed_base = derive_seed(config.seed, "check:" + task.id, 0);
    opt.judge = &judge;

    const CheckOutcome check =
        checkability_filter(task, judge, config.checkability_passes);
    audit.checkable = check.retained;
    audit.gold_repair = check.gold_repair;
    audit.check_error = check.stage_error;
    audit.error = check.error;
    if (!check.retained) {
      report.audits.push_back(std::move(audit));
      continue;
    }
    report.checkable++;

    audit.relevant = config.relevance ? config.relevance(task) : true;
    if (!audit.relevant) {
      report.audits.push_back(std::move(audit));
      continue;
    }
    report.relevant++;

    try {
      client::MessagePoolEntry entry;
      const auto hit = resume.find(task.id);
      if (hit != resume.end()) {
        entry = hit->second;
        audit.pool_reused = true;
        const double threshold = opt.pass_threshold.value_or(
            default_pass_threshold(task.reward_spec));
        entry.label = classify_solvability(entry_rewards(entry), threshold);
      } else {
        entry =
            difficulty_filter(task, config.endpoint, config.difficulty_k, opt)
                .second;
        if (!config.pool_path.empty()) {
          client::append_pool_entry(entry, config.pool_path);
        }
      }
      audit.label = entry.label;
      switch (entry.label) {
        case client::SolvabilityLabel::AllAccept:
          report.all_accept++;
          break;
        case client::SolvabilityLabel::SomeAccept:
          report.some_accept++;
          break;
        case client::SolvabilityLabel::NoneAccept:
          report.none_accept++;
          break;
      }
      result.pools.push_back(entry);

      if (entry.label != client::SolvabilityLabel::SomeAccept) {
        report.audits.push_back(std::move(audit));
        continue;
      }
      if (!config.run_synthesis) {
        // stage disabled: some-accept passes straight through
        report.synthesis_retained++;
        result.retained.push_back(task);
        report.audits.push_back(std::move(audit));
        continue;
      }
      audit.synthesis_ran = true;
      audit.synthesis_retained = synthesis_filter(
          task, entry, config.endpoint, config.synthesis_m, opt);
      if (audit.synthesis_retained) {
        report.synthesis_retained++;
        result.retained.push_back(task);
      }
    } catch (const Error& e) {
      audit.error = e.what();
    }
    report.audits.push_back(std::move(audit));
  }
  return result;
}

}  // namespace pacore::filter
