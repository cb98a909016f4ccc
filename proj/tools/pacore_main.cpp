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

#include <cstdint>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "pacore/client/chat_client.hpp"
#include "pacore/client/orchestrator.hpp"
#include "pacore/client/pool_io.hpp"
#include "pacore/errors.hpp"
#include "pacore/eval/harness.hpp"
#include "pacore/filter/pipeline.hpp"
#include "pacore/reward/judge.hpp"
#include "pacore/rng.hpp"

namespace {

using nlohmann::json;
using namespace pacore;

struct CommonOpts {
  std::string config_path;
  std::string base_url;
  std::string model;
  std::string api_key_env;
  int max_in_flight = 4;
  int retry_budget = 3;
  long timeout_ms = 30000;
  double temperature = 1.0;
  double top_p = 1.0;
  int top_k = 0;
  long max_tokens = client::kSereMaxTokens;
  std::uint64_t seed = 0;
  std::int64_t epoch_ms = -1;
  std::string judge_base_url;
  std::string judge_model;
  std::string judge_api_key_env;
};

void add_common(CLI::App* sub, CommonOpts& o) {
  sub->add_option("--config", o.config_path,
                  "Engine configuration file (JSON); flags override it");
  sub->add_option("--base-url", o.base_url, "Endpoint base URL");
  sub->add_option("--model", o.model, "Model name sent in requests");
  sub->add_option("--api-key-env", o.api_key_env,
                  "Environment variable holding the bearer token");
  sub->add_option("--max-in-flight", o.max_in_flight,
                  "Concurrent request cap");
  sub->add_option("--retry-budget", o.retry_budget,
                  "Retries per request on transport failures and 5xx");
  sub->add_option("--timeout-ms", o.timeout_ms, "Per-request timeout");
  sub->add_option("--temperature", o.temperature, "Sampling temperature");
  sub->add_option("--top-p", o.top_p, "Nucleus sampling mass");
  sub->add_option("--top-k", o.top_k, "Top-k cutoff, 0 disables");
  sub->add_option("--max-tokens", o.max_tokens, "Generation token budget");
  sub->add_option("--seed", o.seed, "Base seed for request derivation");
  sub->add_option("--epoch-ms", o.epoch_ms,
                  "Fixed timestamp for cache records (reproducible output)");
}

void add_judge(CLI::App* sub, CommonOpts& o) {
  sub->add_option("--judge-base-url", o.judge_base_url,
                  "Verifier endpoint base URL");
  sub->add_option("--judge-model", o.judge_model, "Verifier model name");
  sub->add_option("--judge-api-key-env", o.judge_api_key_env,
                  "Environment variable holding the verifier bearer token");
}

json load_config(const std::string& path) {
  if (path.empty()) return json::object();
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file: " + path);
  std::stringstream buf;
  buf << in.rdbuf();
  try {
    return json::parse(buf.str());
  } catch (const json::exception& e) {
    throw ParseError(std::string("malformed config file: ") + e.what());
  }
}

template <typename T>
T pick(const CLI::App* sub, const std::string& flag, const T& flag_value,
       const json& cfg, const std::string& pointer, const T& fallback) {
  if (sub->count(flag) > 0) return flag_value;
  return cfg.value(json::json_pointer(pointer), fallback);
}

client::EndpointConfig resolve_endpoint(const CLI::App* sub,
                                        const CommonOpts& o, const json& cfg) {
  client::EndpointConfig ep;
  ep.base_url = pick(sub, "--base-url", o.base_url, cfg, "/endpoint/base_url",
                     std::string());
  ep.model_name =
      pick(sub, "--model", o.model, cfg, "/endpoint/model", std::string());
  ep.api_key_env = pick(sub, "--api-key-env", o.api_key_env, cfg,
                        "/endpoint/api_key_env", std::string());
  ep.max_in_flight = pick(sub, "--max-in-flight", o.max_in_flight, cfg,
                          "/endpoint/max_in_flight", ep.max_in_flight);
  ep.retry_budget = pick(sub, "--retry-budget", o.retry_budget, cfg,
                         "/endpoint/retry_budget", ep.retry_budget);
  ep.timeout_ms = pick(sub, "--timeout-ms", o.timeout_ms, cfg,
                       "/endpoint/timeout_ms", ep.timeout_ms);
  return ep;
}

std::optional<client::EndpointConfig> resolve_judge(const CLI::App* sub,
                                                    const CommonOpts& o,
                                                    const json& cfg) {
  client::EndpointConfig ep;
  ep.base_url = pick(sub, "--judge-base-url", o.judge_base_url, cfg,
                     "/judge_endpoint/base_url", std::string());
  if (ep.base_url.empty()) return std::nullopt;
  ep.model_name = pick(sub, "--judge-model", o.judge_model, cfg,
                       "/judge_endpoint/model", std::string());
  ep.api_key_env = pick(sub, "--judge-api-key-env", o.judge_api_key_env, cfg,
                        "/judge_endpoint/api_key_env", std::string());
  ep.max_in_flight =
      cfg.value(json::json_pointer("/judge_endpoint/max_in_flight"),
                ep.max_in_flight);
  ep.retry_budget =
      cfg.value(json::json_pointer("/judge_endpoint/retry_budget"),
                ep.retry_budget);
  ep.timeout_ms = cfg.value(json::json_pointer("/judge_endpoint/timeout_ms"),
                            ep.timeout_ms);
  return ep;
}

client::SamplingParams resolve_sampling(const CLI::App* sub,
                                        const CommonOpts& o, const json& cfg) {
  client::SamplingParams sp;
  sp.temperature = pick(sub, "--temperature", o.temperature, cfg,
                        "/sampling/temperature", sp.temperature);
  sp.top_p = pick(sub, "--top-p", o.top_p, cfg, "/sampling/top_p", sp.top_p);
  sp.top_k = pick(sub, "--top-k", o.top_k, cfg, "/sampling/top_k", sp.top_k);
  sp.max_tokens = pick(sub, "--max-tokens", o.max_tokens, cfg,
                       "/sampling/max_tokens", sp.max_tokens);
  return sp;
}

std::uint64_t resolve_seed(const CLI::App* sub, const CommonOpts& o,
                           const json& cfg) {
  return pick(sub, "--seed", o.seed, cfg, "/seed", std::uint64_t{0});
}

client::ClockFn resolve_clock(const CommonOpts& o) {
  if (o.epoch_ms < 0) return {};
  const std::int64_t fixed = o.epoch_ms;
  return [fixed] { return fixed; };
}

std::string read_prompt_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("cannot open prompt file: " + path);
  std::stringstream buf;
  buf << in.rdbuf();
  std::string text = buf.str();
  if (!text.empty() && text.back() == '\n') text.pop_back();
  if (!text.empty() && text.back() == '\r') text.pop_back();
  return text;
}

void write_file(const std::string& path, const std::string& bytes) {
  std::ofstream out(path, std::ios::trunc | std::ios::binary);
  if (!out) throw ConfigError("cannot open for writing: " + path);
  out << bytes;
  if (!out) throw ConfigError("write failed: " + path);
}

int cmd_rollout(const CLI::App* sub, const CommonOpts& o,
                const std::string& prompt_file, const std::string& prompt_id,
                int n, const std::string& out_path) {
  const json cfg = load_config(o.config_path);
  const client::EndpointConfig ep = resolve_endpoint(sub, o, cfg);
  const client::SamplingParams sp = resolve_sampling(sub, o, cfg);
  const std::string prompt = read_prompt_file(prompt_file);

  client::RolloutContext ctx;
  ctx.prompt_id = prompt_id;
  ctx.base_seed = resolve_seed(sub, o, cfg);
  ctx.clock = resolve_clock(o);
  const std::vector<client::Rollout> rollouts =
      client::sample_rollouts({{"user", prompt}}, n, ep, sp, ctx);
  client::persist_rollouts(rollouts, out_path);

  long failed = 0;
  for (const client::Rollout& r : rollouts) {
    if (r.finish_reason == client::FinishReason::Error) ++failed;
  }
  std::cout << "wrote " << rollouts.size() << " rollouts to " << out_path
            << " (" << failed << " failed)\n";
  if (failed == static_cast<long>(rollouts.size())) {
    std::cerr << "error: every rollout failed; endpoint unreachable?\n";
    return 2;
  }
  return 0;
}

int cmd_pacore(const CLI::App* sub, const CommonOpts& o,
               const std::string& prompt_file, const std::string& prompt_id,
               int n, const std::string& out_path,
               const std::string& dump_synthesis,
               const std::string& cache_path) {
  const json cfg = load_config(o.config_path);
  const client::EndpointConfig ep = resolve_endpoint(sub, o, cfg);
  const client::SamplingParams sp = resolve_sampling(sub, o, cfg);
  const std::string prompt = read_prompt_file(prompt_file);

  client::RolloutContext ctx;
  ctx.prompt_id = prompt_id;
  ctx.base_seed = resolve_seed(sub, o, cfg);
  ctx.clock = resolve_clock(o);
  const client::PacoreResult res =
      client::run_pacore({{"user", prompt}}, ep, n, ctx, &sp);

  if (!out_path.empty()) write_file(out_path, res.final.text + "\n");
  if (!dump_synthesis.empty()) write_file(dump_synthesis, res.synthesis_prompt);
  if (!cache_path.empty()) client::persist_rollouts(res.rollouts, cache_path);

  std::cout << res.final.text << "\n";
  if (res.final.finish_reason == client::FinishReason::Error) {
    std::cerr << "error: synthesis call failed\n";
    return 2;
  }
  return 0;
}

int cmd_filter(const CLI::App* sub, const CommonOpts& o,
               const std::string& tasks_path, const std::string& out_tasks,
               const std::string& pool_path, const std::string& report_path,
               int k, int m, int passes, bool no_synthesis,
               double threshold, bool threshold_set) {
  const json cfg = load_config(o.config_path);
  const std::vector<filter::TaskRecord> tasks = filter::load_tasks(tasks_path);

  filter::PipelineConfig pc;
  pc.endpoint = resolve_endpoint(sub, o, cfg);
  pc.judge_endpoint = resolve_judge(sub, o, cfg);
  pc.checkability_passes = passes;
  pc.difficulty_k = k;
  pc.synthesis_m = m;
  pc.run_synthesis = !no_synthesis;
  pc.seed = resolve_seed(sub, o, cfg);
  pc.sampling = resolve_sampling(sub, o, cfg);
  if (threshold_set) pc.pass_threshold = threshold;
  pc.pool_path = !pool_path.empty()
                     ? pool_path
                     : cfg.value(json::json_pointer("/paths/pools"),
                                 std::string());
  pc.clock = resolve_clock(o);

  const filter::PipelineResult result = filter::run_pipeline(tasks, pc);
  if (!out_tasks.empty()) filter::save_tasks(result.retained, out_tasks);
  const std::string report_out =
      !report_path.empty() ? report_path
                           : cfg.value(json::json_pointer("/paths/reports"),
                                       std::string());
  if (!report_out.empty()) filter::persist_report(result.report, report_out);

  const filter::FiltrationReport& r = result.report;
  std::cout << "input=" << r.input << " checkable=" << r.checkable
            << " relevant=" << r.relevant << " all_accept=" << r.all_accept
            << " some_accept=" << r.some_accept
            << " none_accept=" << r.none_accept
            << " synthesis_retained=" << r.synthesis_retained << "\n";
  return 0;
}

int cmd_eval(const CLI::App* sub, const CommonOpts& o,
             const std::string& spec_path, const std::string& format_name,
             const std::string& out_path, const std::string& template_dir,
             bool exclude_errors) {
  const json cfg = load_config(o.config_path);
  const client::EndpointConfig ep = resolve_endpoint(sub, o, cfg);
  const std::optional<client::EndpointConfig> judge_ep =
      resolve_judge(sub, o, cfg);
  const std::uint64_t seed = resolve_seed(sub, o, cfg);

  std::optional<client::ChatClient> judge_chat;
  reward::JudgeEndpoint judge;
  eval::RunOptions opt;
  opt.exclude_errors = exclude_errors;
  opt.template_dir = sub->count("--template-dir") > 0
                         ? template_dir
                         : cfg.value(json::json_pointer("/paths/templates"),
                                     template_dir);
  opt.clock = resolve_clock(o);
  if (judge_ep) {
    judge_chat.emplace(*judge_ep);
    judge.chat = &*judge_chat;
    judge.seed_base = derive_seed(seed, "judge", 0);
    opt.judge = &judge;
  }

  std::vector<eval::RunResult> results;
  for (const eval::BenchmarkSpec& spec :
       eval::load_benchmark_specs(spec_path)) {
    results.push_back(eval::run_benchmark(spec, ep, seed, opt));
  }
  const eval::ReportFormat format =
      eval::report_format_from_string(format_name);
  const std::string rendered =
      eval::render_report(eval::aggregate(results), format);
  const std::string report_out =
      !out_path.empty() ? out_path
                        : cfg.value(json::json_pointer("/paths/reports"),
                                    std::string());
  if (!report_out.empty()) {
    write_file(report_out, rendered);
    std::cout << "wrote report to " << report_out << "\n";
  } else {
    std::cout << rendered;
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{
      "Test-time compute scaling engine: single-pass and coordinated "
      "multi-rollout inference, data filtration, and benchmark evaluation "
      "against chat-completion endpoints"};
  app.require_subcommand(1);
  int exit_code = 0;

  CommonOpts o;

  auto* rollout = app.add_subcommand(
      "rollout", "Sample n rollouts for a prompt and write the cache");
  std::string ro_prompt_file;
  std::string ro_prompt_id = "prompt";
  int ro_n = 1;
  std::string ro_out = "rollouts.jsonl";
  add_common(rollout, o);
  rollout->add_option("--prompt-file", ro_prompt_file,
                      "Text file holding the user prompt")
      ->required();
  rollout->add_option("--prompt-id", ro_prompt_id,
                      "Identity used for seed derivation");
  rollout->add_option("--n", ro_n, "Number of rollouts");
  rollout->add_option("--out", ro_out, "Cache file to write");
  rollout->callback([&] {
    exit_code = cmd_rollout(rollout, o, ro_prompt_file, ro_prompt_id, ro_n,
                            ro_out);
  });

  auto* pacore = app.add_subcommand(
      "pacore",
      "Coordinated reasoning: n rollouts, then one synthesis call");
  std::string pc_prompt_file;
  std::string pc_prompt_id = "prompt";
  int pc_n = client::kPacoreDefaultRollouts;
  std::string pc_out;
  std::string pc_dump;
  std::string pc_cache;
  add_common(pacore, o);
  pacore->add_option("--prompt-file", pc_prompt_file,
                     "Text file holding the user prompt")
      ->required();
  pacore->add_option("--prompt-id", pc_prompt_id,
                     "Identity used for seed derivation");
  pacore->add_option("--n", pc_n, "First-stage rollout count");
  pacore->add_option("--out", pc_out, "File for the final answer text");
  pacore->add_option("--dump-synthesis", pc_dump,
                     "File for the exact serialized synthesis prompt");
  pacore->add_option("--cache", pc_cache,
                     "Cache file for the first-stage rollouts");
  pacore->callback([&] {
    exit_code = cmd_pacore(pacore, o, pc_prompt_file, pc_prompt_id, pc_n,
                           pc_out, pc_dump, pc_cache);
  });

  auto* filter_cmd = app.add_subcommand(
      "filter", "Run the data filtration pipeline over a task file");
  std::string fi_tasks;
  std::string fi_out_tasks;
  std::string fi_pool;
  std::string fi_report;
  int fi_k = filter::kDifficultyRollouts;
  int fi_m = filter::kSynthesisRegenerations;
  int fi_passes = filter::kCheckabilityPasses;
  bool fi_no_synthesis = false;
  double fi_threshold = 1.0;
  add_common(filter_cmd, o);
  add_judge(filter_cmd, o);
  filter_cmd->add_option("--tasks", fi_tasks, "Task file, one JSON per line")
      ->required();
  filter_cmd->add_option("--out-tasks", fi_out_tasks,
                         "File for the retained tasks");
  filter_cmd->add_option("--pool", fi_pool,
                         "Pool cache file; reruns resume from it");
  filter_cmd->add_option("--report", fi_report, "Report file");
  filter_cmd->add_option("--k", fi_k, "Rollouts per prompt for labeling");
  filter_cmd->add_option("--m", fi_m, "Coordinated regenerations per prompt");
  filter_cmd->add_option("--passes", fi_passes,
                         "Verification passes for checkability");
  filter_cmd->add_option("--threshold", fi_threshold,
                         "Accept threshold; defaults per verifier kind");
  filter_cmd->add_flag("--no-synthesis", fi_no_synthesis,
                       "Skip the coordinated filtration stage");
  filter_cmd->callback([&] {
    exit_code = cmd_filter(filter_cmd, o, fi_tasks, fi_out_tasks, fi_pool,
                           fi_report, fi_k, fi_m, fi_passes, fi_no_synthesis,
                           fi_threshold,
                           filter_cmd->count("--threshold") > 0);
  });

  auto* eval_cmd = app.add_subcommand(
      "eval", "Run benchmarks from a spec file and emit a report");
  std::string ev_spec;
  std::string ev_format = "json-lines";
  std::string ev_out;
  std::string ev_template_dir;
  bool ev_exclude_errors = false;
  add_common(eval_cmd, o);
  add_judge(eval_cmd, o);
  eval_cmd->add_option("--spec", ev_spec, "Benchmark spec file (JSON)")
      ->required();
  eval_cmd->add_option("--format", ev_format,
                       "Report format: json-lines, csv, or markdown");
  eval_cmd->add_option("--out", ev_out,
                       "Report file; stdout when omitted");
  eval_cmd->add_option("--template-dir", ev_template_dir,
                       "Directory of per-benchmark prompt templates");
  eval_cmd->add_flag("--exclude-errors", ev_exclude_errors,
                     "Drop errored runs from accuracy denominators");
  eval_cmd->callback([&] {
    exit_code = cmd_eval(eval_cmd, o, ev_spec, ev_format, ev_out,
                         ev_template_dir, ev_exclude_errors);
  });

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : 1;
  } catch (const TransportError& e) {
    std::cerr << "transport error: " << e.what() << "\n";
    return 2;
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return exit_code;
}
