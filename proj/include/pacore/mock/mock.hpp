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

#include <atomic>
#include <cstdint>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <thread>
#include <utility>
#include <vector>

namespace pacore::mock {

// Scenario document, JSON:
//
//   {"mode": "scripted",
//    "rules": [
//      {"contains": "substring" | ["all", "of", "these"],
//       "equals": "whole last-message content",
//       "seed_in": [1, 2, 3],
//       "times": 2,
//       "reply": "text",
//       "finish_reason": "stop" | "length",
//       "completion_tokens": 7,
//       "omit_usage": true,
//       "status": 500,
//       "raw_body": "override, sent verbatim",
//       "delay_ms": 30}]}
//
//   {"mode": "arithmetic", "p_correct": 0.5, "ref_threshold": 8,
//    "wrong_offset": 1, "salt": "arith"}
//
// Scripted rules are tried in order against the last message's content; all
// given selectors must hold. "times" limits a rule to its first N matches
// (then it falls through), which scripts fail-then-recover sequences. An
// unmatched request gets a 404 so a bad fixture fails loudly.
//
// Arithmetic mode answers "What is A + B?" prompts: a plain prompt is
// answered correctly with probability p_correct (a deterministic coin on the
// request seed); a synthesis prompt is answered correctly outright when at
// least ref_threshold of its reference responses carry the right final
// answer, and by the same coin otherwise. Replies are "Final answer: N".

struct ScriptedRule {
  std::vector<std::string> contains;
  std::optional<std::string> equals;
  std::vector<std::uint64_t> seed_in;
  long times = -1;  // -1: unlimited
  std::string reply;
  std::string finish_reason = "stop";
  long completion_tokens = -1;  // -1: whitespace token count of reply
  bool omit_usage = false;
  int status = 200;
  std::optional<std::string> raw_body;
  long delay_ms = 0;
};

struct ArithmeticParams {
  double p_correct = 0.5;
  int ref_threshold = 8;
  long wrong_offset = 1;
  std::string salt = "arith";
};

struct MockReply {
  int status = 200;
  std::string body;
  long delay_ms = 0;
};

/// "What is A + B?" anywhere in the text; the last such question wins.
std::optional<std::pair<long, long>> parse_arithmetic_question(
    const std::string& text);

/// The deterministic coin the arithmetic mock flips for a request seed.
bool arithmetic_coin(std::uint64_t seed, const std::string& salt,
                     double p_correct);

/// Number of reference blocks in a serialized synthesis prompt whose last
/// "Final answer:" value equals the original problem's sum. Returns -1 when
/// the text is not a synthesis prompt or carries no parseable question.
int count_correct_references(const std::string& synthesis_prompt);

/// A well-formed chat-completion response body.
std::string make_chat_body(const std::string& content,
                           const std::string& finish_reason,
                           long completion_tokens, bool omit_usage);

class Behavior {
 public:
  static std::shared_ptr<Behavior> scripted(std::vector<ScriptedRule> rules);
  static std::shared_ptr<Behavior> arithmetic(ArithmeticParams params);
  static std::shared_ptr<Behavior> from_json(const std::string& text);
  static std::shared_ptr<Behavior> from_file(const std::string& path);

  /// Full response for one request body. Stateful ("times" counters) and
  /// safe to call concurrently.
  MockReply respond(const std::string& request_body);

 private:
  Behavior() = default;
  bool scripted_mode_ = true;
  std::vector<ScriptedRule> rules_;
  std::vector<long> used_;  // per-rule match counts, guarded by mu_
  ArithmeticParams arith_;
  std::mutex mu_;
};

/// Loopback chat-completion endpoint wrapping the behavior. Binds an
/// ephemeral port on 127.0.0.1 and serves until destruction. The thread pool
/// is sized explicitly so concurrency tests behave the same on single-core
/// machines.
class MockServer {
 public:
  /// port 0 binds an ephemeral port; read it back with port().
  explicit MockServer(std::shared_ptr<Behavior> behavior, int threads = 32,
                      int port = 0);
  ~MockServer();

  MockServer(const MockServer&) = delete;
  MockServer& operator=(const MockServer&) = delete;

  int port() const { return port_; }
  std::string base_url() const;

  long request_count() const { return requests_.load(); }
  int max_concurrent() const { return max_active_.load(); }
  std::vector<std::string> recorded_bodies() const;

 private:
  std::shared_ptr<Behavior> behavior_;
  std::unique_ptr<struct MockServerImpl> impl_;
  std::thread serve_thread_;
  int port_ = 0;
  std::atomic<long> requests_{0};
  std::atomic<int> active_{0};
  std::atomic<int> max_active_{0};
  mutable std::mutex bodies_mu_;
  std::vector<std::string> bodies_;
};

}  // namespace pacore::mock
