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

#include "pacore/mock/mock.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>

#include "json.hpp"
#include "pacore/errors.hpp"
#include "pacore/rng.hpp"
#include "pacore/strings.hpp"

namespace pacore::mock {
namespace {

using nlohmann::json;

long whitespace_tokens(const std::string& text) {
  long count = 0;
  bool in_token = false;
  for (char c : text) {
    const bool ws = c == ' ' || c == '\t' || c == '\n' || c == '\r';
    if (!ws && !in_token) ++count;
    in_token = !ws;
  }
  return count;
}

std::optional<long> last_final_answer(const std::string& text) {
  const std::size_t at = rfind_ci(text, "final answer:");
  if (at == std::string::npos) return std::nullopt;
  long value = 0;
  if (std::sscanf(text.c_str() + at + 13, " %ld", &value) != 1) {
    return std::nullopt;
  }
  return value;
}

}  // namespace

std::optional<std::pair<long, long>> parse_arithmetic_question(
    const std::string& text) {
  std::optional<std::pair<long, long>> found;
  std::size_t pos = 0;
  while ((pos = text.find("What is ", pos)) != std::string::npos) {
    long a = 0;
    long b = 0;
    if (std::sscanf(text.c_str() + pos, "What is %ld + %ld ?", &a, &b) == 2 ||
        std::sscanf(text.c_str() + pos, "What is %ld + %ld?", &a, &b) == 2) {
      found = {a, b};
    }
    pos += 8;
  }
  return found;
}

bool arithmetic_coin(std::uint64_t seed, const std::string& salt,
                     double p_correct) {
  DetRng rng(derive_seed(seed, salt, 0));
  return rng.uniform01() < p_correct;
}

int count_correct_references(const std::string& synthesis_prompt) {
  if (synthesis_prompt.find("Reference Responses:") == std::string::npos) {
    return -1;
  }
  const auto question = parse_arithmetic_question(synthesis_prompt);
  if (!question) return -1;
  const long sum = question->first + question->second;

  int correct = 0;
  std::istringstream lines(synthesis_prompt);
  std::string line;
  bool in_refs = false;
  std::string block;
  const auto flush = [&] {
    if (block.empty()) return;
    const auto answer = last_final_answer(block);
    if (answer && *answer == sum) ++correct;
    block.clear();
  };
  while (std::getline(lines, line)) {
    if (!in_refs) {
      in_refs = line == "Reference Responses:";
      continue;
    }
    long index = 0;
    int consumed = 0;
    std::sscanf(line.c_str(), "Reference %ld:%n", &index, &consumed);
    if (consumed > 0 && static_cast<std::size_t>(consumed) == line.size()) {
      flush();
      continue;
    }
    if (line.empty()) break;  // blank line before the closing sentence
    block += line;
    block += '\n';
  }
  flush();
  return correct;
}

std::string make_chat_body(const std::string& content,
                           const std::string& finish_reason,
                           long completion_tokens, bool omit_usage) {
  json body;
  json message;
  message["role"] = "assistant";
  message["content"] = content;
  json choice;
  choice["message"] = std::move(message);
  choice["finish_reason"] = finish_reason;
  body["choices"] = json::array({std::move(choice)});
  if (!omit_usage) {
    body["usage"]["completion_tokens"] =
        completion_tokens >= 0 ? completion_tokens : whitespace_tokens(content);
  }
  return body.dump();
}

std::shared_ptr<Behavior> Behavior::scripted(std::vector<ScriptedRule> rules) {
  std::shared_ptr<Behavior> b(new Behavior());
  b->scripted_mode_ = true;
  b->rules_ = std::move(rules);
  b->used_.assign(b->rules_.size(), 0);
  return b;
}

std::shared_ptr<Behavior> Behavior::arithmetic(ArithmeticParams params) {
  std::shared_ptr<Behavior> b(new Behavior());
  b->scripted_mode_ = false;
  b->arith_ = params;
  return b;
}

std::shared_ptr<Behavior> Behavior::from_json(const std::string& text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::exception& e) {
    throw ParseError(std::string("malformed scenario: ") + e.what());
  }
  try {
    const std::string mode = doc.value("mode", "scripted");
    if (mode == "arithmetic") {
      ArithmeticParams p;
      p.p_correct = doc.value("p_correct", 0.5);
      p.ref_threshold = doc.value("ref_threshold", 8);
      p.wrong_offset = doc.value("wrong_offset", 1L);
      p.salt = doc.value("salt", std::string("arith"));
      return arithmetic(p);
    }
    if (mode != "scripted") {
      throw ParseError("unknown scenario mode \"" + mode + "\"");
    }
    std::vector<ScriptedRule> rules;
    for (const json& r : doc.value("rules", json::array())) {
      ScriptedRule rule;
      if (r.contains("contains")) {
        const json& c = r.at("contains");
        if (c.is_array()) {
          rule.contains = c.get<std::vector<std::string>>();
        } else {
          rule.contains.push_back(c.get<std::string>());
        }
      }
      if (r.contains("equals")) rule.equals = r.at("equals").get<std::string>();
      if (r.contains("seed_in")) {
        rule.seed_in = r.at("seed_in").get<std::vector<std::uint64_t>>();
      }
      rule.times = r.value("times", -1L);
      rule.reply = r.value("reply", std::string());
      rule.finish_reason = r.value("finish_reason", std::string("stop"));
      rule.completion_tokens = r.value("completion_tokens", -1L);
      rule.omit_usage = r.value("omit_usage", false);
      rule.status = r.value("status", 200);
      if (r.contains("raw_body")) {
        rule.raw_body = r.at("raw_body").get<std::string>();
      }
      rule.delay_ms = r.value("delay_ms", 0L);
      rules.push_back(std::move(rule));
    }
    return scripted(std::move(rules));
  } catch (const json::exception& e) {
    throw ParseError(std::string("bad scenario field: ") + e.what());
  }
}

std::shared_ptr<Behavior> Behavior::from_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open scenario file: " + path);
  std::stringstream buf;
  buf << in.rdbuf();
  return from_json(buf.str());
}

MockReply Behavior::respond(const std::string& request_body) {
  json req;
  try {
    req = json::parse(request_body);
  } catch (const json::exception&) {
    return {400, "{\"error\":\"malformed request body\"}", 0};
  }
  std::string content;
  std::uint64_t seed = 0;
  try {
    const json& messages = req.at("messages");
    if (!messages.empty()) {
      content = messages.back().at("content").get<std::string>();
    }
    seed = req.value("seed", 0ull);
  } catch (const json::exception&) {
    return {400, "{\"error\":\"missing messages\"}", 0};
  }

  if (!scripted_mode_) {
    const int ref_correct = count_correct_references(content);
    const auto question = parse_arithmetic_question(content);
    if (!question) {
      return {200, make_chat_body("Final answer: unknown", "stop", -1, false),
              0};
    }
    const long sum = question->first + question->second;
    bool correct;
    if (ref_correct >= arith_.ref_threshold) {
      correct = true;  // enough good references pin the synthesis
    } else {
      correct = arithmetic_coin(seed, arith_.salt, arith_.p_correct);
    }
    const long value = correct ? sum : sum + arith_.wrong_offset;
    return {200,
            make_chat_body("Final answer: " + std::to_string(value), "stop",
                           -1, false),
            0};
  }

  std::lock_guard<std::mutex> lock(mu_);
  for (std::size_t i = 0; i < rules_.size(); ++i) {
    const ScriptedRule& rule = rules_[i];
    if (rule.times >= 0 && used_[i] >= rule.times) continue;
    if (rule.equals && content != *rule.equals) continue;
    bool ok = true;
    for (const std::string& needle : rule.contains) {
      ok = ok && content.find(needle) != std::string::npos;
    }
    if (!ok) continue;
    if (!rule.seed_in.empty()) {
      bool hit = false;
      for (std::uint64_t s : rule.seed_in) hit = hit || s == seed;
      if (!hit) continue;
    }
    ++used_[i];
    if (rule.raw_body) return {rule.status, *rule.raw_body, rule.delay_ms};
    if (rule.status != 200) {
      return {rule.status, "{\"error\":\"scripted failure\"}", rule.delay_ms};
    }
    return {200,
            make_chat_body(rule.reply, rule.finish_reason,
                           rule.completion_tokens, rule.omit_usage),
            rule.delay_ms};
  }
  return {404, "{\"error\":\"no scenario rule matched\"}", 0};
}

}  // namespace pacore::mock
