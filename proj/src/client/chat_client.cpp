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

#include "pacore/client/chat_client.hpp"

#include <chrono>
#include <cstdlib>
#include <thread>

#include "httplib.h"
#include "json.hpp"
#include "pacore/errors.hpp"
#include "pacore/strings.hpp"

namespace pacore::client {

using nlohmann::json;

ChatClient::ChatClient(EndpointConfig config) : config_(std::move(config)) {
  config_.validate();
  const std::string& url = config_.base_url;
  auto scheme_end = url.find("://");
  std::size_t authority_start = scheme_end == std::string::npos
                                    ? 0
                                    : scheme_end + 3;
  auto path_start = url.find('/', authority_start);
  if (path_start == std::string::npos) {
    host_ = url;
  } else {
    host_ = url.substr(0, path_start);
    std::string prefix = url.substr(path_start);
    while (!prefix.empty() && prefix.back() == '/') prefix.pop_back();
    path_prefix_ = prefix;
  }
}

std::string ChatClient::request_body(const std::string& model,
                                     const std::vector<ChatMessage>& messages,
                                     const SamplingParams& params,
                                     std::uint64_t seed) {
  json msgs = json::array();
  for (const ChatMessage& m : messages) {
    msgs.push_back({{"content", m.content}, {"role", m.role}});
  }
  // json objects iterate in key order, so dump() is byte-stable
  json body{
      {"max_tokens", params.max_tokens},
      {"messages", std::move(msgs)},
      {"model", model},
      {"seed", seed},
      {"temperature", params.temperature},
      {"top_k", params.top_k},
      {"top_p", params.top_p},
  };
  return body.dump();
}

CompletionResult ChatClient::complete(const std::vector<ChatMessage>& messages,
                                      const SamplingParams& params,
                                      std::uint64_t seed) const {
  params.validate();
  const std::string body =
      request_body(config_.model_name, messages, params, seed);
  const std::string path = path_prefix_ + "/chat/completions";

  httplib::Headers headers;
  if (!config_.api_key_env.empty()) {
    if (const char* key = std::getenv(config_.api_key_env.c_str())) {
      if (key[0] != '\0') {
        headers.emplace("Authorization", std::string("Bearer ") + key);
      }
    }
  }

  const auto t0 = std::chrono::steady_clock::now();
  std::string last_failure;
  for (int attempt = 0; attempt <= config_.retry_budget; ++attempt) {
    if (attempt > 0) {
      telemetry_.retries.fetch_add(1, std::memory_order_relaxed);
      std::this_thread::sleep_for(
          std::chrono::milliseconds(backoff_base_ms_ << (attempt - 1)));
    }
    httplib::Client cli(host_);
    cli.set_connection_timeout(std::chrono::milliseconds(config_.timeout_ms));
    cli.set_read_timeout(std::chrono::milliseconds(config_.timeout_ms));
    cli.set_write_timeout(std::chrono::milliseconds(config_.timeout_ms));
    telemetry_.requests.fetch_add(1, std::memory_order_relaxed);
    httplib::Result res = cli.Post(path, headers, body, "application/json");
    if (!res) {
      last_failure = "transport: " + httplib::to_string(res.error());
      continue;
    }
    if (res->status >= 500) {
      last_failure = "server status " + std::to_string(res->status);
      continue;
    }
    if (res->status != 200) {
      throw TransportError("endpoint returned status " +
                           std::to_string(res->status));
    }

    json reply;
    try {
      reply = json::parse(res->body);
    } catch (const json::exception& e) {
      throw TransportError(std::string("unparseable endpoint reply: ") +
                           e.what());
    }
    CompletionResult out;
    try {
      const json& choice = reply.at("choices").at(0);
      out.text = choice.at("message").at("content").get<std::string>();
      if (choice.contains("finish_reason") &&
          choice["finish_reason"].is_string()) {
        const std::string fr = choice["finish_reason"].get<std::string>();
        out.finish_reason = fr == "length" ? FinishReason::Length
                                           : FinishReason::Stop;
      }
    } catch (const json::exception& e) {
      throw TransportError(std::string("endpoint reply missing fields: ") +
                           e.what());
    }
    if (reply.contains("usage") && reply["usage"].is_object() &&
        reply["usage"].contains("completion_tokens")) {
      out.completion_tokens = reply["usage"]["completion_tokens"].get<long>();
    } else {
      out.completion_tokens = whitespace_token_count(out.text);
      out.tokens_estimated = true;
      telemetry_.usage_fallbacks.fetch_add(1, std::memory_order_relaxed);
    }
    out.latency_ms = std::chrono::duration<double, std::milli>(
                         std::chrono::steady_clock::now() - t0)
                         .count();
    return out;
  }
  throw TransportError("retry budget exhausted (" +
                       std::to_string(config_.retry_budget + 1) +
                       " attempts): " + last_failure);
}

}  // namespace pacore::client
