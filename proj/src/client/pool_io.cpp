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

#include "pacore/client/pool_io.hpp"

#include <fstream>

#include "json.hpp"
#include "pacore/errors.hpp"

namespace pacore::client {
namespace {

using nlohmann::json;

json rollout_to_obj(const Rollout& r) {
  json o;
  o["prompt_id"] = r.prompt_id;
  o["text"] = r.text;
  if (r.extracted_answer) o["extracted_answer"] = *r.extracted_answer;
  if (r.reward) o["reward"] = *r.reward;
  o["completion_tokens"] = r.completion_tokens;
  o["finish_reason"] = to_string(r.finish_reason);
  o["seed"] = r.seed;
  o["created_at"] = r.created_at;
  o["tokens_estimated"] = r.tokens_estimated;
  return o;
}

Rollout rollout_from_obj(const json& o) {
  Rollout r;
  r.prompt_id = o.at("prompt_id").get<std::string>();
  r.text = o.at("text").get<std::string>();
  if (o.contains("extracted_answer")) {
    r.extracted_answer = o.at("extracted_answer").get<std::string>();
  }
  if (o.contains("reward")) r.reward = o.at("reward").get<double>();
  r.completion_tokens = o.at("completion_tokens").get<long>();
  r.finish_reason =
      finish_reason_from_string(o.at("finish_reason").get<std::string>());
  r.seed = o.at("seed").get<std::uint64_t>();
  r.created_at = o.at("created_at").get<std::int64_t>();
  r.tokens_estimated = o.at("tokens_estimated").get<bool>();
  return r;
}

json pool_entry_to_obj(const MessagePoolEntry& e) {
  json o;
  o["prompt_id"] = e.prompt_id;
  json arr = json::array();
  for (const Rollout& r : e.rollouts) arr.push_back(rollout_to_obj(r));
  o["rollouts"] = std::move(arr);
  o["label"] = to_string(e.label);
  return o;
}

MessagePoolEntry pool_entry_from_obj(const json& o) {
  MessagePoolEntry e;
  e.prompt_id = o.at("prompt_id").get<std::string>();
  for (const json& r : o.at("rollouts")) {
    e.rollouts.push_back(rollout_from_obj(r));
  }
  e.label = solvability_from_string(o.at("label").get<std::string>());
  return e;
}

json trajectory_to_obj(const policy::Trajectory& t) {
  json o;
  o["rewards"] = t.rewards;
  o["values"] = t.values;
  o["logprob_new"] = t.logprob_new;
  o["logprob_old"] = t.logprob_old;
  return o;
}

policy::Trajectory trajectory_from_obj(const json& o) {
  policy::Trajectory t;
  t.rewards = o.at("rewards").get<std::vector<double>>();
  t.values = o.at("values").get<std::vector<double>>();
  t.logprob_new = o.at("logprob_new").get<std::vector<double>>();
  t.logprob_old = o.at("logprob_old").get<std::vector<double>>();
  return t;
}

std::ofstream open_out(const std::string& path, std::ios::openmode mode) {
  std::ofstream out(path, mode);
  if (!out) throw ConfigError("cannot open for writing: " + path);
  return out;
}

/// Reads every line of the cache file and hands records of the wanted kind to
/// sink(record, line_number). The 1-based line count includes the header.
template <typename Sink>
void scan_records(const std::string& path, const std::string& want,
                  Sink&& sink) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open for reading: " + path);
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (lineno == 1) {
      if (line != kPoolHeader) {
        throw ParseError("expected header \"" + std::string(kPoolHeader) +
                             "\", got \"" + line + "\"",
                         lineno);
      }
      continue;
    }
    json o;
    try {
      o = json::parse(line);
    } catch (const json::exception& e) {
      throw ParseError(std::string("malformed record: ") + e.what(), lineno);
    }
    try {
      if (!o.is_object() || !o.contains("kind")) {
        throw ParseError("record missing \"kind\"", lineno);
      }
      if (o.at("kind").get<std::string>() != want) continue;
      sink(o, lineno);
    } catch (const json::exception& e) {
      throw ParseError(std::string("bad record field: ") + e.what(), lineno);
    }
  }
}

template <typename T, typename ToObj>
void persist_lines(const std::vector<T>& items, const std::string& kind,
                   ToObj&& to_obj, const std::string& path) {
  std::ofstream out = open_out(path, std::ios::trunc);
  if (items.empty()) return;  // empty collection, empty file
  out << kPoolHeader << "\n";
  for (const T& item : items) {
    json o = to_obj(item);
    o["kind"] = kind;
    out << o.dump() << "\n";
  }
  if (!out) throw ConfigError("write failed: " + path);
}

}  // namespace

std::string rollout_to_json(const Rollout& r) {
  json o = rollout_to_obj(r);
  o["kind"] = "rollout";
  return o.dump();
}

Rollout rollout_from_json(const std::string& line) {
  try {
    return rollout_from_obj(json::parse(line));
  } catch (const json::exception& e) {
    throw ParseError(std::string("malformed rollout: ") + e.what());
  }
}

std::string pool_entry_to_json(const MessagePoolEntry& e) {
  json o = pool_entry_to_obj(e);
  o["kind"] = "pool_entry";
  return o.dump();
}

MessagePoolEntry pool_entry_from_json(const std::string& line) {
  try {
    return pool_entry_from_obj(json::parse(line));
  } catch (const json::exception& e) {
    throw ParseError(std::string("malformed pool entry: ") + e.what());
  }
}

void persist_pool(const std::vector<MessagePoolEntry>& entries,
                  const std::string& path) {
  persist_lines(entries, "pool_entry", pool_entry_to_obj, path);
}

std::vector<MessagePoolEntry> load_pool(const std::string& path) {
  std::vector<MessagePoolEntry> out;
  scan_records(path, "pool_entry", [&](const json& o, std::size_t) {
    out.push_back(pool_entry_from_obj(o));
  });
  return out;
}

void append_pool_entry(const MessagePoolEntry& entry, const std::string& path) {
  bool need_header = true;
  {
    std::ifstream probe(path);
    std::string first;
    if (probe && std::getline(probe, first)) need_header = false;
  }
  std::ofstream out = open_out(path, std::ios::app);
  if (need_header) out << kPoolHeader << "\n";
  json o = pool_entry_to_obj(entry);
  o["kind"] = "pool_entry";
  out << o.dump() << "\n";
  if (!out) throw ConfigError("write failed: " + path);
}

void persist_rollouts(const std::vector<Rollout>& rollouts,
                      const std::string& path) {
  persist_lines(rollouts, "rollout", rollout_to_obj, path);
}

std::vector<Rollout> load_rollouts(const std::string& path) {
  std::vector<Rollout> out;
  scan_records(path, "rollout", [&](const json& o, std::size_t) {
    out.push_back(rollout_from_obj(o));
  });
  return out;
}

void persist_trajectories(const std::vector<policy::Trajectory>& trajectories,
                          const std::string& path) {
  for (const policy::Trajectory& t : trajectories) t.validate();
  persist_lines(trajectories, "trajectory", trajectory_to_obj, path);
}

std::vector<policy::Trajectory> load_trajectories(const std::string& path) {
  std::vector<policy::Trajectory> out;
  scan_records(path, "trajectory", [&](const json& o, std::size_t lineno) {
    policy::Trajectory t = trajectory_from_obj(o);
    try {
      t.validate();
    } catch (const ValidationError& e) {
      throw ParseError(std::string("invalid trajectory: ") + e.what(), lineno);
    }
    out.push_back(std::move(t));
  });
  return out;
}

}  // namespace pacore::client
