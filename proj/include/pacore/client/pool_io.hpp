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

#include <string>
#include <vector>

#include "pacore/client/types.hpp"
#include "pacore/policy/trajectory.hpp"

namespace pacore::client {

/// Versioned line-delimited cache format. Line 1 is the header below; every
/// following line is one JSON record tagged "kind": "rollout", "pool_entry",
/// or "trajectory". Files mix kinds freely; the typed loaders skip records of
/// other kinds.
inline constexpr const char* kPoolHeader = "#pacore-pool v1";

std::string rollout_to_json(const Rollout& r);
Rollout rollout_from_json(const std::string& line);

std::string pool_entry_to_json(const MessagePoolEntry& e);
MessagePoolEntry pool_entry_from_json(const std::string& line);

/// Overwrites path with a header plus one pool_entry line per entry.
void persist_pool(const std::vector<MessagePoolEntry>& entries,
                  const std::string& path);

/// Loads every pool_entry record. Throws ParseError naming the 1-based line
/// for a bad header, malformed JSON, or a record missing required fields;
/// ConfigError when the file cannot be opened.
std::vector<MessagePoolEntry> load_pool(const std::string& path);

/// Appends one entry, writing the header first when the file is new or empty.
/// This is the resume hook: a killed pipeline picks up from whatever entries
/// made it to disk.
void append_pool_entry(const MessagePoolEntry& entry, const std::string& path);

void persist_rollouts(const std::vector<Rollout>& rollouts,
                      const std::string& path);
std::vector<Rollout> load_rollouts(const std::string& path);

void persist_trajectories(const std::vector<policy::Trajectory>& trajectories,
                          const std::string& path);
std::vector<policy::Trajectory> load_trajectories(const std::string& path);

}  // namespace pacore::client
