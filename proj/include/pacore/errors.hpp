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

#include <cstddef>
#include <stdexcept>
#include <string>

namespace pacore {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Bad arguments or violated preconditions. Maps to CLI exit code 1.
class ValidationError : public Error {
 public:
  using Error::Error;
};

class ConfigError : public Error {
 public:
  using Error::Error;
};

/// Malformed file content. Carries the 1-based line number when known.
class ParseError : public Error {
 public:
  ParseError(const std::string& what, std::size_t line)
      : Error(what + " (line " + std::to_string(line) + ")"), line_(line) {}
  explicit ParseError(const std::string& what) : Error(what), line_(0) {}
  std::size_t line() const { return line_; }

 private:
  std::size_t line_;
};

/// Endpoint unreachable or retries exhausted. pass_index() identifies which
/// verification pass failed when raised from a multi-pass judge call.
class TransportError : public Error {
 public:
  explicit TransportError(const std::string& what, int pass_index = -1)
      : Error(what), pass_index_(pass_index) {}
  int pass_index() const { return pass_index_; }

 private:
  int pass_index_;
};

/// A judge reply that could not be turned into a score.
class ScoringError : public Error {
 public:
  using Error::Error;
};

}  // namespace pacore
