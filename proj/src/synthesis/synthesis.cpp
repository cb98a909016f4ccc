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

#include "pacore/synthesis/synthesis.hpp"

#include <algorithm>

#include "pacore/errors.hpp"
#include "pacore/rng.hpp"

namespace pacore::synthesis {

const std::string& builtin_synthesis_template() {
  static const std::string tpl =
      "You are given a problem and a list of reference responses. Your job is "
      "to analyze these references and provide your own response.\n"
      "Original Problem:\n"
      "{{original_prompt}}\n"
      "\n"
      "Reference Responses:\n"
      "{{#references}}Reference {{index}}:\n"
      "{{response}}\n"
      "{{/references}}\n"
      "Now, based on the original problem and reference responses above, "
      "please provide your own comprehensive solution.\n";
  return tpl;
}

namespace {

void replace_all(std::string& s, const std::string& needle,
                 const std::string& value) {
  std::size_t pos = 0;
  while ((pos = s.find(needle, pos)) != std::string::npos) {
    s.replace(pos, needle.size(), value);
    pos += value.size();
  }
}

}  // namespace

std::string render_synthesis_template(const std::string& tpl,
                                      const SynthesisRequest& req) {
  if (req.references.empty()) return req.original_prompt;

  const std::string open = "{{#references}}";
  const std::string close = "{{/references}}";
  const std::size_t bo = tpl.find(open);
  const std::size_t bc = tpl.find(close);
  if (bo == std::string::npos || bc == std::string::npos || bc < bo) {
    throw ConfigError("synthesis template lacks a references block");
  }
  const std::string chunk = tpl.substr(bo + open.size(), bc - bo - open.size());

  std::string body;
  for (std::size_t i = 0; i < req.references.size(); ++i) {
    std::string item = chunk;
    replace_all(item, "{{index}}", std::to_string(i + 1));
    replace_all(item, "{{response}}", req.references[i]);
    body += item;
  }

  std::string out = tpl.substr(0, bo) + body + tpl.substr(bc + close.size());
  replace_all(out, "{{original_prompt}}", req.original_prompt);
  return out;
}

std::string serialize_synthesis_prompt(const SynthesisRequest& req) {
  return render_synthesis_template(builtin_synthesis_template(), req);
}

std::vector<std::string> sample_references(const client::MessagePoolEntry& entry,
                                           int min_k, int max_k,
                                           std::uint64_t seed) {
  if (min_k < 0 || min_k > max_k) {
    throw ValidationError("reference bounds must satisfy 0 <= min <= max");
  }
  if (entry.rollouts.empty()) {
    throw ValidationError("pool entry has no rollouts");
  }
  std::vector<const client::Rollout*> eligible;
  for (const client::Rollout& r : entry.rollouts) {
    if (r.finish_reason != client::FinishReason::Error) eligible.push_back(&r);
  }
  if (eligible.empty()) return {};

  DetRng rng(seed);
  const std::uint64_t span = static_cast<std::uint64_t>(max_k - min_k) + 1;
  const std::size_t k = static_cast<std::size_t>(
      static_cast<std::uint64_t>(min_k) + rng.bounded(span));
  const std::size_t take = std::min(k, eligible.size());

  // selection sampling: pool order preserved, exactly `take` chosen
  std::vector<std::string> out;
  out.reserve(take);
  std::size_t needed = take;
  std::size_t remaining = eligible.size();
  for (const client::Rollout* r : eligible) {
    if (needed == 0) break;
    if (rng.uniform01() * static_cast<double>(remaining) <
        static_cast<double>(needed)) {
      out.push_back(r->text);
      --needed;
    }
    --remaining;
  }
  return out;
}

}  // namespace pacore::synthesis
