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

#include "pacore/reward/score.hpp"

#include "json.hpp"
#include "pacore/errors.hpp"
#include "pacore/reward/geometry.hpp"
#include "pacore/reward/penalties.hpp"

namespace pacore::reward {

using nlohmann::json;

namespace {

BoundingBox gold_box(const std::string& gold) {
  try {
    const json j = json::parse(gold);
    const json& b = j.at("box");
    BoundingBox box{b.at(0).get<double>(), b.at(1).get<double>(),
                    b.at(2).get<double>(), b.at(3).get<double>()};
    box.validate();
    return box;
  } catch (const json::exception& e) {
    throw ValidationError(std::string("gold payload is not a box: ") +
                          e.what());
  }
}

void gold_point(const std::string& gold, Point2D* point, ImageDims* dims) {
  try {
    const json j = json::parse(gold);
    const json& p = j.at("point");
    *point = Point2D{p.at(0).get<double>(), p.at(1).get<double>()};
    *dims = ImageDims{j.at("width").get<long>(), j.at("height").get<long>()};
    point->validate();
    dims->validate();
  } catch (const json::exception& e) {
    throw ValidationError(std::string("gold payload is not a point: ") +
                          e.what());
  }
}

// majority over parseable passes; ties and all-unparseable go against the
// candidate
Verdict judge_verdict(const std::vector<Verdict>& verdicts) {
  int correct = 0, incorrect = 0;
  for (Verdict v : verdicts) {
    if (v == Verdict::Correct) ++correct;
    if (v == Verdict::Incorrect) ++incorrect;
  }
  if (correct == 0 && incorrect == 0) return Verdict::Unparseable;
  return correct > incorrect ? Verdict::Correct : Verdict::Incorrect;
}

}  // namespace

ScoreOutcome score_response(const std::string& question,
                            const std::string& response_text,
                            const std::string& gold, const RewardSpec& spec,
                            const JudgeEndpoint* judge) {
  spec.validate();
  ScoreOutcome out;
  out.extracted = extract_answer(response_text, spec.extraction);

  switch (spec.verifier) {
    case VerifierKind::ExactMatch:
      out.verdict = out.extracted ? verify_exact(*out.extracted, gold)
                                  : Verdict::Unparseable;
      out.base = out.verdict == Verdict::Correct ? 1.0 : 0.0;
      break;
    case VerifierKind::NumericMatch:
      out.verdict = out.extracted ? verify_numeric(*out.extracted, gold)
                                  : Verdict::Unparseable;
      out.base = out.verdict == Verdict::Correct ? 1.0 : 0.0;
      break;
    case VerifierKind::ModelJudge: {
      if (!judge) {
        throw ValidationError("model_judge verifier requires a judge endpoint");
      }
      const std::vector<Verdict> verdicts = judge_with_model(
          question, response_text, gold, *judge, spec.judge_passes);
      out.verdict = judge_verdict(verdicts);
      out.base = out.verdict == Verdict::Correct ? 1.0 : 0.0;
      break;
    }
    case VerifierKind::IoUGate: {
      const BoundingBox gb = gold_box(gold);
      const auto pred = extract_box(response_text);
      if (!pred) {
        out.verdict = Verdict::Unparseable;
        out.base = 0.0;
      } else {
        out.base = grounding_reward(*pred, gb, spec.iou_gate);
        out.verdict = out.base >= 0.5 ? Verdict::Correct : Verdict::Incorrect;
      }
      break;
    }
    case VerifierKind::PointDecay: {
      Point2D gp;
      ImageDims dims;
      gold_point(gold, &gp, &dims);
      const auto pred = extract_point(response_text);
      if (!pred) {
        out.verdict = Verdict::Unparseable;
        out.base = 0.0;
      } else {
        out.base =
            point_reward(*pred, gp, dims, spec.tau_frac, spec.cut_frac);
        out.verdict = out.base >= 0.5 ? Verdict::Correct : Verdict::Incorrect;
      }
      break;
    }
  }

  PenaltyContext ctx;
  ctx.question = question;
  ctx.response = response_text;
  ctx.allowed_refs = &spec.allowed_refs;
  ctx.judge = judge;
  const PenaltyRegistry& registry = default_penalty_registry();
  for (const std::string& name : spec.penalty_set) {
    const PenaltyEntry* entry = registry.find(name);
    if (!entry) throw ValidationError("unknown penalty identifier: " + name);
    const double v = entry->fn(ctx);
    if (entry->kind == PenaltyKind::Gate) {
      out.gates.push_back(v);
    } else {
      out.penalties.push_back(v);
    }
  }
  out.reward = compose_reward(out.base, out.penalties, out.gates);
  return out;
}

}  // namespace pacore::reward
