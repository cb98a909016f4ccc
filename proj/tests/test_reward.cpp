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

#include <cmath>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "doctest.h"
#include "pacore/client/chat_client.hpp"
#include "pacore/errors.hpp"
#include "pacore/mock/mock.hpp"
#include "pacore/reward/geometry.hpp"
#include "pacore/reward/judge.hpp"
#include "pacore/reward/penalties.hpp"
#include "pacore/reward/score.hpp"
#include "pacore/reward/spec.hpp"
#include "pacore/reward/verify.hpp"
#include "pacore/rng.hpp"

using namespace pacore::reward;
using pacore::DetRng;
using pacore::ScoringError;
using pacore::TransportError;
using pacore::ValidationError;
using pacore::derive_seed;

namespace {

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  REQUIRE(in.good());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

BoundingBox random_box(DetRng& rng) {
  const double x0 = rng.uniform01() * 50.0;
  const double y0 = rng.uniform01() * 50.0;
  return BoundingBox{x0, y0, x0 + rng.uniform01() * 50.0,
                     y0 + rng.uniform01() * 50.0};
}

pacore::client::EndpointConfig local_endpoint(int port) {
  pacore::client::EndpointConfig cfg;
  cfg.base_url = "http://127.0.0.1:" + std::to_string(port);
  cfg.model_name = "mock-model";
  cfg.retry_budget = 1;
  cfg.timeout_ms = 5000;
  return cfg;
}

}  // namespace

TEST_CASE("answer extraction modes") {
  SUBCASE("boxed latex") {
    CHECK(extract_answer("so \\boxed{42}", ExtractionMode::BoxedLatex) == "42");
    CHECK(extract_answer("\\boxed{1} then \\boxed{2}",
                         ExtractionMode::BoxedLatex) == "2");
    CHECK(extract_answer("x = \\boxed{\\frac{1}{2}}",
                         ExtractionMode::BoxedLatex) == "\\frac{1}{2}");
    CHECK(extract_answer("\\boxed{ 7 }", ExtractionMode::BoxedLatex) == "7");
    CHECK(!extract_answer("no box here", ExtractionMode::BoxedLatex));
    CHECK(!extract_answer("\\boxed{unterminated",
                          ExtractionMode::BoxedLatex).has_value());
  }

  SUBCASE("final answer line") {
    CHECK(extract_answer("Final answer: 42", ExtractionMode::FinalAnswerLine) ==
          "42");
    CHECK(extract_answer("final ANSWER:  x + y \nmore",
                         ExtractionMode::FinalAnswerLine) == "x + y");
    CHECK(extract_answer("Final answer: 1\nFinal answer: 2",
                         ExtractionMode::FinalAnswerLine) == "2");
    CHECK(extract_answer("**Final answer: 42**",
                         ExtractionMode::FinalAnswerLine) == "42");
    CHECK(!extract_answer("Final answer:", ExtractionMode::FinalAnswerLine));
    CHECK(!extract_answer("nothing", ExtractionMode::FinalAnswerLine));
  }

  SUBCASE("answer prefix") {
    CHECK(extract_answer("Answer: apple", ExtractionMode::AnswerPrefix) ==
          "apple");
    CHECK(extract_answer("Answer: 1\nanswer: 2", ExtractionMode::AnswerPrefix) ==
          "2");
  }

  SUBCASE("yes or no") {
    CHECK(extract_answer("Yes", ExtractionMode::YesNo) == "yes");
    CHECK(extract_answer("I think not. NO.", ExtractionMode::YesNo) == "no");
    CHECK(extract_answer("yes, then no", ExtractionMode::YesNo) == "no");
    CHECK(!extract_answer("yesterday nothing", ExtractionMode::YesNo));
    CHECK(!extract_answer("maybe", ExtractionMode::YesNo));
  }

  SUBCASE("option letter") {
    CHECK(extract_answer("Final answer: B", ExtractionMode::OptionLetter) ==
          "B");
    CHECK(extract_answer("Final answer: (c)", ExtractionMode::OptionLetter) ==
          "C");
    CHECK(extract_answer("The best option is D", ExtractionMode::OptionLetter) ==
          "D");
    CHECK(!extract_answer("12345", ExtractionMode::OptionLetter));
  }

  SUBCASE("raw") {
    CHECK(extract_answer("  trimmed  ", ExtractionMode::Raw) == "trimmed");
    CHECK(!extract_answer("   ", ExtractionMode::Raw));
  }

  SUBCASE("mode names round-trip") {
    for (ExtractionMode m :
         {ExtractionMode::BoxedLatex, ExtractionMode::FinalAnswerLine,
          ExtractionMode::AnswerPrefix, ExtractionMode::YesNo,
          ExtractionMode::OptionLetter, ExtractionMode::Raw}) {
      CHECK(extraction_mode_from_string(to_string(m)) == m);
    }
    CHECK_THROWS_AS(extraction_mode_from_string("telepathy"), ValidationError);
  }

  SUBCASE("boxed fuzz: the payload always comes back") {
    DetRng rng(derive_seed(3, "boxed-fuzz", 0));
    const char* fillers[] = {"lorem ipsum ", "x = y + z\n", "{ } ",
                             "\\frac{a}{b} ", "so the \\boxed{0} is wrong "};
    for (int rep = 0; rep < 500; ++rep) {
      std::string payload;
      const std::size_t len = 1 + rng.bounded(8);
      for (std::size_t i = 0; i < len; ++i) {
        payload += static_cast<char>('a' + rng.bounded(26));
      }
      if (rng.bounded(2) == 0) payload = "\\frac{" + payload + "}{2}";
      std::string text;
      const std::size_t chunks = rng.bounded(4);
      for (std::size_t i = 0; i < chunks; ++i) {
        text += fillers[rng.bounded(5)];
      }
      text += "\\boxed{" + payload + "}";
      if (rng.bounded(2) == 0) text += " trailing";
      const auto got = extract_answer(text, ExtractionMode::BoxedLatex);
      REQUIRE(got.has_value());
      REQUIRE(*got == payload);
    }
  }
}

TEST_CASE("normalization and numeric parsing") {
  CHECK(normalize_answer("  Foo   Bar. ") == "foo bar");
  CHECK(normalize_answer("A\t B\nC") == "a b c");
  CHECK(normalize_answer("done..") == "done.");
  CHECK(normalize_answer("") == "");

  CHECK(parse_plain_number("42") == 42.0);
  CHECK(parse_plain_number("-3.5e2") == -350.0);
  CHECK(parse_plain_number("+0.25") == 0.25);
  CHECK(!parse_plain_number("1/2"));
  CHECK(!parse_plain_number("42 apples"));
  CHECK(!parse_plain_number(""));

  CHECK(parse_numeric("1/2") == 0.5);
  CHECK(parse_numeric("\\frac{3}{4}") == 0.75);
  CHECK(parse_numeric("-7/2") == -3.5);
  CHECK(parse_numeric("42") == 42.0);
  CHECK(!parse_numeric("one half"));
}

TEST_CASE("string and numeric verification") {
  CHECK(verify_exact("42", "42") == Verdict::Correct);
  CHECK(verify_exact(" YES ", "yes.") == Verdict::Correct);
  CHECK(verify_exact("42.0000001", "42") == Verdict::Correct);
  CHECK(verify_exact("0.5", "1/2") == Verdict::Incorrect);
  CHECK(verify_exact("abc", "abd") == Verdict::Incorrect);
  CHECK(verify_exact("43", "42") == Verdict::Incorrect);

  CHECK(verify_numeric("0.5", "1/2") == Verdict::Correct);
  CHECK(verify_numeric("\\frac{1}{3}", "0.333333333") == Verdict::Correct);
  CHECK(verify_numeric("0.334", "1/3") == Verdict::Incorrect);
  CHECK(verify_numeric("cat", "cat") == Verdict::Correct);
  CHECK(verify_numeric("cat", "dog") == Verdict::Incorrect);

  CHECK(consensus_all_agree({Verdict::Correct, Verdict::Correct}));
  CHECK(consensus_all_agree({Verdict::Incorrect, Verdict::Incorrect}));
  CHECK(!consensus_all_agree({Verdict::Correct, Verdict::Incorrect}));
  CHECK(!consensus_all_agree({Verdict::Unparseable, Verdict::Unparseable}));
  CHECK(!consensus_all_agree({Verdict::Correct, Verdict::Unparseable}));
  CHECK(consensus_all_agree({Verdict::Incorrect}));
  CHECK_THROWS_AS(consensus_all_agree({}), ValidationError);

  for (Verdict v : {Verdict::Correct, Verdict::Incorrect, Verdict::Unparseable}) {
    CHECK(verdict_from_string(to_string(v)) == v);
  }
  CHECK_THROWS_AS(verdict_from_string("shrug"), ValidationError);
}

TEST_CASE("bounding-box iou") {
  const BoundingBox a{0, 0, 2, 2};
  const BoundingBox b{1, 1, 3, 3};
  CHECK(std::abs(iou(a, b) - 1.0 / 7.0) <= 1e-12);
  CHECK(iou(a, BoundingBox{5, 5, 6, 6}) == 0.0);
  CHECK(iou(a, a) == 1.0);

  const BoundingBox zero{1, 1, 1, 1};
  CHECK(iou(zero, zero) == 1.0);
  CHECK(iou(zero, a) == 0.0);

  DetRng rng(derive_seed(3, "iou", 0));
  for (int rep = 0; rep < 10000; ++rep) {
    const BoundingBox p = random_box(rng);
    const BoundingBox q = random_box(rng);
    const double pq = iou(p, q);
    REQUIRE(pq >= 0.0);
    REQUIRE(pq <= 1.0);
    REQUIRE(pq == iou(q, p));
    REQUIRE(iou(p, p) == 1.0);
  }

  CHECK(grounding_reward(a, b, 0.5) == 0.0);       // 1/7 below the gate
  CHECK(grounding_reward(a, b, 0.1) == iou(a, b));  // above the gate
  CHECK(grounding_reward(a, b, 0.0) == iou(a, b));  // gate off
  CHECK(grounding_reward(a, a, 0.99) == 1.0);
  CHECK_THROWS_AS(grounding_reward(a, b, 1.5), ValidationError);
  CHECK_THROWS_AS(iou(BoundingBox{2, 0, 0, 2}, a), ValidationError);
}

TEST_CASE("point decay reward") {
  const ImageDims dims{100, 100};
  const Point2D origin{0, 0};
  CHECK(point_reward(origin, origin, dims) == 1.0);

  // At distance tau_frac * diagonal the reward is exactly 1/e.
  const double diag = dims.diagonal();
  CHECK(std::abs(diag - std::sqrt(2.0) * 100.0) <= 1e-12);
  const Point2D at_tau{0.1 * diag, 0.0};
  CHECK(std::abs(point_reward(at_tau, origin, dims) - std::exp(-1.0)) <= 1e-12);

  // Beyond the cutoff fraction the reward is a hard 0.
  const Point2D past_cut{0.51 * diag, 0.0};
  CHECK(point_reward(past_cut, origin, dims) == 0.0);
  const Point2D at_cut{0.49 * diag, 0.0};
  CHECK(point_reward(at_cut, origin, dims) > 0.0);

  DetRng rng(derive_seed(3, "point", 0));
  double prev_d = 0.0, prev_r = 1.0;
  for (int rep = 0; rep < 10000; ++rep) {
    const double d = prev_d + rng.uniform01() * 2.0;
    const double r = point_reward(Point2D{d, 0.0}, origin, dims);
    REQUIRE(r <= prev_r);  // monotone nonincreasing in distance
    REQUIRE(r >= 0.0);
    REQUIRE(r <= 1.0);
    prev_d = d;
    prev_r = r;
    if (d > diag) break;
  }

  CHECK_THROWS_AS(point_reward(origin, origin, ImageDims{0, 5}),
                  ValidationError);
}

TEST_CASE("geometry extraction from text") {
  const auto box = extract_box("the region [1, 2, 3, 4] matches");
  REQUIRE(box.has_value());
  CHECK(*box == BoundingBox{1, 2, 3, 4});
  CHECK(extract_box("(0.5, 1.5, 2.5, 3.5)") ==
        BoundingBox{0.5, 1.5, 2.5, 3.5});
  CHECK(extract_box("[0,0,1,1] then [2, 2, 4, 4]") == BoundingBox{2, 2, 4, 4});
  // invalid trailing group (min > max) is skipped, the prior one wins
  CHECK(extract_box("[1,2,3,4] and junk [9, 9, 5, 5]") ==
        BoundingBox{1, 2, 3, 4});
  CHECK(!extract_box("no numbers"));

  CHECK(extract_point("point (3, 4) here") == Point2D{3, 4});
  CHECK(extract_point("(1, 2) then [5.5, 6.5]") == Point2D{5.5, 6.5});
  CHECK(!extract_point("nope"));
}

TEST_CASE("penalties and composition") {
  SUBCASE("language consistency") {
    CHECK(language_consistency_penalty("What is two plus two?",
                                       "The answer is four.") == 0.0);
    // All-CJK reply to a Latin question: every classified char mismatches.
    CHECK(language_consistency_penalty(
              "What is two plus two?",
              "\xe7\xad\x94\xe6\xa1\x88\xe6\x98\xaf\xe5\x9b\x9b") == 1.0);
    // Two Latin letters and two CJK chars: half the classified chars differ.
    CHECK(language_consistency_penalty("Latin question",
                                       "ab\xe4\xbd\xa0\xe5\xa5\xbd") == 0.5);
    CHECK(language_consistency_penalty("Latin question", "123 456") == 0.0);
    CHECK(language_consistency_penalty("", "anything") == 0.0);
  }

  SUBCASE("citation gate") {
    const std::vector<std::string> allowed{"[1]", "https://ex.com/a"};
    CHECK(citation_gate("no citations at all", allowed) == 1.0);
    CHECK(citation_gate("see [1] for details", allowed) == 1.0);
    CHECK(citation_gate("see [2] for details", allowed) == 0.0);
    CHECK(citation_gate("go to https://ex.com/a.", allowed) == 1.0);
    CHECK(citation_gate("go to https://ex.com/b", allowed) == 0.0);
    CHECK(citation_gate("both [1] and https://ex.com/a", allowed) == 1.0);
    CHECK(citation_gate("[1] but also [7]", allowed) == 0.0);
    CHECK(citation_gate("cite [1]", {}) == 0.0);
  }

  SUBCASE("compose") {
    CHECK(compose_reward(0.8, {0.3}, {}) == doctest::Approx(0.5));
    CHECK(compose_reward(0.5, {0.4, 0.3}, {}) == 0.0);  // floor at zero
    CHECK(compose_reward(1.0, {}, {1.0, 1.0}) == 1.0);
    CHECK(compose_reward(1.0, {}, {1.0, 0.0}) == 0.0);
    CHECK(compose_reward(1.0, {0.25}, {1.0}) == 0.75);
    CHECK_THROWS_AS(compose_reward(1.5, {}, {}), ValidationError);
    CHECK_THROWS_AS(compose_reward(0.5, {-0.1}, {}), ValidationError);
    CHECK_THROWS_AS(compose_reward(0.5, {}, {0.5}), ValidationError);
  }

  SUBCASE("registry") {
    const PenaltyRegistry& reg = default_penalty_registry();
    const PenaltyEntry* lang = reg.find("language_consistency");
    REQUIRE(lang != nullptr);
    CHECK(lang->kind == PenaltyKind::Soft);
    const PenaltyEntry* cite = reg.find("citation");
    REQUIRE(cite != nullptr);
    CHECK(cite->kind == PenaltyKind::Gate);
    const PenaltyEntry* epi = reg.find("epistemic_calibration");
    REQUIRE(epi != nullptr);
    CHECK(epi->kind == PenaltyKind::Soft);
    CHECK(reg.find("vibes") == nullptr);

    // Judge-backed penalty degrades to zero without a judge.
    PenaltyContext ctx;
    ctx.question = "q";
    ctx.response = "r";
    CHECK(epi->fn(ctx) == 0.0);
  }
}

TEST_CASE("judge prompt templates match the shipped files byte for byte") {
  const std::string dir = std::string(PACORE_REPO_DIR) + "/templates/";
  CHECK(builtin_verdict_template() == slurp(dir + "judge_verdict_v1.txt"));
  CHECK(builtin_pairwise_template() == slurp(dir + "genrm_pairwise_v1.txt"));
  CHECK(builtin_epistemic_template() ==
        slurp(dir + "epistemic_penalty_v1.txt"));

  CHECK(render_template("{{a}} and {{b}} and {{a}}", {{"a", "x"}}) ==
        "x and {{b}} and x");
  CHECK(render_template("no placeholders", {{"a", "x"}}) == "no placeholders");
  CHECK_THROWS_AS(load_template_file("/nonexistent/tpl.txt"),
                  pacore::ConfigError);
}

TEST_CASE("verdict and score parsing") {
  CHECK(parse_verdict("Verdict: CORRECT") == Verdict::Correct);
  CHECK(parse_verdict("reasoning...\nverdict: incorrect") ==
        Verdict::Incorrect);
  CHECK(parse_verdict("Verdict: CORRECT\nwait\nVerdict: INCORRECT") ==
        Verdict::Incorrect);
  CHECK(parse_verdict("The response is CORRECT") == Verdict::Correct);
  CHECK(parse_verdict("That claim is incorrect.") == Verdict::Incorrect);
  CHECK(parse_verdict("no decision here") == Verdict::Unparseable);
  CHECK(parse_verdict("") == Verdict::Unparseable);

  CHECK(parse_pairwise_score("Score: 0.75") == 0.75);
  CHECK(parse_pairwise_score("Score: 0.2\nScore: 0.9") == 0.9);
  CHECK_THROWS_AS(parse_pairwise_score("Score: 1.5"), ScoringError);
  CHECK_THROWS_AS(parse_pairwise_score("no score"), ScoringError);
}

TEST_CASE("reward spec json round-trip") {
  RewardSpec def;
  CHECK(reward_spec_from_json("{}") == def);
  CHECK(reward_spec_from_json(reward_spec_to_json(def)) == def);

  RewardSpec full;
  full.extraction = ExtractionMode::BoxedLatex;
  full.verifier = VerifierKind::NumericMatch;
  full.penalty_set = {"citation", "language_consistency"};
  full.judge_passes = 3;
  full.iou_gate = 0.3;
  full.tau_frac = 0.2;
  full.cut_frac = 0.6;
  full.allowed_refs = {"[1]", "https://ex.com"};
  CHECK(reward_spec_from_json(reward_spec_to_json(full)) == full);

  for (VerifierKind v :
       {VerifierKind::ExactMatch, VerifierKind::NumericMatch,
        VerifierKind::ModelJudge, VerifierKind::IoUGate,
        VerifierKind::PointDecay}) {
    CHECK(verifier_kind_from_string(to_string(v)) == v);
  }
  CHECK_THROWS_AS(verifier_kind_from_string("oracle"), ValidationError);
  CHECK_THROWS_AS(reward_spec_from_json("not json"), pacore::ParseError);
  CHECK_THROWS_AS(reward_spec_from_json("[]"), pacore::ParseError);

  RewardSpec bad;
  bad.judge_passes = 0;
  CHECK_THROWS_AS(bad.validate(), ValidationError);
  bad = RewardSpec{};
  bad.iou_gate = 1.5;
  CHECK_THROWS_AS(bad.validate(), ValidationError);
  bad = RewardSpec{};
  bad.tau_frac = 0.0;
  CHECK_THROWS_AS(bad.validate(), ValidationError);
  bad = RewardSpec{};
  bad.tau_frac = 0.4;
  bad.cut_frac = 0.2;
  CHECK_THROWS_AS(bad.validate(), ValidationError);
}

TEST_CASE("end-to-end scoring without a judge") {
  RewardSpec spec;
  spec.extraction = ExtractionMode::FinalAnswerLine;
  spec.verifier = VerifierKind::ExactMatch;

  ScoreOutcome out = score_response("q", "Final answer: 42", "42", spec);
  CHECK(out.reward == 1.0);
  CHECK(out.base == 1.0);
  CHECK(out.verdict == Verdict::Correct);
  CHECK(out.extracted == "42");

  out = score_response("q", "Final answer: 41", "42", spec);
  CHECK(out.reward == 0.0);
  CHECK(out.verdict == Verdict::Incorrect);

  out = score_response("q", "no answer marker", "42", spec);
  CHECK(out.reward == 0.0);
  CHECK(out.verdict == Verdict::Unparseable);
  CHECK(!out.extracted.has_value());

  spec.extraction = ExtractionMode::BoxedLatex;
  spec.verifier = VerifierKind::NumericMatch;
  out = score_response("q", "thus \\boxed{1/2}", "0.5", spec);
  CHECK(out.verdict == Verdict::Correct);
  CHECK(out.reward == 1.0);

  SUBCASE("iou verifier") {
    RewardSpec geo;
    geo.verifier = VerifierKind::IoUGate;
    ScoreOutcome g =
        score_response("q", "box [0, 0, 2, 2]", R"({"box": [0, 0, 2, 2]})", geo);
    CHECK(g.base == 1.0);
    CHECK(g.verdict == Verdict::Correct);

    g = score_response("q", "box [10, 10, 11, 11]", R"({"box": [0, 0, 2, 2]})",
                       geo);
    CHECK(g.base == 0.0);
    CHECK(g.verdict == Verdict::Incorrect);

    geo.iou_gate = 0.5;
    g = score_response("q", "box [1, 1, 3, 3]", R"({"box": [0, 0, 2, 2]})", geo);
    CHECK(g.base == 0.0);  // 1/7 gated to zero
    CHECK(g.verdict == Verdict::Incorrect);

    g = score_response("q", "words only", R"({"box": [0, 0, 2, 2]})", geo);
    CHECK(g.verdict == Verdict::Unparseable);

    CHECK_THROWS_AS(
        score_response("q", "box [0,0,1,1]", R"({"not_a_box": 1})", geo),
        ValidationError);
  }

  SUBCASE("point verifier") {
    RewardSpec geo;
    geo.verifier = VerifierKind::PointDecay;
    const std::string gold = R"({"point": [10, 10], "width": 100, "height": 100})";
    ScoreOutcome g = score_response("q", "at (10, 10)", gold, geo);
    CHECK(g.base == 1.0);
    CHECK(g.verdict == Verdict::Correct);

    g = score_response("q", "at (95, 95)", gold, geo);
    CHECK(g.base == 0.0);
    CHECK(g.verdict == Verdict::Incorrect);

    CHECK_THROWS_AS(score_response("q", "at (1, 2)", "{}", geo),
                    ValidationError);
  }

  SUBCASE("penalties flow into the composed reward") {
    RewardSpec pen;
    pen.extraction = ExtractionMode::FinalAnswerLine;
    pen.verifier = VerifierKind::ExactMatch;
    pen.penalty_set = {"citation"};
    pen.allowed_refs = {"[1]"};
    ScoreOutcome g = score_response("q", "see [2]\nFinal answer: 42", "42", pen);
    CHECK(g.base == 1.0);
    REQUIRE(g.gates.size() == 1);
    CHECK(g.gates[0] == 0.0);
    CHECK(g.reward == 0.0);

    g = score_response("q", "see [1]\nFinal answer: 42", "42", pen);
    CHECK(g.reward == 1.0);

    pen.penalty_set = {"language_consistency"};
    g = score_response("Latin question",
                       "\xe7\xad\x94\xe6\xa1\x88\n"
                       "Final answer: 42",
                       "42", pen);
    CHECK(g.base == 1.0);
    REQUIRE(g.penalties.size() == 1);
    CHECK(g.penalties[0] > 0.0);
    CHECK(g.reward < 1.0);

    pen.penalty_set = {"unknown_penalty"};
    CHECK_THROWS_AS(score_response("q", "Final answer: 42", "42", pen),
                    ValidationError);
  }

  SUBCASE("model judge requires an endpoint") {
    RewardSpec mj;
    mj.verifier = VerifierKind::ModelJudge;
    CHECK_THROWS_AS(score_response("q", "r", "g", mj), ValidationError);
  }
}

TEST_CASE("judge calls against a scripted endpoint") {
  using pacore::mock::Behavior;
  using pacore::mock::MockServer;
  using pacore::mock::ScriptedRule;

  const std::uint64_t seed_base = 77;
  auto pass_seed = [&](int i) {
    return derive_seed(seed_base, "judge-pass",
                       static_cast<std::uint64_t>(i));
  };

  std::vector<ScriptedRule> rules;
  ScriptedRule r0;
  r0.seed_in = {pass_seed(0)};
  r0.reply = "Verdict: CORRECT";
  ScriptedRule r1;
  r1.seed_in = {pass_seed(1)};
  r1.reply = "Verdict: INCORRECT";
  ScriptedRule r2;
  r2.seed_in = {pass_seed(2)};
  r2.reply = "hard to say";
  ScriptedRule genrm;
  genrm.seed_in = {derive_seed(seed_base, "genrm", 0)};
  genrm.reply = "reasoning\nScore: 0.25";
  ScriptedRule epi;
  epi.seed_in = {derive_seed(seed_base, "epistemic", 0)};
  epi.reply = "bold claims\nPenalty: 0.4";
  rules = {r0, r1, r2, genrm, epi};

  MockServer server(Behavior::scripted(rules), 8);
  pacore::client::ChatClient chat(local_endpoint(server.port()));
  chat.set_backoff_base_ms(1);

  JudgeEndpoint judge;
  judge.chat = &chat;
  judge.seed_base = seed_base;

  const auto verdicts = judge_with_model("q", "resp", "gold", judge, 3);
  REQUIRE(verdicts.size() == 3);
  CHECK(verdicts[0] == Verdict::Correct);
  CHECK(verdicts[1] == Verdict::Incorrect);
  CHECK(verdicts[2] == Verdict::Unparseable);

  // The judge sends the rendered verdict prompt with all three slots filled.
  bool saw_prompt = false;
  for (const std::string& body : server.recorded_bodies()) {
    if (body.find("resp") != std::string::npos &&
        body.find("gold") != std::string::npos) {
      saw_prompt = true;
    }
  }
  CHECK(saw_prompt);

  CHECK(genrm_pairwise("p", "cand", "ref", judge) == 0.25);

  PenaltyContext ctx;
  ctx.question = "q";
  ctx.response = "r";
  ctx.judge = &judge;
  CHECK(epistemic_penalty(ctx) == 0.4);

  CHECK_THROWS_AS(judge_with_model("q", "r", "g", judge, 0), ValidationError);
}

TEST_CASE("judge transport failure carries the pass index") {
  using pacore::mock::Behavior;
  using pacore::mock::MockServer;
  using pacore::mock::ScriptedRule;

  const std::uint64_t seed_base = 78;
  ScriptedRule ok;
  ok.seed_in = {derive_seed(seed_base, "judge-pass", 0)};
  ok.reply = "Verdict: CORRECT";
  ScriptedRule boom;
  boom.status = 500;
  MockServer server(Behavior::scripted({ok, boom}), 8);

  pacore::client::ChatClient chat(local_endpoint(server.port()));
  chat.set_backoff_base_ms(1);
  JudgeEndpoint judge;
  judge.chat = &chat;
  judge.seed_base = seed_base;

  try {
    judge_with_model("q", "r", "g", judge, 3);
    FAIL("expected TransportError");
  } catch (const TransportError& e) {
    CHECK(e.pass_index() == 1);
  }

  // A judge-backed soft penalty swallows transport failure and returns zero.
  PenaltyContext ctx;
  ctx.question = "q";
  ctx.response = "r";
  ctx.judge = &judge;
  judge.seed_base = 12345;  // routes every call to the failing rule
  CHECK(epistemic_penalty(ctx) == 0.0);
}

TEST_CASE("model judge verifier with majority vote") {
  using pacore::mock::Behavior;
  using pacore::mock::MockServer;
  using pacore::mock::ScriptedRule;

  const std::uint64_t seed_base = 79;
  ScriptedRule c0;
  c0.seed_in = {derive_seed(seed_base, "judge-pass", 0)};
  c0.reply = "Verdict: CORRECT";
  ScriptedRule c1;
  c1.seed_in = {derive_seed(seed_base, "judge-pass", 1)};
  c1.reply = "Verdict: CORRECT";
  ScriptedRule c2;
  c2.seed_in = {derive_seed(seed_base, "judge-pass", 2)};
  c2.reply = "Verdict: INCORRECT";
  const std::uint64_t tie_base = 80;
  ScriptedRule t0;
  t0.seed_in = {derive_seed(tie_base, "judge-pass", 0)};
  t0.reply = "Verdict: CORRECT";
  ScriptedRule t1;
  t1.seed_in = {derive_seed(tie_base, "judge-pass", 1)};
  t1.reply = "Verdict: INCORRECT";
  MockServer server(Behavior::scripted({c0, c1, c2, t0, t1}), 8);

  pacore::client::ChatClient chat(local_endpoint(server.port()));
  chat.set_backoff_base_ms(1);
  JudgeEndpoint judge;
  judge.chat = &chat;
  judge.seed_base = seed_base;

  RewardSpec spec;
  spec.verifier = VerifierKind::ModelJudge;
  spec.judge_passes = 3;
  const ScoreOutcome out = score_response("q", "resp", "gold", spec, &judge);
  CHECK(out.verdict == Verdict::Correct);  // 2 of 3
  CHECK(out.base == 1.0);
  CHECK(out.reward == 1.0);

  spec.judge_passes = 2;  // one correct, one incorrect: tie goes against
  judge.seed_base = tie_base;
  const ScoreOutcome tie = score_response("q", "resp", "gold", spec, &judge);
  CHECK(tie.verdict == Verdict::Incorrect);
  CHECK(tie.reward == 0.0);
}
