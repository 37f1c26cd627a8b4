#include <string>

#include "doctest.h"
#include "proofloop/errors.hpp"
#include "proofloop/refinement.hpp"
#include "proofloop/tactic_repair.hpp"
#include "test_util.hpp"

using namespace proofloop;
using refine::RoundKind;

TEST_CASE("refine: patch arithmetic") {
    CHECK(refine::patch_count(200, 5) == 40);
    CHECK(refine::patch_count(1, 5) == 1);
    CHECK(refine::patch_count(5, 5) == 1);
    CHECK(refine::patch_count(6, 5) == 2);
    CHECK(refine::patch_count(7, 1) == 7);
    CHECK_THROWS_AS(refine::patch_count(10, 0), InvalidK);
    CHECK_THROWS_AS(refine::patch_count(0, 5), InvalidK);
}

TEST_CASE("refine: round planning walks patches of K attempts") {
    auto p0 = refine::plan_round(0, 5);
    CHECK(p0.kind == RoundKind::initial);
    CHECK(p0.patch_index == 0);
    CHECK(p0.position_in_patch == 0);

    auto p7 = refine::plan_round(7, 5);
    CHECK(p7.kind == RoundKind::refine);
    CHECK(p7.patch_index == 1);
    CHECK(p7.position_in_patch == 2);

    // K == 1 degenerates to independent attempts: every round is initial.
    for (std::size_t a = 0; a < 10; ++a)
        CHECK(refine::plan_round(a, 1).kind == RoundKind::initial);
    CHECK_THROWS_AS(refine::plan_round(3, 0), InvalidK);
}

TEST_CASE("refine: the system message and template match their golden bytes") {
    CHECK(std::string(refine::system_message()) ==
          testutil::slurp(testutil::golden_path("system_message.txt")));
    CHECK(std::string(refine::refinement_template()) ==
          testutil::slurp(testutil::golden_path("refine_template.txt")));
}

TEST_CASE("refine: the initial transcript wraps the prompt sample") {
    auto t = refine::build_initial_transcript("PROMPT");
    REQUIRE(t.size() == 2);
    CHECK(t[0].role == "system");
    CHECK(t[0].content == testutil::slurp(testutil::golden_path("system_message.txt")));
    CHECK(t[1].role == "user");
    CHECK(t[1].content == "PROMPT");
    CHECK_THROWS_AS(refine::build_initial_transcript(""), EmptyPrompt);
}

TEST_CASE("refine: the refine transcript replays prompt, response, and errors") {
    refine::ErrorFeedback feedback;
    feedback.text = "ERRORS";
    auto t = refine::build_refine_transcript("PROMPT", "PREVIOUS", feedback);
    REQUIRE(t.size() == 4);
    CHECK(t[0].role == "system");
    CHECK(t[1].role == "user");
    CHECK(t[1].content == "PROMPT");
    CHECK(t[2].role == "assistant");
    CHECK(t[2].content == "PREVIOUS");
    CHECK(t[3].role == "user");

    std::string golden = testutil::slurp(testutil::golden_path("refine_template.txt"));
    std::string expected = golden;
    expected.replace(expected.find("{}"), 2, "ERRORS");
    CHECK(t[3].content == expected);

    CHECK_THROWS_AS(refine::build_refine_transcript("PROMPT", "", feedback),
                    EmptyPrevious);
    CHECK_THROWS_AS(refine::build_refine_transcript("", "PREVIOUS", feedback),
                    EmptyPrompt);
}

TEST_CASE("refine: apply_refinement_template fills the error slot") {
    auto filled = refine::apply_refinement_template("E1\nE2");
    CHECK(filled.find("E1\nE2.\n") != std::string::npos);
    CHECK(filled.find("{}") == std::string::npos);
    CHECK(filled.find("proof -") != std::string::npos);
}

TEST_CASE("refine: feedback for a failed tactic quotes the step and its error") {
    repair::ProofOutcome outcome;
    outcome.verdict = repair::Verdict::tactic_failed;
    outcome.failing_step = 3;
    repair::StepOutcome so;
    so.step_index = 3;
    so.original_tactic = "by (simp add: broken)";
    so.original_reply = {std::string("Failed to finish proof"), ""};
    so.final = repair::StepResult::failed;
    outcome.step_outcomes = {repair::StepOutcome{}, repair::StepOutcome{},
                             repair::StepOutcome{}, so};

    auto fb = refine::format_feedback(outcome);
    CHECK(fb.text == "by (simp add: broken)\nFailed to finish proof");
    CHECK(fb.source_step_index == 3);
    CHECK_FALSE(fb.truncated);
}

TEST_CASE("refine: feedback for an incomplete proof is the fixed sentence") {
    repair::ProofOutcome outcome;
    outcome.verdict = repair::Verdict::proof_incomplete;
    auto fb = refine::format_feedback(outcome);
    CHECK(fb.text == "The proof was accepted step-by-step but did not close all goals.");
    CHECK_FALSE(fb.truncated);
}

TEST_CASE("refine: feedback on a successful outcome is a usage error") {
    repair::ProofOutcome outcome;
    outcome.verdict = repair::Verdict::success;
    CHECK_THROWS_AS(refine::format_feedback(outcome), NotAFailure);
}

TEST_CASE("refine: clipping keeps the front of oversized feedback") {
    repair::ProofOutcome outcome;
    outcome.verdict = repair::Verdict::tactic_failed;
    outcome.failing_step = 0;
    repair::StepOutcome so;
    so.original_tactic = "by x";
    so.original_reply = {std::string(5000, 'E'), ""};
    outcome.step_outcomes = {so};

    auto fb = refine::format_feedback(outcome, 100);
    CHECK(fb.truncated);
    CHECK(fb.text.size() == 100);
    CHECK(fb.text.rfind("by x\nEEE", 0) == 0);

    auto untouched = refine::format_feedback(outcome, 1 << 20);
    CHECK_FALSE(untouched.truncated);
    CHECK(untouched.text.size() == 5 + 5000);
}
