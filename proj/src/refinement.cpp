#include "proofloop/refinement.hpp"

#include "proofloop/errors.hpp"

namespace proofloop::refine {

namespace {

constexpr std::string_view kSystemMessage =
    "You are an expert in Mathematical Proof and Isabelle Proof Assistant. "
    "Follow the given examples and complete the proof with Isabelle Proof Assistant";

constexpr std::string_view kRefinementTemplate =
    "(*The last proof has the following errors from Isabelle Prover. Therefore,\n"
    " 1) Please Follow  the Above Prompt;\n"
    "\n"
    " 2) And Utilize the Following Errors to redo the last formal proof.\n"
    " {}.\n"
    "\n"
    "*)\n"
    "\n"
    " proof -\n";

constexpr std::string_view kIncompleteSentence =
    "The proof was accepted step-by-step but did not close all goals.";

}  // namespace

std::string_view system_message() { return kSystemMessage; }
std::string_view refinement_template() { return kRefinementTemplate; }

std::string apply_refinement_template(const std::string& error_info) {
    std::string out(kRefinementTemplate);
    std::size_t slot = out.find("{}");
    out.replace(slot, 2, error_info);
    return out;
}

std::size_t patch_count(std::size_t attempts, std::size_t k) {
    if (k < 1) throw InvalidK("patch_count: K must be >= 1");
    if (attempts < 1) throw InvalidK("patch_count: attempts must be >= 1");
    return (attempts + k - 1) / k;
}

RoundPlan plan_round(std::size_t attempt_index, std::size_t k) {
    if (k < 1) throw InvalidK("plan_round: K must be >= 1");
    RoundPlan plan;
    plan.attempt_index = attempt_index;
    plan.patch_index = attempt_index / k;
    plan.position_in_patch = attempt_index % k;
    plan.kind = (plan.position_in_patch == 0) ? RoundKind::initial : RoundKind::refine;
    return plan;
}

Transcript build_initial_transcript(const std::string& prompt_sample) {
    if (prompt_sample.empty())
        throw EmptyPrompt("build_initial_transcript: empty prompt_sample");
    return {{"system", std::string(kSystemMessage)}, {"user", prompt_sample}};
}

Transcript build_refine_transcript(const std::string& prompt_sample,
                                   const std::string& previous_response,
                                   const ErrorFeedback& feedback) {
    if (prompt_sample.empty())
        throw EmptyPrompt("build_refine_transcript: empty prompt_sample");
    if (previous_response.empty())
        throw EmptyPrevious("build_refine_transcript: empty previous_response");
    return {{"system", std::string(kSystemMessage)},
            {"user", prompt_sample},
            {"assistant", previous_response},
            {"user", apply_refinement_template(feedback.text)}};
}

ErrorFeedback format_feedback(const repair::ProofOutcome& outcome, std::size_t cap) {
    if (outcome.verdict == repair::Verdict::success)
        throw NotAFailure("format_feedback: outcome is a success");
    ErrorFeedback fb;
    if (outcome.verdict == repair::Verdict::tactic_failed) {
        const repair::StepOutcome* failing = nullptr;
        for (const auto& so : outcome.step_outcomes)
            if (outcome.failing_step && so.step_index == *outcome.failing_step) failing = &so;
        if (!failing && !outcome.step_outcomes.empty())
            failing = &outcome.step_outcomes.back();
        if (failing) {
            fb.source_step_index = failing->step_index;
            fb.text = failing->original_tactic;
            if (failing->original_reply.error) {
                fb.text += "\n";
                fb.text += *failing->original_reply.error;
            }
        }
    } else {  // proof_incomplete
        fb.text = std::string(kIncompleteSentence);
        fb.source_step_index = outcome.step_outcomes.empty()
                                   ? 0
                                   : outcome.step_outcomes.back().step_index;
    }
    if (fb.text.size() > cap) {
        fb.text.resize(cap);  // keep the front of the diagnostic
        fb.truncated = true;
    }
    return fb;
}

}  // namespace proofloop::refine
