#pragma once

#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

#include "proofloop/tactic_repair.hpp"

// Iterative regeneration with prover feedback. Attempts are grouped into
// patches of K: the first round of each patch samples a fresh proof from the
// unmodified prompt, the remaining K-1 rounds re-prompt with the previous
// (repair-annotated) response and the prover's error folded into a fixed
// refinement wrapper. Disabling refinement degenerates to pure resampling
// (every round initial).
namespace proofloop::refine {

struct ChatMessage {
    std::string role;  // "system" | "user" | "assistant"
    std::string content;
};

using Transcript = std::vector<ChatMessage>;

enum class RoundKind { initial, refine };

struct RoundPlan {
    std::size_t attempt_index = 0;
    RoundKind kind = RoundKind::initial;
    std::size_t patch_index = 0;
    std::size_t position_in_patch = 0;  // 0 iff kind == initial
};

struct ErrorFeedback {
    std::string text;      // always <= the cap it was built with
    bool truncated = false;
    std::size_t source_step_index = 0;
};

// Fixed system prompt for every transcript.
std::string_view system_message();

// Refinement wrapper with "{}" where the error text goes; ends with a
// "proof -" cue plus newline so the model continues the proof body.
std::string_view refinement_template();
std::string apply_refinement_template(const std::string& error_info);

inline constexpr std::size_t kDefaultFeedbackCap = 4000;

std::size_t patch_count(std::size_t attempts, std::size_t k);  // ceil(attempts/k)
RoundPlan plan_round(std::size_t attempt_index, std::size_t k);

// [system, user(prompt_sample)]. Throws EmptyPrompt on an empty prompt.
Transcript build_initial_transcript(const std::string& prompt_sample);

// [system, user(prompt_sample), assistant(previous_response),
//  user(template(feedback.text))]. The initial prompt is embedded unmodified.
Transcript build_refine_transcript(const std::string& prompt_sample,
                                   const std::string& previous_response,
                                   const ErrorFeedback& feedback);

// Turns a failed ProofOutcome into feedback text: for tactic_failed, the
// failing step's tactic plus its original prover error; for proof_incomplete,
// a fixed sentence. Clipping keeps the front (Isabelle errors front-load the
// diagnostic). Throws NotAFailure on a successful outcome.
ErrorFeedback format_feedback(const repair::ProofOutcome& outcome,
                              std::size_t cap = kDefaultFeedbackCap);

}  // namespace proofloop::refine
