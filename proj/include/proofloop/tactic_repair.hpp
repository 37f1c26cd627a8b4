#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "proofloop/isar.hpp"
#include "proofloop/prover.hpp"

// Step-wise proof validation with tactic repair. Every step is submitted to
// the prover in order. When a submission fails and the step is eligible (it
// mentions sledgehammer, or repair is enabled and the step is a "by ..." or
// "." tactic), the ordered tool list is tried against the same prover state
// until one tool succeeds; the first success substitutes for the original
// tactic. Validation stops at the first unrepaired failure (tactic_failed),
// at the first reply whose state is "no goals" (success), or after the last
// step with goals still open (proof_incomplete).
namespace proofloop::repair {

using ToolList = std::vector<std::string>;

// Fixed heuristic order; sledgehammer deliberately last (it doubles as the
// baseline strategy when applied to a bare sledgehammer step).
const ToolList& default_tool_list();

enum class StepResult { passed_unchanged, repaired, failed };

struct ToolAttempt {
    std::string tool;
    prover::ProverReply reply;
};

struct StepOutcome {
    std::size_t step_index = 0;
    std::string original_tactic;             // the step text as submitted
    prover::ProverReply original_reply;
    std::vector<ToolAttempt> attempted;      // substitution attempts only
    StepResult final = StepResult::passed_unchanged;
    std::optional<std::string> repair;       // tool that succeeded, if any
    prover::ProverReply final_reply;         // last reply observed for the step
};

enum class Verdict { success, tactic_failed, proof_incomplete };

struct ProofOutcome {
    Verdict verdict = Verdict::proof_incomplete;
    std::vector<StepOutcome> step_outcomes;  // one per submitted step, in order
    prover::ProverReply failing_reply;       // last reply observed (meaningful
                                             // for tactic_failed)
    std::optional<std::size_t> failing_step;
};

struct RepairOptions {
    // Skip a substitution tool textually identical to the just-failed original
    // tactic (it would deterministically fail again). Verdict-equivalent to
    // the plain loop; call counts differ.
    bool skip_duplicate_tool = true;
};

// Eligibility for the substitution loop, mirroring the reference loop exactly:
// a raw substring test for "sledgehammer", otherwise (when repair is enabled)
// the comment-stripped trimmed tactic must start with "by" or equal ".".
bool is_eligible(const std::string& tactic, bool tc_enabled);

// Submits one step (original first, then eligible substitutions).
StepOutcome correct_step(prover::ProverSession& session, const isar::TacticStep& step,
                         const ToolList& tools, bool tc_enabled,
                         const RepairOptions& options = {});

// Runs the whole script through a freshly opened session.
ProofOutcome validate_proof(prover::ProverSession& session, const isar::ProofScript& script,
                            const ToolList& tools, bool tc_enabled,
                            const RepairOptions& options = {});

// Substitution map (step index -> repairing tool) for render_with_markers.
std::map<std::size_t, std::string> substitutions(const ProofOutcome& outcome);

const char* verdict_name(Verdict v);
Verdict verdict_from_name(const std::string& name);

}  // namespace proofloop::repair
