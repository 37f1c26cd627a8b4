#include "proofloop/tactic_repair.hpp"

#include "proofloop/errors.hpp"

namespace proofloop::repair {

const ToolList& default_tool_list() {
    static const ToolList tools{
        "by auto",       "by arith",      "by blast",
        "by simp",       "by fastforce",  "by force",
        "by eval",       "by presburger", "by sos",
        "by linarith",   "by (auto simp: field_simps)",
        "sledgehammer",
    };
    return tools;
}

namespace {

std::string trimmed(const std::string& s) {
    std::size_t b = s.find_first_not_of(" \t\r\n\f\v");
    if (b == std::string::npos) return "";
    std::size_t e = s.find_last_not_of(" \t\r\n\f\v");
    return s.substr(b, e - b + 1);
}

}  // namespace

bool is_eligible(const std::string& tactic, bool tc_enabled) {
    if (tactic.find("sledgehammer") != std::string::npos) return true;
    if (!tc_enabled) return false;
    std::string t = trimmed(isar::strip_comments(tactic));
    return t.rfind("by", 0) == 0 || t == ".";
}

StepOutcome correct_step(prover::ProverSession& session, const isar::TacticStep& step,
                         const ToolList& tools, bool tc_enabled,
                         const RepairOptions& options) {
    StepOutcome out;
    out.step_index = step.index;
    out.original_tactic = step.text;
    out.original_reply = session.run_tac(step.text);
    out.final_reply = out.original_reply;
    if (out.original_reply.ok()) {
        out.final = StepResult::passed_unchanged;
        return out;
    }
    if (is_eligible(step.text, tc_enabled)) {
        for (const auto& tool : tools) {
            if (options.skip_duplicate_tool && tool == step.text) continue;
            prover::ProverReply reply = session.run_tac(tool);
            out.attempted.push_back({tool, reply});
            out.final_reply = reply;
            if (reply.ok()) {
                out.final = StepResult::repaired;
                out.repair = tool;
                return out;
            }
        }
    }
    out.final = StepResult::failed;
    return out;
}

ProofOutcome validate_proof(prover::ProverSession& session, const isar::ProofScript& script,
                            const ToolList& tools, bool tc_enabled,
                            const RepairOptions& options) {
    ProofOutcome outcome;
    for (const auto& step : script.steps) {
        StepOutcome so = correct_step(session, step, tools, tc_enabled, options);
        prover::ProverReply last = so.final_reply;
        bool failed = (so.final == StepResult::failed);
        outcome.step_outcomes.push_back(std::move(so));
        outcome.failing_reply = last;
        if (failed) {
            outcome.verdict = Verdict::tactic_failed;
            outcome.failing_step = step.index;
            return outcome;
        }
        if (last.ok() && last.tactic_state == prover::kNoGoals) {
            outcome.verdict = Verdict::success;
            return outcome;
        }
    }
    outcome.verdict = Verdict::proof_incomplete;
    return outcome;
}

std::map<std::size_t, std::string> substitutions(const ProofOutcome& outcome) {
    std::map<std::size_t, std::string> subs;
    for (const auto& so : outcome.step_outcomes)
        if (so.final == StepResult::repaired && so.repair) subs[so.step_index] = *so.repair;
    return subs;
}

const char* verdict_name(Verdict v) {
    switch (v) {
        case Verdict::success: return "success";
        case Verdict::tactic_failed: return "tactic_failed";
        case Verdict::proof_incomplete: return "proof_incomplete";
    }
    return "proof_incomplete";
}

Verdict verdict_from_name(const std::string& name) {
    if (name == "success") return Verdict::success;
    if (name == "tactic_failed") return Verdict::tactic_failed;
    if (name == "proof_incomplete") return Verdict::proof_incomplete;
    throw ConfigError("unknown verdict name: " + name);
}

}  // namespace proofloop::repair
