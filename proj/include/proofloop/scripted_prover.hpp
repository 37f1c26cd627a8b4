#pragma once

#include <regex>
#include <string>
#include <vector>

#include "proofloop/prover.hpp"

// Deterministic rules-driven prover used by tests and fixtures. Each rule
// pairs a substring test on the current tactic state with a regex on the
// submitted tactic; the first matching rule's reply wins, otherwise the
// default reply is returned. Successful replies advance the state to the
// reply's tactic_state; failures leave it untouched, which gives the repair
// loop its retry-against-the-same-state guarantee for free.
//
// Matching normalizes the submitted tactic first (comments stripped,
// whitespace collapsed) so rules stay robust to attached comments and
// multi-line steps; states are matched verbatim by substring.
namespace proofloop::scripted {

struct ScriptedRule {
    std::string state_contains;  // "" matches every state
    std::string tactic_regex;    // ECMAScript, searched; "" matches everything
    prover::ProverReply reply;
};

struct ScriptedProverRules {
    std::vector<ScriptedRule> rules;
    prover::ProverReply default_reply;
    std::string initial_state;  // state after init; empty → the statement text
    std::vector<std::string> reject_statement_contains;  // init fails on match
    std::string notes;

    // Parses the JSON schema {"rules": [...], "default": {...}} with the
    // optional keys above. Throws ConfigError on malformed input.
    static ScriptedProverRules from_json_text(const std::string& json_text);
    static ScriptedProverRules from_file(const std::string& path);
    std::string to_json_text() const;

    // First-match evaluation against (state, normalized tactic).
    const prover::ProverReply& evaluate(const std::string& state,
                                        const std::string& tactic) const;
};

class ScriptedProverClient : public prover::ProverClient {
  public:
    explicit ScriptedProverClient(ScriptedProverRules rules);

    prover::ProverReply init(const std::string& statement) override;
    prover::ProverReply run_tac(const std::string& tactic) override;
    void close() override;

    const std::string& state() const { return state_; }

  private:
    ScriptedProverRules rules_;
    std::string state_;
    bool closed_ = false;
};

// Escapes a literal so it matches itself as an ECMAScript regex.
std::string regex_escape(const std::string& literal);

}  // namespace proofloop::scripted
