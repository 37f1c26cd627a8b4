#pragma once

#include <stdexcept>
#include <string>

// Exception types shared across the library. Each maps to one failure mode a
// caller can meaningfully distinguish; everything carries a human-readable
// message describing what was being attempted.
namespace proofloop {

struct Error : std::runtime_error {
    explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

// isar: input text could not be segmented (unbalanced comments, no proof body).
struct ParseError : Error {
    using Error::Error;
};

// isar: a substitution index does not name a terminal step.
struct IndexError : Error {
    using Error::Error;
};

// prover: bridge endpoint unreachable or the connection died mid-frame.
struct BridgeUnavailable : Error {
    using Error::Error;
};

// prover: the backend rejected the statement at session open.
struct BadStatement : Error {
    using Error::Error;
};

// prover: submission after close or after the goal was already discharged.
struct SessionClosed : Error {
    using Error::Error;
};

// refinement: K < 1 or a non-positive attempt budget.
struct InvalidK : Error {
    using Error::Error;
};

// refinement: transcript builders refuse empty prompts / previous responses.
struct EmptyPrompt : Error {
    using Error::Error;
};
struct EmptyPrevious : Error {
    using Error::Error;
};

// refinement: format_feedback called on a successful outcome.
struct NotAFailure : Error {
    using Error::Error;
};

// llm: transport failed after retries, or the service answered non-success.
struct BackendError : Error {
    using Error::Error;
};

// llm: scripted replay got a request whose fingerprint differs from the next
// recorded entry (or ran out of entries).
struct TranscriptMismatch : Error {
    using Error::Error;
};

// llm: run-level request budget exhausted.
struct BudgetExceeded : Error {
    using Error::Error;
};

// fixtures: no fixture directory of that name.
struct UnknownFixture : Error {
    using Error::Error;
};

// harness: resume directory was produced under a different configuration.
struct ConfigMismatch : Error {
    using Error::Error;
};

// harness/CLI: malformed configuration or problem input.
struct ConfigError : Error {
    using Error::Error;
};

}  // namespace proofloop
