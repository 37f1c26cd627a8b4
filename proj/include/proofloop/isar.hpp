#pragma once

#include <cstddef>
#include <map>
#include <string>
#include <string_view>
#include <vector>

// Isar proof-script segmentation.
//
// A proof text is split into steps at Isar keyword boundaries so each step can
// be submitted to a prover one transition at a time. Terminal steps are the
// ones that try to discharge a goal ("by ...", ".", "..", anything mentioning
// sledgehammer); everything else is structural. A trailing "by ..." on a goal
// line is split off into its own terminal step so it can be replaced
// independently when repair substitutes a different tactic.
//
// Segmentation is intentionally lexical: it understands quotes, backtick
// quotations, and nested (* ... *) comments, but it does not understand Isar
// semantics. The contract that matters downstream is byte-exact round-tripping:
// rendering a parsed script with no substitutions reproduces the input exactly.
namespace proofloop::isar {

enum class StepKind { structural, terminal };

struct SourceSpan {
    std::size_t begin = 0;  // byte offset into raw_text, inclusive
    std::size_t end = 0;    // byte offset, exclusive
};

struct TacticStep {
    std::size_t index = 0;
    std::string text;  // verbatim slice raw_text[begin, end), incl. attached comments
    StepKind kind = StepKind::structural;
    SourceSpan source_span;
};

struct ProofScript {
    std::string statement;  // from the first theorem/lemma keyword to the line
                            // before the first proof keyword; empty when the
                            // text is a bare body
    std::vector<TacticStep> steps;
    std::string raw_text;
};

struct ValidityHit {
    std::string keyword;  // "sorry" or "oops"
    std::size_t offset = 0;
};

struct ValidityReport {
    bool has_cheating = false;
    std::vector<ValidityHit> hits;
};

// Marker appended (with its leading space) after every substituted tactic when
// rendering a repaired proof.
inline constexpr std::string_view kRepairMarker = " [ATPWithTC]";

// Splits `text` into a ProofScript. Throws ParseError on empty input,
// unbalanced comments, a statement with no following proof body, or a text
// with no recognizable steps at all.
ProofScript parse_proof(const std::string& text);

// Whole-word scan for "sorry"/"oops" outside comments and quotations. Total:
// never throws, even on texts parse_proof would reject.
ValidityReport check_validity(const std::string& text);

// Re-emits raw_text with each substituted step replaced by its replacement
// text followed by kRepairMarker. Keys must index terminal steps (IndexError
// otherwise). An empty map reproduces raw_text byte-for-byte.
std::string render_with_markers(const ProofScript& script,
                                const std::map<std::size_t, std::string>& substitutions);

// Removes every occurrence of kRepairMarker; inverse of the annotation added
// by render_with_markers, used before re-validating a stored proof.
std::string strip_markers(const std::string& text);

// Classification used by the parser, exposed for property tests: comments are
// stripped, the remainder trimmed, then the terminal rules applied.
StepKind classify_step_text(const std::string& text);

// Replaces (possibly nested) (* ... *) comments with nothing. Comment
// delimiters inside string/backtick quotations are left alone. Total.
std::string strip_comments(const std::string& text);

// strip_comments + collapse every whitespace run to one space + trim. This is
// the canonical form the scripted prover matches rules against.
std::string normalize_tactic(const std::string& text);

}  // namespace proofloop::isar
