#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "json.hpp"
#include "proofloop/llm.hpp"
#include "proofloop/prover.hpp"
#include "proofloop/refinement.hpp"
#include "proofloop/tactic_repair.hpp"

// Evaluation harness: runs the sketch → validate → repair → refine loop over a
// problem set under an attempt budget, persists every attempt before the next
// one starts, and aggregates solve curves. A problem counts as solved only
// when the prover verdict is success AND the generated text is free of
// sorry/oops outside comments (the validity gate).
namespace proofloop::harness {

enum class Split { valid, test, other };
enum class InformalSource { human, model };

struct Problem {
    std::string id;
    Split split = Split::other;
    std::string formal_statement;
    std::string informal_statement;
    std::optional<std::string> human_informal_proof;
};

std::vector<Problem> load_problems_jsonl(const std::string& path);
nlohmann::json problem_to_json(const Problem& problem);
Problem problem_from_json(const nlohmann::json& j);

struct RunConfig {
    std::size_t attempts = 200;
    std::size_t k = 5;
    bool tc_enabled = true;
    bool cc_enabled = true;
    InformalSource informal_source = InformalSource::human;
    repair::ToolList tools = repair::default_tool_list();
    llm::CompletionParams completion;
    std::size_t feedback_cap = refine::kDefaultFeedbackCap;
    bool skip_duplicate_tool = true;

    // Operational knobs, excluded from the fingerprint.
    std::size_t workers = 4;
    std::size_t backend_error_threshold = 3;
    std::size_t request_budget = 0;  // 0 = unlimited

    // Backend descriptors, e.g. {"type":"scripted","rules":"path.json"} or
    // {"type":"bridge","host":...,"port":...}; llm: {"type":"scripted",
    // "transcript":"path.jsonl"} or {"type":"http","base_url":...}.
    nlohmann::json prover_backend;
    nlohmann::json llm_backend;

    static RunConfig from_json(const nlohmann::json& j);
    static RunConfig from_file(const std::string& path);
    nlohmann::json to_json() const;

    // Hash of the semantic fields; resuming under a different fingerprint is
    // refused with ConfigMismatch.
    std::string fingerprint() const;
};

struct StageTiming {
    std::int64_t informal_ms = 0;
    std::int64_t sketch_ms = 0;
    std::int64_t prover_ms = 0;
    std::int64_t total_ms = 0;
};

struct AttemptRecord {
    std::string problem_id;
    std::size_t attempt_index = 0;
    refine::RoundPlan round;
    std::string informal_proof;
    std::string raw_formal_proof;
    std::optional<std::string> validated_proof;  // marker-annotated; absent on parse failure
    repair::Verdict verdict = repair::Verdict::tactic_failed;
    std::optional<std::string> parse_error;
    isar::ValidityReport validity;
    std::map<std::size_t, std::string> substitutions;
    std::optional<refine::ErrorFeedback> feedback_sent;  // feedback for the NEXT round
    bool solved = false;
    StageTiming timing;

    nlohmann::json to_json() const;
    static AttemptRecord from_json(const nlohmann::json& j);
};

// Everything run_problem needs to talk to the outside world. The prover
// factory opens a fresh connection per attempt.
struct Backends {
    std::shared_ptr<llm::ChatBackend> chat;
    std::function<std::unique_ptr<prover::ProverClient>()> prover_factory;
};

// Builds backends from the config descriptors. Relative paths resolve against
// base_dir. The http llm backend reads its key from the environment variable
// named by the descriptor's "api_key_env" (default PROOFLOOP_LLM_API_KEY).
Backends make_backends(const RunConfig& config, const std::string& base_dir,
                       const std::string& run_dir);

struct ProblemResult {
    std::string id;
    Split split = Split::other;
    bool solved = false;
    std::optional<std::size_t> first_solving_attempt;
    bool aborted = false;
    std::string abort_reason;
    std::size_t attempts_recorded = 0;
};

struct SuiteReport {
    std::string config_fingerprint;
    std::size_t attempts = 0;
    std::vector<ProblemResult> problems;

    std::map<std::string, double> success_rate() const;  // per split present
    // Cumulative solves within the first n attempts, for n = 1..attempts.
    // Monotone by construction.
    std::vector<std::pair<std::size_t, std::size_t>> curve() const;
    nlohmann::json to_json() const;
    std::string curve_csv() const;
};

// Deterministic prompt assembly (also used when recording fixture
// transcripts, so scripted replay lines up with the pipeline).
std::string informal_prompt(const Problem& problem);
std::string sketch_prompt(const Problem& problem, const std::string& informal_proof);

// Feedback sent when the prover accepted the proof but it leaned on
// sorry/oops; such an attempt never counts as solved.
std::string_view cheating_sentence();

// Sink for persisted attempt records / abort markers of one problem.
struct RecordSink {
    std::function<void(const nlohmann::json&)> append;
};

// Runs one problem starting after `existing` records (resume support).
// Appends every new record through the sink before the next attempt begins.
ProblemResult run_problem(const Problem& problem, const RunConfig& config,
                          const Backends& backends,
                          const std::vector<AttemptRecord>& existing, RecordSink sink);

// Full-suite entry points. run_dir is created; layout: config.json,
// problems.json, logs/<id>.jsonl, report.json, curve.csv.
SuiteReport run_suite(const std::vector<Problem>& problems, const RunConfig& config,
                      const Backends& backends, const std::string& run_dir);
SuiteReport resume(const std::string& run_dir, const std::vector<Problem>& problems,
                   const RunConfig& config, const Backends& backends);

// Re-aggregates a run directory without touching any backend.
SuiteReport report_from_dir(const std::string& run_dir);

const char* split_name(Split s);
Split split_from_name(const std::string& name);
std::string sanitize_id(const std::string& id);

}  // namespace proofloop::harness
