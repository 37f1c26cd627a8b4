#include "proofloop/harness.hpp"

#include <atomic>
#include <chrono>
#include <exception>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <thread>

#include "proofloop/bridge.hpp"
#include "proofloop/errors.hpp"
#include "proofloop/hash.hpp"
#include "proofloop/isar.hpp"
#include "proofloop/scripted_prover.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace proofloop::harness {

namespace {

constexpr std::string_view kCheatingSentence =
    "The proof relies on sorry or oops, which is not allowed.";

std::string read_text_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ConfigError("cannot read file: " + path);
    std::ostringstream out;
    out << in.rdbuf();
    return out.str();
}

void write_text_file(const std::string& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw ConfigError("cannot write file: " + path);
    out << content;
    out.flush();
    if (!out) throw ConfigError("short write: " + path);
}

std::string resolve_path(const std::string& base_dir, const std::string& path) {
    if (path.empty() || path.front() == '/' || base_dir.empty()) return path;
    return base_dir + "/" + path;
}

std::int64_t ms_between(std::chrono::steady_clock::time_point a,
                        std::chrono::steady_clock::time_point b) {
    return std::chrono::duration_cast<std::chrono::milliseconds>(b - a).count();
}

json validity_to_json(const isar::ValidityReport& v) {
    json hits = json::array();
    for (const auto& h : v.hits) hits.push_back({{"keyword", h.keyword}, {"offset", h.offset}});
    return {{"has_cheating", v.has_cheating}, {"hits", hits}};
}

isar::ValidityReport validity_from_json(const json& j) {
    isar::ValidityReport v;
    v.has_cheating = j.at("has_cheating").get<bool>();
    for (const auto& h : j.at("hits"))
        v.hits.push_back({h.at("keyword").get<std::string>(), h.at("offset").get<std::size_t>()});
    return v;
}

json feedback_to_json(const std::optional<refine::ErrorFeedback>& fb) {
    if (!fb) return nullptr;
    return {{"source_step_index", fb->source_step_index},
            {"text", fb->text},
            {"truncated", fb->truncated}};
}

std::optional<refine::ErrorFeedback> feedback_from_json(const json& j) {
    if (j.is_null()) return std::nullopt;
    refine::ErrorFeedback fb;
    fb.text = j.at("text").get<std::string>();
    fb.truncated = j.at("truncated").get<bool>();
    fb.source_step_index = j.at("source_step_index").get<std::size_t>();
    return fb;
}

const char* round_kind_name(refine::RoundKind k) {
    return k == refine::RoundKind::initial ? "initial" : "refine";
}

refine::RoundKind round_kind_from_name(const std::string& name) {
    if (name == "initial") return refine::RoundKind::initial;
    if (name == "refine") return refine::RoundKind::refine;
    throw ConfigError("unknown round kind: " + name);
}

// Clips free-form feedback (parse errors, fixed sentences) the same way
// format_feedback clips prover errors: keep the front.
refine::ErrorFeedback clipped_feedback(std::string text, std::size_t cap) {
    refine::ErrorFeedback fb;
    fb.text = std::move(text);
    if (fb.text.size() > cap) {
        fb.text.resize(cap);
        fb.truncated = true;
    }
    return fb;
}

}  // namespace

std::string_view cheating_sentence() { return kCheatingSentence; }

const char* split_name(Split s) {
    switch (s) {
        case Split::valid: return "valid";
        case Split::test: return "test";
        default: return "other";
    }
}

Split split_from_name(const std::string& name) {
    if (name == "valid") return Split::valid;
    if (name == "test") return Split::test;
    if (name == "other") return Split::other;
    throw ConfigError("unknown split: " + name);
}

std::string sanitize_id(const std::string& id) {
    std::string out = id;
    for (char& c : out) {
        bool ok = (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') ||
                  (c >= '0' && c <= '9') || c == '.' || c == '_' || c == '-';
        if (!ok) c = '_';
    }
    if (out.empty()) out = "_";
    return out;
}

json problem_to_json(const Problem& p) {
    json j = {{"id", p.id},
              {"split", split_name(p.split)},
              {"formal_statement", p.formal_statement},
              {"informal_statement", p.informal_statement}};
    j["human_informal_proof"] =
        p.human_informal_proof ? json(*p.human_informal_proof) : json(nullptr);
    return j;
}

Problem problem_from_json(const json& j) {
    Problem p;
    try {
        p.id = j.at("id").get<std::string>();
        if (p.id.empty()) throw ConfigError("problem: empty id");
        p.split = split_from_name(j.value("split", std::string("other")));
        p.formal_statement = j.at("formal_statement").get<std::string>();
        p.informal_statement = j.at("informal_statement").get<std::string>();
        if (j.contains("human_informal_proof") && !j.at("human_informal_proof").is_null())
            p.human_informal_proof = j.at("human_informal_proof").get<std::string>();
    } catch (const json::exception& e) {
        throw ConfigError(std::string("malformed problem: ") + e.what());
    }
    return p;
}

std::vector<Problem> load_problems_jsonl(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ConfigError("cannot read problems file: " + path);
    std::vector<Problem> out;
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
        json j;
        try {
            j = json::parse(line);
        } catch (const json::exception& e) {
            throw ConfigError(path + ":" + std::to_string(lineno) + ": " + e.what());
        }
        out.push_back(problem_from_json(j));
    }
    return out;
}

RunConfig RunConfig::from_json(const json& j) {
    RunConfig c;
    try {
        c.attempts = j.value("attempts", c.attempts);
        c.k = j.value("k", c.k);
        c.tc_enabled = j.value("tc_enabled", c.tc_enabled);
        c.cc_enabled = j.value("cc_enabled", c.cc_enabled);
        if (j.contains("informal_source")) {
            std::string s = j.at("informal_source").get<std::string>();
            if (s == "human")
                c.informal_source = InformalSource::human;
            else if (s == "model")
                c.informal_source = InformalSource::model;
            else
                throw ConfigError("unknown informal_source: " + s);
        }
        if (j.contains("tools")) c.tools = j.at("tools").get<std::vector<std::string>>();
        if (j.contains("completion")) {
            const json& cj = j.at("completion");
            c.completion.temperature = cj.value("temperature", c.completion.temperature);
            c.completion.max_output = cj.value("max_output", c.completion.max_output);
            c.completion.model_name = cj.value("model", c.completion.model_name);
            if (cj.contains("seed") && !cj.at("seed").is_null())
                c.completion.seed_hint = cj.at("seed").get<std::int64_t>();
        }
        c.feedback_cap = j.value("feedback_cap", c.feedback_cap);
        c.skip_duplicate_tool = j.value("skip_duplicate_tool", c.skip_duplicate_tool);
        c.workers = j.value("workers", c.workers);
        c.backend_error_threshold = j.value("backend_error_threshold", c.backend_error_threshold);
        c.request_budget = j.value("request_budget", c.request_budget);
        if (j.contains("prover_backend")) c.prover_backend = j.at("prover_backend");
        if (j.contains("llm_backend")) c.llm_backend = j.at("llm_backend");
    } catch (const json::exception& e) {
        throw ConfigError(std::string("malformed run config: ") + e.what());
    }
    if (c.k < 1) throw InvalidK("run config: k must be >= 1");
    if (c.attempts < 1) throw ConfigError("run config: attempts must be >= 1");
    if (c.tools.empty()) throw ConfigError("run config: tools must be non-empty");
    if (c.workers < 1) throw ConfigError("run config: workers must be >= 1");
    return c;
}

RunConfig RunConfig::from_file(const std::string& path) {
    json j;
    try {
        j = json::parse(read_text_file(path));
    } catch (const json::exception& e) {
        throw ConfigError(path + ": " + e.what());
    }
    return from_json(j);
}

json RunConfig::to_json() const {
    json completion = {{"temperature", this->completion.temperature},
                       {"max_output", this->completion.max_output},
                       {"model", this->completion.model_name}};
    completion["seed"] =
        this->completion.seed_hint ? json(*this->completion.seed_hint) : json(nullptr);
    return {{"attempts", attempts},
            {"k", k},
            {"tc_enabled", tc_enabled},
            {"cc_enabled", cc_enabled},
            {"informal_source", informal_source == InformalSource::human ? "human" : "model"},
            {"tools", tools},
            {"completion", completion},
            {"feedback_cap", feedback_cap},
            {"skip_duplicate_tool", skip_duplicate_tool},
            {"workers", workers},
            {"backend_error_threshold", backend_error_threshold},
            {"request_budget", request_budget},
            {"prover_backend", prover_backend},
            {"llm_backend", llm_backend}};
}

std::string RunConfig::fingerprint() const {
    // Semantic fields only: operational knobs (workers, retry thresholds,
    // budget) and backend descriptors (paths, hosts) may legitimately differ
    // between the original run and a resume of it.
    json full = to_json();
    json semantic = {{"attempts", full.at("attempts")},
                     {"cc_enabled", full.at("cc_enabled")},
                     {"completion", full.at("completion")},
                     {"feedback_cap", full.at("feedback_cap")},
                     {"informal_source", full.at("informal_source")},
                     {"k", full.at("k")},
                     {"skip_duplicate_tool", full.at("skip_duplicate_tool")},
                     {"tc_enabled", full.at("tc_enabled")},
                     {"tools", full.at("tools")}};
    return fnv1a64_hex(semantic.dump());
}

json AttemptRecord::to_json() const {
    json j;
    j["attempt_index"] = attempt_index;
    j["feedback_sent"] = feedback_to_json(feedback_sent);
    j["informal_proof"] = informal_proof;
    j["parse_error"] = parse_error ? json(*parse_error) : json(nullptr);
    j["problem_id"] = problem_id;
    j["raw_formal_proof"] = raw_formal_proof;
    j["round"] = {{"kind", round_kind_name(round.kind)},
                  {"patch_index", round.patch_index},
                  {"position_in_patch", round.position_in_patch}};
    j["solved"] = solved;
    json subs = json::object();
    for (const auto& [idx, tool] : substitutions) subs[std::to_string(idx)] = tool;
    j["substitutions"] = subs;
    j["timing"] = {{"informal_ms", timing.informal_ms},
                   {"sketch_ms", timing.sketch_ms},
                   {"prover_ms", timing.prover_ms},
                   {"total_ms", timing.total_ms}};
    j["validated_proof"] = validated_proof ? json(*validated_proof) : json(nullptr);
    j["validity"] = validity_to_json(validity);
    j["verdict"] = repair::verdict_name(verdict);
    return j;
}

AttemptRecord AttemptRecord::from_json(const json& j) {
    AttemptRecord r;
    try {
        r.problem_id = j.at("problem_id").get<std::string>();
        r.attempt_index = j.at("attempt_index").get<std::size_t>();
        const json& rj = j.at("round");
        r.round.attempt_index = r.attempt_index;
        r.round.kind = round_kind_from_name(rj.at("kind").get<std::string>());
        r.round.patch_index = rj.at("patch_index").get<std::size_t>();
        r.round.position_in_patch = rj.at("position_in_patch").get<std::size_t>();
        r.informal_proof = j.at("informal_proof").get<std::string>();
        r.raw_formal_proof = j.at("raw_formal_proof").get<std::string>();
        if (!j.at("validated_proof").is_null())
            r.validated_proof = j.at("validated_proof").get<std::string>();
        r.verdict = repair::verdict_from_name(j.at("verdict").get<std::string>());
        if (!j.at("parse_error").is_null())
            r.parse_error = j.at("parse_error").get<std::string>();
        r.validity = validity_from_json(j.at("validity"));
        for (const auto& [key, value] : j.at("substitutions").items())
            r.substitutions[static_cast<std::size_t>(std::stoull(key))] =
                value.get<std::string>();
        r.feedback_sent = feedback_from_json(j.at("feedback_sent"));
        r.solved = j.at("solved").get<bool>();
        const json& tj = j.at("timing");
        r.timing.informal_ms = tj.at("informal_ms").get<std::int64_t>();
        r.timing.sketch_ms = tj.at("sketch_ms").get<std::int64_t>();
        r.timing.prover_ms = tj.at("prover_ms").get<std::int64_t>();
        r.timing.total_ms = tj.at("total_ms").get<std::int64_t>();
    } catch (const json::exception& e) {
        throw ConfigError(std::string("malformed attempt record: ") + e.what());
    }
    return r;
}

std::string informal_prompt(const Problem& problem) {
    return "Informal statement:\n" + problem.informal_statement + "\n\nInformal proof:";
}

std::string sketch_prompt(const Problem& problem, const std::string& informal_proof) {
    return informal_prompt(problem) + "\n" + informal_proof + "\n\nFormal statement:\n" +
           problem.formal_statement + "\n\nFormal proof:";
}

namespace {

// One generate → parse → validate round. Throws backend/prover connectivity
// errors through to run_problem, which decides between retry and abort.
AttemptRecord run_attempt(const Problem& problem, const RunConfig& config,
                          const Backends& backends, const refine::RoundPlan& plan,
                          std::string& patch_informal, const std::string& prev_response,
                          const std::optional<refine::ErrorFeedback>& prev_feedback) {
    AttemptRecord record;
    record.problem_id = problem.id;
    record.attempt_index = plan.attempt_index;
    record.round = plan;
    const auto t_start = std::chrono::steady_clock::now();

    if (plan.kind == refine::RoundKind::initial) {
        if (config.informal_source == InformalSource::human) {
            patch_informal = problem.human_informal_proof.value_or("");
        } else {
            auto transcript = refine::build_initial_transcript(informal_prompt(problem));
            const auto t0 = std::chrono::steady_clock::now();
            patch_informal = backends.chat->complete(transcript, config.completion);
            record.timing.informal_ms = ms_between(t0, std::chrono::steady_clock::now());
        }
    }
    record.informal_proof = patch_informal;

    const std::string prompt = sketch_prompt(problem, patch_informal);
    refine::Transcript transcript;
    if (plan.kind == refine::RoundKind::initial) {
        transcript = refine::build_initial_transcript(prompt);
    } else {
        refine::ErrorFeedback fb =
            prev_feedback ? *prev_feedback : refine::ErrorFeedback{};
        transcript = refine::build_refine_transcript(prompt, prev_response, fb);
    }
    const auto t_sketch = std::chrono::steady_clock::now();
    record.raw_formal_proof = backends.chat->complete(transcript, config.completion);
    record.timing.sketch_ms = ms_between(t_sketch, std::chrono::steady_clock::now());

    record.validity = isar::check_validity(record.raw_formal_proof);

    isar::ProofScript script;
    bool parsed = false;
    try {
        script = isar::parse_proof(record.raw_formal_proof);
        parsed = true;
    } catch (const ParseError& e) {
        record.verdict = repair::Verdict::tactic_failed;
        record.parse_error = e.what();
        record.feedback_sent = clipped_feedback(e.what(), config.feedback_cap);
        record.solved = false;
    }

    if (parsed) {
        const auto t_prover = std::chrono::steady_clock::now();
        auto session = prover::open_session(backends.prover_factory(), problem.id,
                                            problem.formal_statement);
        repair::RepairOptions options;
        options.skip_duplicate_tool = config.skip_duplicate_tool;
        repair::ProofOutcome outcome =
            repair::validate_proof(*session, script, config.tools, config.tc_enabled, options);
        record.timing.prover_ms = ms_between(t_prover, std::chrono::steady_clock::now());

        record.verdict = outcome.verdict;
        record.substitutions = repair::substitutions(outcome);
        if (outcome.verdict == repair::Verdict::success) {
            record.validated_proof = isar::render_with_markers(script, record.substitutions);
            if (record.validity.has_cheating) {
                record.solved = false;
                record.feedback_sent =
                    clipped_feedback(std::string(kCheatingSentence), config.feedback_cap);
            } else {
                record.solved = true;
            }
        } else {
            record.solved = false;
            record.feedback_sent = refine::format_feedback(outcome, config.feedback_cap);
        }
    }

    record.timing.total_ms = ms_between(t_start, std::chrono::steady_clock::now());
    return record;
}

}  // namespace

ProblemResult run_problem(const Problem& problem, const RunConfig& config,
                          const Backends& backends,
                          const std::vector<AttemptRecord>& existing, RecordSink sink) {
    ProblemResult result;
    result.id = problem.id;
    result.split = problem.split;
    result.attempts_recorded = existing.size();
    for (const auto& r : existing) {
        if (r.solved) {
            result.solved = true;
            result.first_solving_attempt = r.attempt_index;
        }
    }
    if (result.solved || existing.size() >= config.attempts) return result;

    const std::size_t effective_k = config.cc_enabled ? config.k : 1;
    std::string patch_informal;
    std::string prev_response;
    std::optional<refine::ErrorFeedback> prev_feedback;
    if (!existing.empty()) {
        const AttemptRecord& last = existing.back();
        patch_informal = last.informal_proof;
        prev_response = last.raw_formal_proof;
        prev_feedback = last.feedback_sent;
    }

    auto abort_with = [&](const std::string& reason) {
        sink.append({{"abort", reason}, {"problem_id", problem.id}});
        result.aborted = true;
        result.abort_reason = reason;
        return result;
    };

    if (config.informal_source == InformalSource::human && !problem.human_informal_proof)
        return abort_with("missing human informal proof");

    std::size_t consecutive_backend_errors = 0;
    std::size_t attempt = existing.size();
    while (attempt < config.attempts) {
        const refine::RoundPlan plan = refine::plan_round(attempt, effective_k);
        AttemptRecord record;
        try {
            record = run_attempt(problem, config, backends, plan, patch_informal,
                                 prev_response, prev_feedback);
        } catch (const BackendError& e) {
            if (++consecutive_backend_errors >= config.backend_error_threshold)
                return abort_with(std::string("backend error: ") + e.what());
            continue;  // retry the same attempt index
        } catch (const BudgetExceeded& e) {
            return abort_with(std::string("request budget exceeded: ") + e.what());
        } catch (const BadStatement& e) {
            return abort_with(std::string("prover rejected statement: ") + e.what());
        } catch (const BridgeUnavailable& e) {
            return abort_with(std::string("prover unavailable: ") + e.what());
        } catch (const EmptyPrompt& e) {
            return abort_with(std::string("empty prompt: ") + e.what());
        } catch (const EmptyPrevious& e) {
            return abort_with(std::string("empty previous response: ") + e.what());
        }
        consecutive_backend_errors = 0;

        sink.append(record.to_json());
        result.attempts_recorded += 1;
        prev_response = record.raw_formal_proof;
        prev_feedback = record.feedback_sent;

        if (record.solved) {
            result.solved = true;
            result.first_solving_attempt = attempt;
            return result;
        }
        ++attempt;
    }
    return result;
}

std::map<std::string, double> SuiteReport::success_rate() const {
    std::map<std::string, std::pair<std::size_t, std::size_t>> tally;  // solved, total
    for (const auto& p : problems) {
        auto& t = tally[split_name(p.split)];
        if (p.solved) t.first += 1;
        t.second += 1;
    }
    std::map<std::string, double> out;
    for (const auto& [name, t] : tally)
        out[name] = t.second == 0 ? 0.0 : static_cast<double>(t.first) / t.second;
    return out;
}

std::vector<std::pair<std::size_t, std::size_t>> SuiteReport::curve() const {
    std::vector<std::pair<std::size_t, std::size_t>> rows;
    rows.reserve(attempts);
    for (std::size_t n = 1; n <= attempts; ++n) {
        std::size_t solved_by_n = 0;
        for (const auto& p : problems)
            if (p.first_solving_attempt && *p.first_solving_attempt < n) ++solved_by_n;
        rows.emplace_back(n, solved_by_n);
    }
    return rows;
}

json SuiteReport::to_json() const {
    json problems_json = json::array();
    std::size_t solved_total = 0;
    for (const auto& p : problems) {
        if (p.solved) ++solved_total;
        json pj = {{"id", p.id},
                   {"split", split_name(p.split)},
                   {"solved", p.solved},
                   {"aborted", p.aborted},
                   {"abort_reason", p.abort_reason},
                   {"attempts_recorded", p.attempts_recorded}};
        pj["first_solving_attempt"] =
            p.first_solving_attempt ? json(*p.first_solving_attempt) : json(nullptr);
        problems_json.push_back(pj);
    }
    return {{"attempts", attempts},
            {"config_fingerprint", config_fingerprint},
            {"problems", problems_json},
            {"solved_total", solved_total},
            {"success_rate", success_rate()}};
}

std::string SuiteReport::curve_csv() const {
    std::string out = "n,solved\n";
    for (const auto& [n, solved] : curve())
        out += std::to_string(n) + "," + std::to_string(solved) + "\n";
    return out;
}

Backends make_backends(const RunConfig& config, const std::string& base_dir,
                       const std::string& run_dir) {
    Backends b;
    std::shared_ptr<llm::RequestBudget> budget;
    if (config.request_budget > 0)
        budget = std::make_shared<llm::RequestBudget>(config.request_budget);

    const json& lj = config.llm_backend;
    if (!lj.is_object() || !lj.contains("type"))
        throw ConfigError("llm_backend: missing \"type\"");
    try {
        const std::string type = lj.at("type").get<std::string>();
        if (type == "scripted") {
            const std::string path =
                resolve_path(base_dir, lj.at("transcript").get<std::string>());
            b.chat = std::make_shared<llm::ScriptedChatBackend>(
                llm::ScriptedChatBackend::load_jsonl(path), budget);
        } else if (type == "http") {
            llm::HttpBackendConfig hc;
            hc.base_url = lj.at("base_url").get<std::string>();
            const std::string env =
                lj.value("api_key_env", std::string("PROOFLOOP_LLM_API_KEY"));
            if (const char* v = std::getenv(env.c_str())) hc.api_key = v;
            if (!run_dir.empty()) hc.log_path = run_dir + "/llm_log.jsonl";
            hc.max_tries = lj.value("max_tries", hc.max_tries);
            hc.retry_base_ms = lj.value("retry_base_ms", hc.retry_base_ms);
            hc.timeout_s = lj.value("timeout_s", hc.timeout_s);
            b.chat = std::make_shared<llm::HttpChatBackend>(hc, budget);
        } else {
            throw ConfigError("llm_backend: unknown type: " + type);
        }

        const json& pj = config.prover_backend;
        if (!pj.is_object() || !pj.contains("type"))
            throw ConfigError("prover_backend: missing \"type\"");
        const std::string ptype = pj.at("type").get<std::string>();
        if (ptype == "scripted") {
            auto rules = std::make_shared<scripted::ScriptedProverRules>(
                scripted::ScriptedProverRules::from_file(
                    resolve_path(base_dir, pj.at("rules").get<std::string>())));
            b.prover_factory = [rules] {
                return std::make_unique<scripted::ScriptedProverClient>(*rules);
            };
        } else if (ptype == "bridge") {
            bridge::BridgeConfig bc;
            bc.host = pj.value("host", bc.host);
            bc.port = pj.at("port").get<int>();
            bc.tactic_timeout_s = pj.value("tactic_timeout_s", bc.tactic_timeout_s);
            bc.sledgehammer_timeout_s =
                pj.value("sledgehammer_timeout_s", bc.sledgehammer_timeout_s);
            b.prover_factory = [bc] { return std::make_unique<bridge::BridgeProverClient>(bc); };
        } else {
            throw ConfigError("prover_backend: unknown type: " + ptype);
        }
    } catch (const json::exception& e) {
        throw ConfigError(std::string("malformed backend descriptor: ") + e.what());
    }
    return b;
}

namespace {

struct LoadedLog {
    std::vector<AttemptRecord> records;
    bool aborted = false;
    std::string abort_reason;
};

LoadedLog load_log(const std::string& path) {
    LoadedLog out;
    std::ifstream in(path, std::ios::binary);
    if (!in) return out;  // no log yet: nothing recorded for this problem
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
        json j;
        try {
            j = json::parse(line);
        } catch (const json::exception& e) {
            throw ConfigError(path + ":" + std::to_string(lineno) + ": " + e.what());
        }
        if (j.contains("abort")) {
            out.aborted = true;
            out.abort_reason = j.at("abort").get<std::string>();
            continue;
        }
        out.records.push_back(AttemptRecord::from_json(j));
    }
    return out;
}

// Shared driver for fresh runs and resumes. `existing` is empty for a fresh
// run; log files are truncated then, appended to on resume.
SuiteReport drive_suite(const std::vector<Problem>& problems, const RunConfig& config,
                        const Backends& backends, const std::string& run_dir,
                        const std::vector<std::vector<AttemptRecord>>& existing,
                        bool append_logs) {
    fs::create_directories(fs::path(run_dir) / "logs");

    std::size_t workers = config.workers;
    if (backends.chat && backends.chat->is_scripted()) workers = 1;
    workers = std::min<std::size_t>(std::max<std::size_t>(workers, 1), problems.size());
    if (workers == 0) workers = 1;

    std::vector<ProblemResult> results(problems.size());
    std::vector<std::exception_ptr> failures(problems.size());

    auto work_one = [&](std::size_t i) {
        const Problem& problem = problems[i];
        const std::string log_path =
            (fs::path(run_dir) / "logs" / (sanitize_id(problem.id) + ".jsonl")).string();
        std::ofstream log(log_path, std::ios::binary |
                                        (append_logs ? std::ios::app : std::ios::trunc));
        if (!log) throw ConfigError("cannot open log file: " + log_path);
        RecordSink sink;
        sink.append = [&log, &log_path](const json& j) {
            log << j.dump() << "\n";
            log.flush();
            if (!log) throw ConfigError("cannot append to log file: " + log_path);
        };
        const std::vector<AttemptRecord>& prior =
            existing.empty() ? std::vector<AttemptRecord>{} : existing[i];
        results[i] = run_problem(problem, config, backends, prior, sink);
    };

    if (workers <= 1) {
        for (std::size_t i = 0; i < problems.size(); ++i) work_one(i);
    } else {
        std::atomic<std::size_t> next{0};
        std::vector<std::thread> pool;
        pool.reserve(workers);
        for (std::size_t w = 0; w < workers; ++w) {
            pool.emplace_back([&] {
                while (true) {
                    const std::size_t i = next.fetch_add(1);
                    if (i >= problems.size()) return;
                    try {
                        work_one(i);
                    } catch (...) {
                        failures[i] = std::current_exception();
                    }
                }
            });
        }
        for (auto& t : pool) t.join();
        for (auto& f : failures)
            if (f) std::rethrow_exception(f);
    }

    SuiteReport report;
    report.config_fingerprint = config.fingerprint();
    report.attempts = config.attempts;
    report.problems = std::move(results);

    write_text_file((fs::path(run_dir) / "report.json").string(),
                    report.to_json().dump(2) + "\n");
    write_text_file((fs::path(run_dir) / "curve.csv").string(), report.curve_csv());
    return report;
}

}  // namespace

SuiteReport run_suite(const std::vector<Problem>& problems, const RunConfig& config,
                      const Backends& backends, const std::string& run_dir) {
    if (problems.empty()) throw ConfigError("run_suite: empty problem list");
    fs::create_directories(fs::path(run_dir) / "logs");
    write_text_file((fs::path(run_dir) / "config.json").string(),
                    config.to_json().dump(2) + "\n");
    json manifest = json::array();
    for (const auto& p : problems) manifest.push_back(problem_to_json(p));
    write_text_file((fs::path(run_dir) / "problems.json").string(), manifest.dump(2) + "\n");
    return drive_suite(problems, config, backends, run_dir, {}, /*append_logs=*/false);
}

SuiteReport resume(const std::string& run_dir, const std::vector<Problem>& problems,
                   const RunConfig& config, const Backends& backends) {
    const std::string config_path = (fs::path(run_dir) / "config.json").string();
    RunConfig stored = RunConfig::from_file(config_path);
    if (stored.fingerprint() != config.fingerprint())
        throw ConfigMismatch("resume: config fingerprint " + config.fingerprint() +
                             " does not match the run directory's " + stored.fingerprint());

    std::vector<std::vector<AttemptRecord>> existing;
    existing.reserve(problems.size());
    std::size_t consumed_llm_calls = 0;
    for (const auto& p : problems) {
        const std::string log_path =
            (fs::path(run_dir) / "logs" / (sanitize_id(p.id) + ".jsonl")).string();
        LoadedLog loaded = load_log(log_path);
        for (const auto& r : loaded.records) {
            consumed_llm_calls += 1;  // the sketch/refine call
            if (r.round.kind == refine::RoundKind::initial &&
                config.informal_source == InformalSource::model)
                consumed_llm_calls += 1;  // the informal-proof call
        }
        existing.push_back(std::move(loaded.records));
    }

    if (backends.chat && backends.chat->is_scripted()) {
        auto scripted_chat =
            std::dynamic_pointer_cast<llm::ScriptedChatBackend>(backends.chat);
        if (scripted_chat) scripted_chat->skip(consumed_llm_calls);
    }
    return drive_suite(problems, config, backends, run_dir, existing, /*append_logs=*/true);
}

SuiteReport report_from_dir(const std::string& run_dir) {
    RunConfig config = RunConfig::from_file((fs::path(run_dir) / "config.json").string());
    json manifest;
    try {
        manifest = json::parse(read_text_file((fs::path(run_dir) / "problems.json").string()));
    } catch (const json::exception& e) {
        throw ConfigError(std::string("malformed problems.json: ") + e.what());
    }

    SuiteReport report;
    report.config_fingerprint = config.fingerprint();
    report.attempts = config.attempts;
    for (const auto& pj : manifest) {
        Problem p = problem_from_json(pj);
        const std::string log_path =
            (fs::path(run_dir) / "logs" / (sanitize_id(p.id) + ".jsonl")).string();
        LoadedLog loaded = load_log(log_path);
        ProblemResult r;
        r.id = p.id;
        r.split = p.split;
        r.attempts_recorded = loaded.records.size();
        r.aborted = loaded.aborted;
        r.abort_reason = loaded.abort_reason;
        for (const auto& rec : loaded.records) {
            if (rec.solved) {
                r.solved = true;
                r.first_solving_attempt = rec.attempt_index;
            }
        }
        report.problems.push_back(std::move(r));
    }
    return report;
}

}  // namespace proofloop::harness
