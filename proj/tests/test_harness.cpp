#include <filesystem>
#include <fstream>
#include <memory>
#include <string>
#include <vector>

#include "doctest.h"
#include "json.hpp"
#include "proofloop/errors.hpp"
#include "proofloop/harness.hpp"
#include "proofloop/isar.hpp"
#include "proofloop/llm.hpp"
#include "proofloop/refinement.hpp"
#include "proofloop/scripted_prover.hpp"
#include "test_util.hpp"

namespace fs = std::filesystem;
using namespace proofloop;
using nlohmann::json;
using scripted::ScriptedProverRules;

namespace {

harness::Problem demo_problem(std::string id = "t1") {
    harness::Problem p;
    p.id = std::move(id);
    p.split = harness::Split::valid;
    p.formal_statement = "lemma " + p.id + ": shows \"P\"";
    p.informal_statement = "IS " + p.id;
    p.human_informal_proof = "HIP " + p.id;
    return p;
}

harness::RunConfig small_config() {
    harness::RunConfig c;
    c.attempts = 3;
    c.k = 3;
    c.tools = {"by auto"};
    c.workers = 1;
    return c;
}

// Every scenario shares one prover vocabulary: tactics containing "bad" fail
// with a fixed error, "by auto" (the only substitution tool) also fails, and
// tactics containing "good" empty the goal state.
ScriptedProverRules demo_prover() {
    ScriptedProverRules rules;
    rules.default_reply = {std::nullopt, "open"};
    rules.rules.push_back({"", "bad", {std::string("step did not finish"), ""}});
    rules.rules.push_back({"", "^by auto$", {std::string("auto missed"), ""}});
    rules.rules.push_back({"", "good", {std::nullopt, "no goals"}});
    return rules;
}

harness::Backends backends_with(std::shared_ptr<llm::ChatBackend> chat,
                                ScriptedProverRules rules = demo_prover()) {
    harness::Backends b;
    b.chat = std::move(chat);
    b.prover_factory = [rules] {
        return std::make_unique<scripted::ScriptedProverClient>(rules);
    };
    return b;
}

struct Collected {
    std::vector<harness::AttemptRecord> records;
    std::vector<json> aborts;
};

harness::RecordSink sink_into(Collected& c) {
    harness::RecordSink sink;
    sink.append = [&c](const json& j) {
        if (j.contains("abort"))
            c.aborts.push_back(j);
        else
            c.records.push_back(harness::AttemptRecord::from_json(j));
    };
    return sink;
}

llm::TranscriptEntry entry(const refine::Transcript& t, const llm::CompletionParams& p,
                           std::string response) {
    return {llm::fingerprint(t, p), std::move(response)};
}

std::string bad_proof(const harness::Problem& p, const std::string& tag = "bad") {
    return p.formal_statement + "\nproof -\n  show ?thesis by " + tag + "\nqed";
}

std::string good_proof(const harness::Problem& p) {
    return p.formal_statement + "\nproof -\n  show ?thesis by good\nqed";
}

const char* kBadError = "step did not finish";

refine::ErrorFeedback fb(std::string text) {
    refine::ErrorFeedback f;
    f.text = std::move(text);
    return f;
}

}  // namespace

TEST_CASE("harness: prompt assembly is pinned") {
    harness::Problem p;
    p.informal_statement = "IS";
    p.formal_statement = "FS";
    CHECK(harness::informal_prompt(p) == "Informal statement:\nIS\n\nInformal proof:");
    CHECK(harness::sketch_prompt(p, "IP") ==
          "Informal statement:\nIS\n\nInformal proof:\nIP\n\nFormal statement:\nFS\n\n"
          "Formal proof:");
    CHECK(std::string(harness::cheating_sentence()) ==
          "The proof relies on sorry or oops, which is not allowed.");
}

TEST_CASE("harness: problems load from JSONL and round-trip") {
    std::string dir = testutil::temp_dir("problems");
    {
        std::ofstream out(dir + "/problems.jsonl");
        out << harness::problem_to_json(demo_problem("a")).dump() << "\n";
        out << "\n";  // blank lines are skipped
        harness::Problem no_human = demo_problem("b");
        no_human.human_informal_proof.reset();
        no_human.split = harness::Split::test;
        out << harness::problem_to_json(no_human).dump() << "\n";
    }
    auto problems = harness::load_problems_jsonl(dir + "/problems.jsonl");
    REQUIRE(problems.size() == 2);
    CHECK(problems[0].id == "a");
    CHECK(problems[0].human_informal_proof == "HIP a");
    CHECK(problems[1].split == harness::Split::test);
    CHECK_FALSE(problems[1].human_informal_proof.has_value());

    CHECK_THROWS_AS(harness::load_problems_jsonl(dir + "/missing.jsonl"), ConfigError);
    {
        std::ofstream out(dir + "/broken.jsonl");
        out << "{\"id\": \"x\"}\n";  // missing required fields
    }
    CHECK_THROWS_AS(harness::load_problems_jsonl(dir + "/broken.jsonl"), ConfigError);
    fs::remove_all(dir);
}

TEST_CASE("harness: run config defaults, validation, and round-trip") {
    auto c = harness::RunConfig::from_json(json::object());
    CHECK(c.attempts == 200);
    CHECK(c.k == 5);
    CHECK(c.tc_enabled);
    CHECK(c.cc_enabled);
    CHECK(c.informal_source == harness::InformalSource::human);
    CHECK(c.tools == repair::default_tool_list());
    CHECK(c.feedback_cap == refine::kDefaultFeedbackCap);
    CHECK(c.workers == 4);

    auto back = harness::RunConfig::from_json(c.to_json());
    CHECK(back.to_json() == c.to_json());

    CHECK_THROWS_AS(harness::RunConfig::from_json({{"k", 0}}), InvalidK);
    CHECK_THROWS_AS(harness::RunConfig::from_json({{"attempts", 0}}), ConfigError);
    CHECK_THROWS_AS(harness::RunConfig::from_json({{"tools", json::array()}}), ConfigError);
    CHECK_THROWS_AS(harness::RunConfig::from_json({{"workers", 0}}), ConfigError);
    CHECK_THROWS_AS(harness::RunConfig::from_json({{"informal_source", "alien"}}),
                    ConfigError);
}

TEST_CASE("harness: the config fingerprint covers semantics, not operations") {
    harness::RunConfig base;
    const std::string fp = base.fingerprint();

    harness::RunConfig ops = base;
    ops.workers = 99;
    ops.backend_error_threshold = 7;
    ops.request_budget = 123;
    ops.prover_backend = {{"type", "bridge"}, {"port", 1}};
    ops.llm_backend = {{"type", "http"}, {"base_url", "http://x"}};
    CHECK(ops.fingerprint() == fp);

    auto differs = [&fp](harness::RunConfig changed) {
        CHECK(changed.fingerprint() != fp);
    };
    harness::RunConfig c = base;
    c.attempts = 7;
    differs(c);
    c = base;
    c.k = 2;
    differs(c);
    c = base;
    c.tc_enabled = false;
    differs(c);
    c = base;
    c.cc_enabled = false;
    differs(c);
    c = base;
    c.informal_source = harness::InformalSource::model;
    differs(c);
    c = base;
    c.tools.pop_back();
    differs(c);
    c = base;
    c.completion.temperature = 0.0;
    differs(c);
    c = base;
    c.completion.model_name = "other";
    differs(c);
    c = base;
    c.completion.seed_hint = 1;
    differs(c);
    c = base;
    c.feedback_cap = 10;
    differs(c);
    c = base;
    c.skip_duplicate_tool = false;
    differs(c);
}

TEST_CASE("harness: sanitize_id maps ids onto safe file names") {
    CHECK(harness::sanitize_id("imo_1974_p5") == "imo_1974_p5");
    CHECK(harness::sanitize_id("a/b c:d") == "a_b_c_d");
    CHECK(harness::sanitize_id("") == "_");
}

TEST_CASE("harness: a failing round feeds its error into the next round's transcript") {
    auto p = demo_problem();
    auto config = small_config();
    const std::string prompt = harness::sketch_prompt(p, *p.human_informal_proof);
    const std::string proof0 = bad_proof(p);
    const std::string proof1 = good_proof(p);

    std::vector<llm::TranscriptEntry> entries = {
        entry(refine::build_initial_transcript(prompt), config.completion, proof0),
        entry(refine::build_refine_transcript(prompt, proof0,
                                              fb(std::string("by bad\n") + kBadError)),
              config.completion, proof1)};
    auto chat = std::make_shared<llm::ScriptedChatBackend>(entries);

    Collected c;
    auto result =
        harness::run_problem(p, config, backends_with(chat), {}, sink_into(c));

    CHECK(result.solved);
    REQUIRE(result.first_solving_attempt.has_value());
    CHECK(*result.first_solving_attempt == 1);
    CHECK(result.attempts_recorded == 2);
    CHECK(c.aborts.empty());
    REQUIRE(c.records.size() == 2);

    const auto& r0 = c.records[0];
    CHECK(r0.round.kind == refine::RoundKind::initial);
    CHECK(r0.verdict == repair::Verdict::tactic_failed);
    CHECK_FALSE(r0.solved);
    CHECK_FALSE(r0.validated_proof.has_value());
    CHECK(r0.substitutions.empty());
    REQUIRE(r0.feedback_sent.has_value());
    CHECK(r0.feedback_sent->text == std::string("by bad\n") + kBadError);
    CHECK(r0.feedback_sent->source_step_index == 2);
    CHECK(r0.informal_proof == "HIP t1");

    const auto& r1 = c.records[1];
    CHECK(r1.round.kind == refine::RoundKind::refine);
    CHECK(r1.round.patch_index == 0);
    CHECK(r1.round.position_in_patch == 1);
    CHECK(r1.solved);
    CHECK(r1.validated_proof == proof1);  // nothing repaired: rendered verbatim
    // The scripted transcript itself proves the refine request embedded the
    // previous response and error byte-exactly; both entries were consumed.
    CHECK(chat->cursor() == 2);
}

TEST_CASE("harness: the model informal source asks the model once per patch") {
    auto p = demo_problem();
    p.human_informal_proof.reset();
    auto config = small_config();
    config.informal_source = harness::InformalSource::model;
    config.attempts = 1;

    std::vector<llm::TranscriptEntry> entries = {
        entry(refine::build_initial_transcript(harness::informal_prompt(p)),
              config.completion, "GENIP"),
        entry(refine::build_initial_transcript(harness::sketch_prompt(p, "GENIP")),
              config.completion, good_proof(p))};
    auto chat = std::make_shared<llm::ScriptedChatBackend>(entries);

    Collected c;
    auto result =
        harness::run_problem(p, config, backends_with(chat), {}, sink_into(c));
    CHECK(result.solved);
    REQUIRE(c.records.size() == 1);
    CHECK(c.records[0].informal_proof == "GENIP");
    CHECK(chat->cursor() == 2);
}

TEST_CASE("harness: the human informal source aborts when no human proof exists") {
    auto p = demo_problem();
    p.human_informal_proof.reset();
    Collected c;
    auto result = harness::run_problem(p, small_config(),
                                       backends_with(std::make_shared<llm::ScriptedChatBackend>(
                                           std::vector<llm::TranscriptEntry>{})),
                                       {}, sink_into(c));
    CHECK(result.aborted);
    CHECK(result.abort_reason == "missing human informal proof");
    CHECK(c.records.empty());
    REQUIRE(c.aborts.size() == 1);
    CHECK(c.aborts[0].at("abort") == "missing human informal proof");
    CHECK(c.aborts[0].at("problem_id") == "t1");
}

TEST_CASE("harness: proofs that lean on sorry validate but never count as solved") {
    auto p = demo_problem();
    auto config = small_config();
    const std::string prompt = harness::sketch_prompt(p, *p.human_informal_proof);
    const std::string cheat =
        p.formal_statement + "\nproof -\n  show ?thesis sorry by good\nqed";
    const std::string honest = good_proof(p);

    std::vector<llm::TranscriptEntry> entries = {
        entry(refine::build_initial_transcript(prompt), config.completion, cheat),
        entry(refine::build_refine_transcript(
                  prompt, cheat, fb(std::string(harness::cheating_sentence()))),
              config.completion, honest)};
    auto chat = std::make_shared<llm::ScriptedChatBackend>(entries);

    Collected c;
    auto result =
        harness::run_problem(p, config, backends_with(chat), {}, sink_into(c));
    CHECK(result.solved);
    CHECK(*result.first_solving_attempt == 1);
    REQUIRE(c.records.size() == 2);

    const auto& r0 = c.records[0];
    CHECK(r0.verdict == repair::Verdict::success);  // the prover accepted it
    CHECK_FALSE(r0.solved);                         // but the gate rejected it
    CHECK(r0.validity.has_cheating);
    CHECK(r0.validated_proof.has_value());
    REQUIRE(r0.feedback_sent.has_value());
    CHECK(r0.feedback_sent->text == std::string(harness::cheating_sentence()));
}

TEST_CASE("harness: responses that do not parse fail the round with parser feedback") {
    auto p = demo_problem();
    auto config = small_config();
    config.attempts = 1;
    const std::string prompt = harness::sketch_prompt(p, *p.human_informal_proof);
    std::vector<llm::TranscriptEntry> entries = {
        entry(refine::build_initial_transcript(prompt), config.completion,
              "I am prose, not a proof.")};
    auto chat = std::make_shared<llm::ScriptedChatBackend>(entries);

    Collected c;
    auto result =
        harness::run_problem(p, config, backends_with(chat), {}, sink_into(c));
    CHECK_FALSE(result.solved);
    REQUIRE(c.records.size() == 1);
    const auto& r0 = c.records[0];
    CHECK(r0.verdict == repair::Verdict::tactic_failed);
    REQUIRE(r0.parse_error.has_value());
    CHECK(r0.parse_error->find("parse_proof") != std::string::npos);
    REQUIRE(r0.feedback_sent.has_value());
    CHECK(r0.feedback_sent->text == *r0.parse_error);
    CHECK_FALSE(r0.validated_proof.has_value());
}

namespace {

class FlakyChat : public llm::ChatBackend {
  public:
    FlakyChat(std::shared_ptr<llm::ChatBackend> inner, int failures)
        : inner_(std::move(inner)), remaining_(failures) {}
    std::string complete(const refine::Transcript& messages,
                         const llm::CompletionParams& params) override {
        ++calls_;
        if (remaining_ > 0) {
            --remaining_;
            throw BackendError("flaky transport");
        }
        return inner_->complete(messages, params);
    }
    int calls() const { return calls_; }

  private:
    std::shared_ptr<llm::ChatBackend> inner_;
    int remaining_;
    int calls_ = 0;
};

}  // namespace

TEST_CASE("harness: transient backend errors retry the same attempt") {
    auto p = demo_problem();
    auto config = small_config();
    config.attempts = 1;
    config.backend_error_threshold = 3;
    const std::string prompt = harness::sketch_prompt(p, *p.human_informal_proof);
    auto scripted_chat = std::make_shared<llm::ScriptedChatBackend>(
        std::vector<llm::TranscriptEntry>{entry(refine::build_initial_transcript(prompt),
                                                config.completion, good_proof(p))});
    auto chat = std::make_shared<FlakyChat>(scripted_chat, 2);

    Collected c;
    auto result =
        harness::run_problem(p, config, backends_with(chat), {}, sink_into(c));
    CHECK(result.solved);
    CHECK_FALSE(result.aborted);
    CHECK(chat->calls() == 3);  // two failures, then the recorded answer
    CHECK(c.records.size() == 1);
}

TEST_CASE("harness: persistent backend errors abort the problem at the threshold") {
    auto p = demo_problem();
    auto config = small_config();
    config.backend_error_threshold = 2;
    auto chat = std::make_shared<FlakyChat>(nullptr, 1000);

    Collected c;
    auto result =
        harness::run_problem(p, config, backends_with(chat), {}, sink_into(c));
    CHECK(result.aborted);
    CHECK(result.abort_reason.rfind("backend error:", 0) == 0);
    CHECK(chat->calls() == 2);
    CHECK(c.records.empty());
    CHECK(c.aborts.size() == 1);
}

TEST_CASE("harness: an exhausted request budget aborts instead of retrying") {
    auto p = demo_problem();
    auto config = small_config();
    config.attempts = 2;
    const std::string prompt = harness::sketch_prompt(p, *p.human_informal_proof);
    const std::string proof0 = bad_proof(p);
    auto budget = std::make_shared<llm::RequestBudget>(1);
    std::vector<llm::TranscriptEntry> entries = {
        entry(refine::build_initial_transcript(prompt), config.completion, proof0),
        entry(refine::build_refine_transcript(prompt, proof0,
                                              fb(std::string("by bad\n") + kBadError)),
              config.completion, good_proof(p))};
    auto chat = std::make_shared<llm::ScriptedChatBackend>(entries, budget);

    Collected c;
    auto result =
        harness::run_problem(p, config, backends_with(chat), {}, sink_into(c));
    CHECK(result.aborted);
    CHECK(result.abort_reason.rfind("request budget exceeded:", 0) == 0);
    CHECK(result.attempts_recorded == 1);  // the first round completed and was kept
    CHECK(c.records.size() == 1);
}

TEST_CASE("harness: a rejected statement aborts the problem") {
    auto p = demo_problem();
    auto config = small_config();
    const std::string prompt = harness::sketch_prompt(p, *p.human_informal_proof);
    auto chat = std::make_shared<llm::ScriptedChatBackend>(
        std::vector<llm::TranscriptEntry>{entry(refine::build_initial_transcript(prompt),
                                                config.completion, good_proof(p))});
    auto rules = demo_prover();
    rules.reject_statement_contains.push_back("shows");

    Collected c;
    auto result =
        harness::run_problem(p, config, backends_with(chat, rules), {}, sink_into(c));
    CHECK(result.aborted);
    CHECK(result.abort_reason.rfind("prover rejected statement:", 0) == 0);
    CHECK(c.records.empty());
}

TEST_CASE("harness: suites are deterministic, resumable, and re-aggregatable") {
    auto p1 = demo_problem("p1");
    auto p2 = demo_problem("p2");
    p2.split = harness::Split::test;
    std::vector<harness::Problem> problems = {p1, p2};

    harness::RunConfig config;
    config.attempts = 2;
    config.k = 2;
    config.tools = {"by auto"};
    config.workers = 3;  // forced down to 1 by the scripted chat backend

    const std::string prompt1 = harness::sketch_prompt(p1, *p1.human_informal_proof);
    const std::string prompt2 = harness::sketch_prompt(p2, *p2.human_informal_proof);
    const std::string p2_bad0 = bad_proof(p2);
    const std::string p2_bad1 = bad_proof(p2, "badx");
    auto entries = [&] {
        return std::vector<llm::TranscriptEntry>{
            entry(refine::build_initial_transcript(prompt1), config.completion,
                  good_proof(p1)),
            entry(refine::build_initial_transcript(prompt2), config.completion, p2_bad0),
            entry(refine::build_refine_transcript(prompt2, p2_bad0,
                                                  fb(std::string("by bad\n") + kBadError)),
                  config.completion, p2_bad1)};
    };

    std::string dir_a = testutil::temp_dir("suite_a");
    auto report_a = harness::run_suite(
        problems, config,
        backends_with(std::make_shared<llm::ScriptedChatBackend>(entries())), dir_a);

    CHECK(report_a.problems.size() == 2);
    CHECK(report_a.problems[0].solved);
    CHECK_FALSE(report_a.problems[1].solved);
    CHECK(report_a.success_rate().at("valid") == doctest::Approx(1.0));
    CHECK(report_a.success_rate().at("test") == doctest::Approx(0.0));
    CHECK(report_a.curve_csv() == "n,solved\n1,1\n2,1\n");

    SUBCASE("an identical second run produces byte-identical artifacts") {
        std::string dir_b = testutil::temp_dir("suite_b");
        harness::run_suite(
            problems, config,
            backends_with(std::make_shared<llm::ScriptedChatBackend>(entries())), dir_b);
        CHECK(testutil::slurp(dir_a + "/report.json") ==
              testutil::slurp(dir_b + "/report.json"));
        CHECK(testutil::slurp(dir_a + "/curve.csv") == testutil::slurp(dir_b + "/curve.csv"));
        fs::remove_all(dir_b);
    }

    SUBCASE("resuming a finished run changes nothing and asks nothing") {
        auto chat = std::make_shared<llm::ScriptedChatBackend>(entries());
        auto report_r = harness::resume(dir_a, problems, config, backends_with(chat));
        CHECK(report_r.to_json() == report_a.to_json());
        CHECK(chat->cursor() == 3);  // everything skipped, nothing re-requested
    }

    SUBCASE("resuming a truncated run completes it to the same artifacts") {
        const std::string full_report = testutil::slurp(dir_a + "/report.json");
        const std::string log_path = dir_a + "/logs/p2.jsonl";
        std::string log = testutil::slurp(log_path);
        std::string first_line = log.substr(0, log.find('\n') + 1);
        std::ofstream(log_path, std::ios::binary | std::ios::trunc) << first_line;

        auto report_r = harness::resume(
            dir_a, problems, config,
            backends_with(std::make_shared<llm::ScriptedChatBackend>(entries())));
        CHECK(report_r.to_json() == report_a.to_json());
        CHECK(testutil::slurp(dir_a + "/report.json") == full_report);
        // The rewritten log matches what the original run recorded.
        CHECK(testutil::slurp(log_path).substr(0, first_line.size()) == first_line);
    }

    SUBCASE("a semantically different config refuses to resume") {
        harness::RunConfig changed = config;
        changed.k = 1;
        CHECK_THROWS_AS(
            harness::resume(dir_a, problems, changed,
                            backends_with(std::make_shared<llm::ScriptedChatBackend>(
                                entries()))),
            ConfigMismatch);
    }

    SUBCASE("operational knobs may differ between run and resume") {
        harness::RunConfig ops = config;
        ops.workers = 1;
        ops.backend_error_threshold = 9;
        auto report_r = harness::resume(
            dir_a, problems, ops,
            backends_with(std::make_shared<llm::ScriptedChatBackend>(entries())));
        CHECK(report_r.to_json() == report_a.to_json());
    }

    SUBCASE("report_from_dir rebuilds the report without any backend") {
        auto rebuilt = harness::report_from_dir(dir_a);
        CHECK(rebuilt.to_json() == report_a.to_json());
    }

    fs::remove_all(dir_a);
}

TEST_CASE("harness: aborted problems are visible in suite artifacts") {
    auto p = demo_problem("nohuman");
    p.human_informal_proof.reset();
    harness::RunConfig config;
    config.attempts = 1;
    config.tools = {"by auto"};
    std::string dir = testutil::temp_dir("suite_abort");
    auto report = harness::run_suite(
        {p}, config,
        backends_with(std::make_shared<llm::ScriptedChatBackend>(
            std::vector<llm::TranscriptEntry>{})),
        dir);
    REQUIRE(report.problems.size() == 1);
    CHECK(report.problems[0].aborted);
    CHECK(report.problems[0].abort_reason == "missing human informal proof");
    CHECK(testutil::slurp(dir + "/logs/nohuman.jsonl").find("\"abort\"") !=
          std::string::npos);
    auto rebuilt = harness::report_from_dir(dir);
    CHECK(rebuilt.problems[0].aborted);
    CHECK(rebuilt.problems[0].abort_reason == "missing human informal proof");
    fs::remove_all(dir);
}

namespace {

// Thread-safe stand-in for a live chat service: answers every request with a
// solving proof for the problem named in the prompt.
class EchoChat : public llm::ChatBackend {
  public:
    explicit EchoChat(std::vector<harness::Problem> problems)
        : problems_(std::move(problems)) {}
    std::string complete(const refine::Transcript& messages,
                         const llm::CompletionParams&) override {
        for (const auto& p : problems_)
            if (messages.back().content.find(p.formal_statement) != std::string::npos)
                return good_proof(p);
        throw BackendError("unknown problem in prompt");
    }

  private:
    std::vector<harness::Problem> problems_;
};

}  // namespace

TEST_CASE("harness: the worker pool runs non-scripted suites in parallel") {
    std::vector<harness::Problem> problems;
    for (int i = 0; i < 8; ++i) problems.push_back(demo_problem("par" + std::to_string(i)));
    harness::RunConfig config;
    config.attempts = 1;
    config.tools = {"by auto"};
    config.workers = 4;

    std::string dir = testutil::temp_dir("suite_par");
    auto report = harness::run_suite(problems, config,
                                     backends_with(std::make_shared<EchoChat>(problems)),
                                     dir);
    REQUIRE(report.problems.size() == 8);
    for (const auto& p : report.problems) CHECK(p.solved);
    for (const auto& p : problems)
        CHECK(fs::exists(dir + "/logs/" + harness::sanitize_id(p.id) + ".jsonl"));
    fs::remove_all(dir);
}

TEST_CASE("harness: make_backends builds scripted backends from descriptors") {
    std::string dir = testutil::temp_dir("mkback");
    {
        std::ofstream(dir + "/rules.json") << demo_prover().to_json_text();
        std::ofstream out(dir + "/transcript.jsonl");
        json line = {{"fingerprint", "abcd"}, {"response", "hello"}};
        out << line.dump() << "\n";
    }
    harness::RunConfig config;
    config.prover_backend = {{"type", "scripted"}, {"rules", "rules.json"}};
    config.llm_backend = {{"type", "scripted"}, {"transcript", "transcript.jsonl"}};

    auto b = harness::make_backends(config, dir, "");
    REQUIRE(b.chat != nullptr);
    CHECK(b.chat->is_scripted());
    auto client = b.prover_factory();
    CHECK(client->init("lemma x: shows \"Q\"").ok());
    CHECK(client->run_tac("by good").tactic_state == "no goals");

    config.prover_backend = {{"type", "mystery"}};
    CHECK_THROWS_AS(harness::make_backends(config, dir, ""), ConfigError);
    config.prover_backend = {{"type", "scripted"}, {"rules", "rules.json"}};
    config.llm_backend = {{"type", "http"}};  // missing base_url
    CHECK_THROWS_AS(harness::make_backends(config, dir, ""), ConfigError);
    fs::remove_all(dir);
}

TEST_CASE("harness: attempt records serialize losslessly") {
    harness::AttemptRecord r;
    r.problem_id = "rt";
    r.attempt_index = 6;
    r.round = refine::plan_round(6, 5);
    r.informal_proof = "ip";
    r.raw_formal_proof = "raw";
    r.validated_proof = "validated";
    r.verdict = repair::Verdict::success;
    r.validity.has_cheating = true;
    r.validity.hits.push_back({"sorry", 17});
    r.substitutions[3] = "by fastforce";
    r.feedback_sent = fb("some feedback");
    r.feedback_sent->truncated = true;
    r.feedback_sent->source_step_index = 3;
    r.solved = false;
    r.timing = {1, 2, 3, 4};

    auto back = harness::AttemptRecord::from_json(r.to_json());
    CHECK(back.to_json() == r.to_json());
    CHECK(back.round.kind == refine::RoundKind::refine);
    CHECK(back.substitutions.at(3) == "by fastforce");
    CHECK(back.timing.prover_ms == 3);
}
