// Command-line front end.
//
//   proofloop run --problems FILE --config FILE (--out DIR | --resume DIR)
//   proofloop report DIR
//   proofloop check-proof --statement FILE --proof FILE [--tc]
//                         (--rules FILE | --bridge HOST:PORT)
//   proofloop parse FILE
//
// Exit codes: 0 on a positive outcome, 1 when the command completed but the
// result is negative (a run with aborted problems, an invalid proof, a text
// that does not parse), 2 on usage or configuration errors.

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <memory>
#include <sstream>
#include <string>

#include "CLI11.hpp"
#include "json.hpp"
#include "proofloop/bridge.hpp"
#include "proofloop/errors.hpp"
#include "proofloop/harness.hpp"
#include "proofloop/isar.hpp"
#include "proofloop/scripted_prover.hpp"
#include "proofloop/tactic_repair.hpp"

namespace fs = std::filesystem;
using nlohmann::json;
using namespace proofloop;

namespace {

std::string slurp(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ConfigError("cannot read file: " + path);
    std::ostringstream out;
    out << in.rdbuf();
    return out.str();
}

int cmd_run(const std::string& problems_path, const std::string& config_path,
            const std::string& out_dir, const std::string& resume_dir) {
    auto problems = harness::load_problems_jsonl(problems_path);
    auto config = harness::RunConfig::from_file(config_path);
    std::string base_dir = fs::path(config_path).parent_path().string();
    if (base_dir.empty()) base_dir = ".";
    const std::string run_dir = resume_dir.empty() ? out_dir : resume_dir;
    auto backends = harness::make_backends(config, base_dir, run_dir);
    harness::SuiteReport report =
        resume_dir.empty() ? harness::run_suite(problems, config, backends, run_dir)
                           : harness::resume(run_dir, problems, config, backends);

    std::size_t solved = 0, aborted = 0;
    for (const auto& p : report.problems) {
        solved += p.solved ? 1 : 0;
        aborted += p.aborted ? 1 : 0;
        std::printf("%s %s%s\n", p.solved ? "solved  " : (p.aborted ? "aborted " : "unsolved"),
                    p.id.c_str(),
                    p.aborted ? (" (" + p.abort_reason + ")").c_str() : "");
    }
    std::printf("total: %zu/%zu solved", solved, report.problems.size());
    for (const auto& [split, rate] : report.success_rate())
        std::printf("  %s %.1f%%", split.c_str(), rate * 100.0);
    std::printf("\nreport: %s\n", (fs::path(run_dir) / "report.json").string().c_str());
    return aborted == 0 ? 0 : 1;
}

int cmd_report(const std::string& run_dir) {
    harness::SuiteReport report = harness::report_from_dir(run_dir);
    std::cout << report.to_json().dump(2) << "\n";
    return 0;
}

int cmd_check_proof(const std::string& statement_path, const std::string& proof_path,
                    bool tc, const std::string& rules_path, const std::string& bridge_addr) {
    const std::string statement = slurp(statement_path);
    const std::string proof_text = isar::strip_markers(slurp(proof_path));

    json out;
    isar::ProofScript script;
    try {
        script = isar::parse_proof(proof_text);
    } catch (const ParseError& e) {
        out["verdict"] = "parse_error";
        out["error"] = e.what();
        std::cout << out.dump(2) << "\n";
        return 1;
    }

    std::unique_ptr<prover::ProverClient> client;
    if (!rules_path.empty()) {
        client = std::make_unique<scripted::ScriptedProverClient>(
            scripted::ScriptedProverRules::from_file(rules_path));
    } else {
        auto colon = bridge_addr.rfind(':');
        if (colon == std::string::npos)
            throw ConfigError("--bridge expects HOST:PORT, got: " + bridge_addr);
        bridge::BridgeConfig bc;
        bc.host = bridge_addr.substr(0, colon);
        try {
            bc.port = std::stoi(bridge_addr.substr(colon + 1));
        } catch (const std::exception&) {
            throw ConfigError("--bridge expects a numeric port, got: " + bridge_addr);
        }
        client = std::make_unique<bridge::BridgeProverClient>(bc);
    }

    auto session = prover::open_session(std::move(client), "check-proof", statement);
    repair::ProofOutcome outcome =
        repair::validate_proof(*session, script, repair::default_tool_list(), tc);
    isar::ValidityReport validity = isar::check_validity(proof_text);

    out["verdict"] = repair::verdict_name(outcome.verdict);
    out["cheating"] = validity.has_cheating;
    json subs = json::object();
    for (const auto& [idx, tool] : repair::substitutions(outcome))
        subs[std::to_string(idx)] = tool;
    out["substitutions"] = subs;
    out["failing_step"] =
        outcome.failing_step ? json(*outcome.failing_step) : json(nullptr);
    out["error"] = outcome.failing_reply.error ? json(*outcome.failing_reply.error)
                                               : json(nullptr);
    if (outcome.verdict == repair::Verdict::success)
        out["rendered"] = isar::render_with_markers(script, repair::substitutions(outcome));
    else
        out["rendered"] = nullptr;
    std::cout << out.dump(2) << "\n";
    return (outcome.verdict == repair::Verdict::success && !validity.has_cheating) ? 0 : 1;
}

int cmd_parse(const std::string& path) {
    const std::string text = slurp(path);
    json out;
    try {
        isar::ProofScript script = isar::parse_proof(text);
        out["statement"] = script.statement;
        json steps = json::array();
        for (const auto& step : script.steps) {
            steps.push_back({{"index", step.index},
                             {"kind", step.kind == isar::StepKind::terminal ? "terminal"
                                                                            : "structural"},
                             {"text", step.text}});
        }
        out["steps"] = steps;
        std::cout << out.dump(2) << "\n";
        return 0;
    } catch (const ParseError& e) {
        out["error"] = e.what();
        std::cout << out.dump(2) << "\n";
        return 1;
    }
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"proofloop: step-wise proof validation, tactic repair, and "
                 "feedback-driven proof refinement"};
    app.require_subcommand(1);

    auto* run = app.add_subcommand("run", "Run the pipeline over a problem set");
    std::string problems_path, config_path, out_dir, resume_dir;
    run->add_option("--problems", problems_path, "Problems JSONL file")
        ->required();
    run->add_option("--config", config_path, "Run configuration JSON file")->required();
    auto* out_opt = run->add_option("--out", out_dir, "Fresh run directory to create");
    auto* resume_opt =
        run->add_option("--resume", resume_dir, "Existing run directory to resume");
    out_opt->excludes(resume_opt);
    resume_opt->excludes(out_opt);

    auto* report = app.add_subcommand("report", "Re-aggregate a finished run directory");
    std::string report_dir;
    report->add_option("dir", report_dir, "Run directory")->required();

    auto* check = app.add_subcommand("check-proof",
                                     "Validate one proof text against a prover");
    std::string statement_path, proof_path, rules_path, bridge_addr;
    bool tc = false;
    check->add_option("--statement", statement_path, "Formal statement file")->required();
    check->add_option("--proof", proof_path, "Proof text file")->required();
    check->add_flag("--tc", tc, "Substitute tools for failing terminal tactics");
    auto* rules_opt =
        check->add_option("--rules", rules_path, "Scripted prover rules JSON file");
    auto* bridge_opt =
        check->add_option("--bridge", bridge_addr, "Prover bridge endpoint HOST:PORT");
    rules_opt->excludes(bridge_opt);
    bridge_opt->excludes(rules_opt);

    auto* parse = app.add_subcommand("parse", "Parse a proof text and list its steps");
    std::string parse_path;
    parse->add_option("file", parse_path, "Proof text file")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    try {
        if (app.got_subcommand(run)) {
            if (out_dir.empty() == resume_dir.empty()) {
                std::fprintf(stderr, "run: exactly one of --out or --resume is required\n");
                return 2;
            }
            return cmd_run(problems_path, config_path, out_dir, resume_dir);
        }
        if (app.got_subcommand(report)) return cmd_report(report_dir);
        if (app.got_subcommand(check)) {
            if (rules_path.empty() == bridge_addr.empty()) {
                std::fprintf(stderr,
                             "check-proof: exactly one of --rules or --bridge is required\n");
                return 2;
            }
            return cmd_check_proof(statement_path, proof_path, tc, rules_path, bridge_addr);
        }
        if (app.got_subcommand(parse)) return cmd_parse(parse_path);
    } catch (const Error& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 2;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 2;
    }
    return 2;
}
