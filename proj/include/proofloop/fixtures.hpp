#pragma once

#include <string>
#include <vector>

#include "json.hpp"
#include "proofloop/harness.hpp"
#include "proofloop/llm.hpp"
#include "proofloop/scripted_prover.hpp"

// Packaged end-to-end scenarios. A fixture directory holds one problem, a
// scripted prover rule table, a recorded LLM transcript, and the expected
// outcome of running the full pipeline over them:
//
//   fixtures/<name>/problem.json      one problem record
//   fixtures/<name>/rules.json        scripted prover rules
//   fixtures/<name>/transcript.jsonl  recorded chat completions, in order
//   fixtures/<name>/expected.json     run settings + expected results
//
// Fixtures re-enact documented repair and refinement traces; the tests replay
// them through the real pipeline and compare against expected.json.
namespace proofloop::fixtures {

struct Fixture {
    std::string name;
    std::string dir;
    harness::Problem problem;
    scripted::ScriptedProverRules rules;
    std::vector<llm::TranscriptEntry> transcript;
    // Run settings from expected.json's "config" block, with the backend
    // descriptors pointed at this fixture's files, so
    // harness::make_backends(config, "", ...) is all a caller needs.
    harness::RunConfig config;
    nlohmann::json expected;
};

// $PROOFLOOP_FIXTURES_DIR when set, otherwise "fixtures" relative to the
// working directory.
std::string default_fixtures_root();

// Names of the fixture directories under root (those with a problem.json),
// sorted. An empty root means default_fixtures_root().
std::vector<std::string> list_fixtures(const std::string& root = "");

// Loads one fixture. Throws UnknownFixture when the directory or its
// problem.json is missing, ConfigError when any file is malformed.
Fixture load_fixture(const std::string& name, const std::string& root = "");

}  // namespace proofloop::fixtures
