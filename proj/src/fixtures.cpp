#include "proofloop/fixtures.hpp"

#include <algorithm>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "proofloop/errors.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace proofloop::fixtures {

namespace {

std::string read_text_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ConfigError("cannot read file: " + path);
    std::ostringstream out;
    out << in.rdbuf();
    return out.str();
}

json parse_file(const std::string& path) {
    try {
        return json::parse(read_text_file(path));
    } catch (const json::exception& e) {
        throw ConfigError(path + ": " + e.what());
    }
}

}  // namespace

std::string default_fixtures_root() {
    if (const char* env = std::getenv("PROOFLOOP_FIXTURES_DIR"); env && *env) return env;
    return "fixtures";
}

std::vector<std::string> list_fixtures(const std::string& root) {
    const std::string base = root.empty() ? default_fixtures_root() : root;
    std::vector<std::string> names;
    std::error_code ec;
    for (const auto& entry : fs::directory_iterator(base, ec)) {
        if (!entry.is_directory()) continue;
        if (fs::exists(entry.path() / "problem.json"))
            names.push_back(entry.path().filename().string());
    }
    std::sort(names.begin(), names.end());
    return names;
}

Fixture load_fixture(const std::string& name, const std::string& root) {
    const std::string base = root.empty() ? default_fixtures_root() : root;
    const fs::path dir = fs::path(base) / name;
    if (!fs::exists(dir / "problem.json"))
        throw UnknownFixture("unknown fixture: " + name + " (looked in " + dir.string() + ")");

    Fixture f;
    f.name = name;
    f.dir = dir.string();
    f.problem = harness::problem_from_json(parse_file((dir / "problem.json").string()));
    f.rules = scripted::ScriptedProverRules::from_file((dir / "rules.json").string());
    f.transcript = llm::ScriptedChatBackend::load_jsonl((dir / "transcript.jsonl").string());
    f.expected = parse_file((dir / "expected.json").string());

    json config_json =
        f.expected.contains("config") ? f.expected.at("config") : json::object();
    f.config = harness::RunConfig::from_json(config_json);
    f.config.prover_backend = {{"type", "scripted"}, {"rules", (dir / "rules.json").string()}};
    f.config.llm_backend = {{"type", "scripted"},
                            {"transcript", (dir / "transcript.jsonl").string()}};
    return f;
}

}  // namespace proofloop::fixtures
