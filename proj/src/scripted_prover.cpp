#include "proofloop/scripted_prover.hpp"

#include <fstream>
#include <sstream>

#include "json.hpp"
#include "proofloop/errors.hpp"
#include "proofloop/isar.hpp"

namespace proofloop::scripted {

using nlohmann::json;

namespace {

prover::ProverReply reply_from_json(const json& j, const char* where) {
    if (!j.is_object() || !j.contains("tactic_state"))
        throw ConfigError(std::string("scripted rules: bad reply object in ") + where);
    prover::ProverReply r;
    if (j.contains("error") && !j["error"].is_null()) r.error = j["error"].get<std::string>();
    r.tactic_state = j["tactic_state"].get<std::string>();
    return r;
}

json reply_to_json(const prover::ProverReply& r) {
    json j;
    j["error"] = r.error ? json(*r.error) : json(nullptr);
    j["tactic_state"] = r.tactic_state;
    return j;
}

}  // namespace

ScriptedProverRules ScriptedProverRules::from_json_text(const std::string& json_text) {
    json j;
    try {
        j = json::parse(json_text);
    } catch (const json::exception& e) {
        throw ConfigError(std::string("scripted rules: invalid JSON: ") + e.what());
    }
    if (!j.is_object() || !j.contains("rules") || !j["rules"].is_array())
        throw ConfigError("scripted rules: expected object with a \"rules\" array");
    ScriptedProverRules out;
    for (const auto& rj : j["rules"]) {
        ScriptedRule rule;
        rule.state_contains = rj.value("state_contains", std::string{});
        rule.tactic_regex = rj.value("tactic_regex", std::string{});
        if (!rj.contains("reply")) throw ConfigError("scripted rules: rule without reply");
        rule.reply = reply_from_json(rj["reply"], "rule");
        try {
            std::regex probe(rule.tactic_regex);  // validate eagerly
        } catch (const std::regex_error& e) {
            throw ConfigError("scripted rules: bad tactic_regex \"" + rule.tactic_regex +
                              "\": " + e.what());
        }
        out.rules.push_back(std::move(rule));
    }
    if (j.contains("default"))
        out.default_reply = reply_from_json(j["default"], "default");
    else
        out.default_reply = {std::string("scripted prover: unmatched submission"), ""};
    out.initial_state = j.value("initial_state", std::string{});
    if (j.contains("reject_statement_contains"))
        for (const auto& s : j["reject_statement_contains"])
            out.reject_statement_contains.push_back(s.get<std::string>());
    out.notes = j.value("notes", std::string{});
    return out;
}

ScriptedProverRules ScriptedProverRules::from_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ConfigError("scripted rules: cannot open " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    return from_json_text(buf.str());
}

std::string ScriptedProverRules::to_json_text() const {
    json j;
    j["rules"] = json::array();
    for (const auto& rule : rules) {
        json rj;
        rj["state_contains"] = rule.state_contains;
        rj["tactic_regex"] = rule.tactic_regex;
        rj["reply"] = reply_to_json(rule.reply);
        j["rules"].push_back(rj);
    }
    j["default"] = reply_to_json(default_reply);
    if (!initial_state.empty()) j["initial_state"] = initial_state;
    if (!reject_statement_contains.empty())
        j["reject_statement_contains"] = reject_statement_contains;
    if (!notes.empty()) j["notes"] = notes;
    return j.dump(2) + "\n";
}

const prover::ProverReply& ScriptedProverRules::evaluate(const std::string& state,
                                                         const std::string& tactic) const {
    std::string norm = isar::normalize_tactic(tactic);
    for (const auto& rule : rules) {
        if (!rule.state_contains.empty() &&
            state.find(rule.state_contains) == std::string::npos)
            continue;
        if (!rule.tactic_regex.empty()) {
            std::regex re(rule.tactic_regex);
            if (!std::regex_search(norm, re)) continue;
        }
        return rule.reply;
    }
    return default_reply;
}

ScriptedProverClient::ScriptedProverClient(ScriptedProverRules rules)
    : rules_(std::move(rules)) {}

prover::ProverReply ScriptedProverClient::init(const std::string& statement) {
    for (const auto& needle : rules_.reject_statement_contains) {
        if (statement.find(needle) != std::string::npos)
            return {std::string("statement rejected by scripted rules (matched \"") + needle +
                        "\")",
                    ""};
    }
    state_ = rules_.initial_state.empty() ? statement : rules_.initial_state;
    return {std::nullopt, state_};
}

prover::ProverReply ScriptedProverClient::run_tac(const std::string& tactic) {
    if (closed_) return {std::string("scripted prover: connection closed"), ""};
    prover::ProverReply reply = rules_.evaluate(state_, tactic);
    if (reply.ok()) state_ = reply.tactic_state;
    return reply;
}

void ScriptedProverClient::close() { closed_ = true; }

std::string regex_escape(const std::string& literal) {
    static const std::string specials = R"(\^$.|?*+()[]{})";
    std::string out;
    out.reserve(literal.size() * 2);
    for (char c : literal) {
        if (specials.find(c) != std::string::npos) out.push_back('\\');
        out.push_back(c);
    }
    return out;
}

}  // namespace proofloop::scripted
