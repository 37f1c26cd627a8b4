#include <string>

#include "doctest.h"
#include "proofloop/errors.hpp"
#include "proofloop/scripted_prover.hpp"

using namespace proofloop;
using scripted::ScriptedProverClient;
using scripted::ScriptedProverRules;
using scripted::ScriptedRule;

namespace {

ScriptedProverRules demo_rules() {
    ScriptedProverRules rules;
    rules.initial_state = "start";
    rules.default_reply = {std::nullopt, "fallthrough"};
    rules.rules.push_back({"start", "^by auto$", {std::nullopt, "mid"}});
    rules.rules.push_back({"mid", "blast", {std::string("boom"), ""}});
    rules.rules.push_back({"", "finish", {std::nullopt, "no goals"}});
    return rules;
}

}  // namespace

TEST_CASE("scripted: first matching rule wins and ok replies advance the state") {
    ScriptedProverClient client(demo_rules());
    auto init = client.init("lemma l: shows \"P\"");
    CHECK(init.ok());
    CHECK(client.state() == "start");

    auto r1 = client.run_tac("by auto");
    CHECK(r1.ok());
    CHECK(r1.tactic_state == "mid");
    CHECK(client.state() == "mid");

    SUBCASE("failures leave the state unchanged") {
        auto r2 = client.run_tac("by blast");
        REQUIRE_FALSE(r2.ok());
        CHECK(*r2.error == "boom");
        CHECK(client.state() == "mid");
        // The same submission keeps failing until another rule matches.
        CHECK_FALSE(client.run_tac("by blast").ok());
        CHECK(client.run_tac("finish now").tactic_state == "no goals");
    }

    SUBCASE("unmatched submissions get the default reply") {
        auto r = client.run_tac("by mystery");
        CHECK(r.ok());
        CHECK(r.tactic_state == "fallthrough");
        CHECK(client.state() == "fallthrough");
    }
}

TEST_CASE("scripted: submissions are normalized before matching") {
    ScriptedProverClient client(demo_rules());
    client.init("s");
    // Anchored regex "^by auto$" still matches once comments and whitespace
    // noise are normalized away.
    auto r = client.run_tac("  by  (* brute force *)  auto ");
    CHECK(r.tactic_state == "mid");
}

TEST_CASE("scripted: empty state and tactic patterns match everything") {
    ScriptedProverRules rules;
    rules.rules.push_back({"", "", {std::string("always"), ""}});
    ScriptedProverClient client(rules);
    client.init("s");
    CHECK(*client.run_tac("anything at all").error == "always");
}

TEST_CASE("scripted: state matching is a substring test") {
    ScriptedProverRules rules;
    rules.initial_state = "alpha-beta";
    rules.rules.push_back({"beta", "", {std::nullopt, "hit"}});
    ScriptedProverClient client(rules);
    client.init("s");
    CHECK(client.run_tac("x").tactic_state == "hit");
}

TEST_CASE("scripted: an empty initial state exposes the statement to the rules") {
    ScriptedProverRules rules;
    rules.default_reply = {std::string("nope"), ""};
    rules.rules.push_back({"problem_7", "", {std::nullopt, "ok"}});
    ScriptedProverClient client(rules);
    client.init("theorem problem_7: shows \"P\"");
    CHECK(client.run_tac("x").ok());
}

TEST_CASE("scripted: statements can be rejected at init") {
    ScriptedProverRules rules;
    rules.reject_statement_contains.push_back("undefined_symbol");
    ScriptedProverClient client(rules);
    auto reply = client.init("lemma l: shows \"undefined_symbol > 0\"");
    CHECK_FALSE(reply.ok());
}

TEST_CASE("scripted: a closed connection reports an error reply") {
    ScriptedProverClient client(demo_rules());
    client.init("s");
    client.close();
    auto r = client.run_tac("by auto");
    REQUIRE_FALSE(r.ok());
    CHECK(r.error->find("closed") != std::string::npos);
}

TEST_CASE("scripted: rules serialize to JSON and back") {
    ScriptedProverRules rules = demo_rules();
    rules.reject_statement_contains = {"bad"};
    rules.notes = "demo table";
    ScriptedProverRules back = ScriptedProverRules::from_json_text(rules.to_json_text());
    CHECK(back.initial_state == rules.initial_state);
    CHECK(back.notes == rules.notes);
    CHECK(back.reject_statement_contains == rules.reject_statement_contains);
    REQUIRE(back.rules.size() == rules.rules.size());
    for (std::size_t i = 0; i < rules.rules.size(); ++i) {
        CHECK(back.rules[i].state_contains == rules.rules[i].state_contains);
        CHECK(back.rules[i].tactic_regex == rules.rules[i].tactic_regex);
        CHECK(back.rules[i].reply.error == rules.rules[i].reply.error);
        CHECK(back.rules[i].reply.tactic_state == rules.rules[i].reply.tactic_state);
    }
}

TEST_CASE("scripted: a missing default key falls back to an unmatched error") {
    auto rules = ScriptedProverRules::from_json_text(R"({"rules": []})");
    ScriptedProverClient client(rules);
    client.init("s");
    auto r = client.run_tac("by auto");
    REQUIRE_FALSE(r.ok());
    CHECK(r.error->find("unmatched") != std::string::npos);
}

TEST_CASE("scripted: malformed rule documents are rejected") {
    CHECK_THROWS_AS(ScriptedProverRules::from_json_text("not json"), ConfigError);
    CHECK_THROWS_AS(ScriptedProverRules::from_json_text("[1,2,3]"), ConfigError);
    CHECK_THROWS_AS(ScriptedProverRules::from_json_text(R"({"rules": [{"reply": 3}]})"),
                    ConfigError);
}

TEST_CASE("scripted: regex_escape makes literals match themselves exactly") {
    const std::string literal = "by (simp add: f.g [x]* {y}+ | ^$?)";
    ScriptedProverRules rules;
    rules.default_reply = {std::string("miss"), ""};
    rules.rules.push_back({"", "^" + scripted::regex_escape(literal) + "$",
                           {std::nullopt, "exact"}});
    ScriptedProverClient client(rules);
    client.init("s");
    CHECK(client.run_tac(literal).tactic_state == "exact");
    CHECK_FALSE(client.run_tac("by (simp add: fXg [x]* {y}+ | ^$?)").ok());
    CHECK_FALSE(client.run_tac(literal + " tail").ok());
}
