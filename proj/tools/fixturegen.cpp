// Generates the committed end-to-end fixtures by running the real pipeline
// against authored prover rule tables and scripted proof responses, recording
// the chat transcript as it happens. Each fixture re-enacts a known
// interaction pattern:
//
//   imo_1974_p5  repair + refinement together: two failing rounds (a terminal
//                tactic nobody can fix, then an ineligible structural step),
//                then a round that succeeds once one terminal tactic is
//                replaced by a substitute tool.
//   imo_1959_p1  refinement with a model-written informal proof: three
//                failing rounds with distinct errors, then a round that
//                passes every step unchanged.
//   imo_1981_p6  repair only (refinement disabled): the first round succeeds
//                after the substitution loop skips the duplicate of the
//                failed tactic and lands on a later tool.
//
// The generator asserts the expected story line and aborts loudly if the
// pipeline's behavior drifts, then replays the recorded transcript through
// the scripted chat backend to prove the fixture is self-consistent.

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <memory>
#include <stdexcept>
#include <string>
#include <vector>

#include "json.hpp"
#include "proofloop/harness.hpp"
#include "proofloop/isar.hpp"
#include "proofloop/llm.hpp"
#include "proofloop/scripted_prover.hpp"

namespace fs = std::filesystem;
using nlohmann::json;
using namespace proofloop;

namespace {

void require(bool cond, const std::string& msg) {
    if (!cond) throw std::runtime_error("fixturegen: " + msg);
}

prover::ProverReply ok_to(const std::string& state) { return {std::nullopt, state}; }
prover::ProverReply fail_with(const std::string& error) { return {error, ""}; }

// Chat backend that plays authored responses in order while recording the
// fingerprint of every request, producing the replayable transcript.
class RecordingChatBackend : public llm::ChatBackend {
  public:
    explicit RecordingChatBackend(std::vector<std::string> responses)
        : responses_(std::move(responses)) {}

    std::string complete(const refine::Transcript& messages,
                         const llm::CompletionParams& params) override {
        require(cursor_ < responses_.size(), "recording backend ran out of responses");
        entries_.push_back({llm::fingerprint(messages, params), responses_[cursor_]});
        return responses_[cursor_++];
    }

    const std::vector<llm::TranscriptEntry>& entries() const { return entries_; }
    std::size_t consumed() const { return cursor_; }
    std::size_t provided() const { return responses_.size(); }

  private:
    std::vector<std::string> responses_;
    std::vector<llm::TranscriptEntry> entries_;
    std::size_t cursor_ = 0;
};

// The unique step whose normalized text contains `needle`.
const isar::TacticStep& step_containing(const isar::ProofScript& script,
                                        const std::string& needle) {
    const isar::TacticStep* hit = nullptr;
    for (const auto& step : script.steps) {
        if (isar::normalize_tactic(step.text).find(needle) != std::string::npos) {
            require(hit == nullptr, "ambiguous step needle: " + needle);
            hit = &step;
        }
    }
    require(hit != nullptr, "no step contains: " + needle);
    return *hit;
}

// Rule matching exactly this step's normalized text.
scripted::ScriptedRule exact_rule(std::string state, const isar::TacticStep& step,
                                  prover::ProverReply reply) {
    return {std::move(state),
            "^" + scripted::regex_escape(isar::normalize_tactic(step.text)) + "$",
            std::move(reply)};
}

scripted::ScriptedRule catch_all(std::string state, prover::ProverReply reply) {
    return {std::move(state), "", std::move(reply)};
}

std::size_t count_markers(const std::string& text) {
    std::size_t count = 0, pos = 0;
    while ((pos = text.find(isar::kRepairMarker.data(), pos, isar::kRepairMarker.size())) !=
           std::string::npos) {
        ++count;
        pos += isar::kRepairMarker.size();
    }
    return count;
}

void write_file(const fs::path& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    require(static_cast<bool>(out), "cannot write " + path.string());
    out << content;
    out.flush();
    require(static_cast<bool>(out), "short write " + path.string());
}

struct FixtureSpec {
    std::string name;
    harness::Problem problem;
    harness::RunConfig config;
    scripted::ScriptedProverRules rules;
    std::vector<std::string> responses;
    std::function<void(const std::vector<harness::AttemptRecord>&,
                       const harness::ProblemResult&)>
        check;
};

harness::Backends backends_for(std::shared_ptr<llm::ChatBackend> chat,
                               const scripted::ScriptedProverRules& rules) {
    harness::Backends b;
    b.chat = std::move(chat);
    b.prover_factory = [rules] {
        return std::make_unique<scripted::ScriptedProverClient>(rules);
    };
    return b;
}

std::pair<std::vector<harness::AttemptRecord>, harness::ProblemResult> run_once(
    const FixtureSpec& spec, const harness::Backends& backends) {
    std::vector<harness::AttemptRecord> records;
    harness::RecordSink sink;
    sink.append = [&records](const json& j) {
        require(!j.contains("abort"), "problem aborted: " + j.dump());
        records.push_back(harness::AttemptRecord::from_json(j));
    };
    harness::ProblemResult result =
        harness::run_problem(spec.problem, spec.config, backends, {}, sink);
    return {std::move(records), std::move(result)};
}

void emit(const FixtureSpec& spec, const fs::path& out_root) {
    auto recorder = std::make_shared<RecordingChatBackend>(spec.responses);
    auto [records, result] = run_once(spec, backends_for(recorder, spec.rules));
    require(recorder->consumed() == recorder->provided(),
            spec.name + ": unused authored responses");
    spec.check(records, result);

    // Replay through the scripted backend: the recorded transcript must drive
    // the pipeline to the identical outcome.
    auto replay = std::make_shared<llm::ScriptedChatBackend>(recorder->entries());
    auto [records2, result2] = run_once(spec, backends_for(replay, spec.rules));
    require(records2.size() == records.size(), spec.name + ": replay record count differs");
    for (std::size_t i = 0; i < records.size(); ++i) {
        require(records2[i].to_json() == records[i].to_json() ||
                    [&] {
                        // Timing differs between runs; compare everything else.
                        json a = records[i].to_json(), b = records2[i].to_json();
                        a.erase("timing");
                        b.erase("timing");
                        return a == b;
                    }(),
                spec.name + ": replay record " + std::to_string(i) + " differs");
    }
    require(result2.solved == result.solved &&
                result2.first_solving_attempt == result.first_solving_attempt,
            spec.name + ": replay outcome differs");

    const fs::path dir = out_root / spec.name;
    fs::create_directories(dir);
    write_file(dir / "problem.json", harness::problem_to_json(spec.problem).dump(2) + "\n");
    write_file(dir / "rules.json", spec.rules.to_json_text());
    std::string transcript;
    for (const auto& e : recorder->entries()) {
        json line = {{"fingerprint", e.fingerprint}, {"response", e.response}};
        transcript += line.dump() + "\n";
    }
    write_file(dir / "transcript.jsonl", transcript);

    json expected;
    expected["name"] = spec.name;
    expected["config"] = {
        {"attempts", spec.config.attempts},
        {"k", spec.config.k},
        {"tc_enabled", spec.config.tc_enabled},
        {"cc_enabled", spec.config.cc_enabled},
        {"informal_source",
         spec.config.informal_source == harness::InformalSource::human ? "human" : "model"}};
    expected["solved"] = result.solved;
    expected["first_solving_attempt"] =
        result.first_solving_attempt ? json(*result.first_solving_attempt) : json(nullptr);
    json verdicts = json::array();
    json round_kinds = json::array();
    for (const auto& r : records) {
        verdicts.push_back(repair::verdict_name(r.verdict));
        round_kinds.push_back(r.round.kind == refine::RoundKind::initial ? "initial"
                                                                         : "refine");
    }
    expected["verdicts"] = verdicts;
    expected["round_kinds"] = round_kinds;
    expected["llm_calls"] = recorder->entries().size();
    json repaired = json::object();
    std::string final_proof;
    std::size_t marker_count = 0;
    if (result.first_solving_attempt) {
        const auto& solving = records.at(*result.first_solving_attempt);
        for (const auto& [idx, tool] : solving.substitutions)
            repaired[std::to_string(idx)] = tool;
        require(solving.validated_proof.has_value(),
                spec.name + ": solving record lacks a validated proof");
        final_proof = *solving.validated_proof;
        marker_count = count_markers(final_proof);
    }
    expected["repaired"] = repaired;
    expected["final_proof"] = final_proof;
    expected["marker_count"] = marker_count;
    write_file(dir / "expected.json", expected.dump(2) + "\n");
    std::printf("fixturegen: wrote %s (%zu rounds, %zu llm calls)\n", dir.string().c_str(),
                records.size(), recorder->entries().size());
}

// ---------------------------------------------------------------------------
// Fixture 1: fraction-sum inequality (repair + refinement together)
// ---------------------------------------------------------------------------

const char* kStatement1974 = R"ppp(theorem imo_1974_p5:
  fixes a b c d s :: real
  assumes "a>0" "b>0" "c>0" "d>0"
  assumes h0 : "s=a/(a+b+d) + b/(a+b+c) + c/(b+c+d) + d/(a+c+d)"
  shows "1<s \<and> s<2")ppp";

const char* kInformalStatement1974 =
    R"ppp(Determine all possible values of $S = \frac{a}{a+b+d}+\frac{b}{a+b+c}+\frac{c}{b+c+d}+\frac{d}{a+c+d}$ where $a, b, c, d,$ are arbitrary positive numbers.)ppp";

const char* kHumanInformal1974 =
    R"ppp(Note that $2 = \frac{a}{a+b}+\frac{b}{a+b}+\frac{c}{c+d}+\frac{d}{c+d} > S > \frac{a}{a+b+c+d}+\frac{b}{a+b+c+d}+\frac{c}{a+b+c+d}+\frac{d}{a+b+c+d} = 1.$ We will now prove that $S$ can reach any range in between $1$ and $2$.

Choose any positive number $a$. For some variables such that $k, m, l > 0$ and $k + m + l = 1$, let $b = ak$, $c = am$, and $d = al$. Plugging this back into the original fraction, we get
$S = \frac{a}{a+ak+al}+\frac{ak}{a+ak+am}+\frac{am}{ak+am+al}+\frac{al}{a+am+al} = \frac{1}{1+k+l}+\frac{k}{1+k+m}+\frac{m}{k+m+l}+\frac{l}{1+m+l}.$
The above equation can be further simplified to
$S = \frac{1}{2-m}+\frac{k}{2-l}+m+\frac{l}{2-k}.$
Note that $S$ is a continuous function and that $f(m) = m + \frac{1}{2-m}$ is a strictly increasing function. We can now decrease $k$ and $l$ to make $m$ tend arbitrarily close to $1$. We see $\lim_{m\to1} m + \frac{1}{2-m} = 2$, meaning $S$ can be brought arbitrarily close to $2$.
Now, set $a = d = x$ and $b = c = y$ for some positive real numbers $x, y$. Then
$S = \frac{2x}{2x+y} + \frac{2y}{2y+x} = \frac{2y^2 + 8xy + 2x^2}{2y^2 + 5xy + 2x^2}.$
Notice that if we treat the numerator and denominator each as a quadratic in $y$, we will get $1 + \frac{g(x)}{2y^2 + 5xy + 2x^2}$, where $g(x)$ has a degree lower than $2$. This means taking $\lim_{y\to\infty} 1 + \frac{g(x)}{2y^2 + 5xy + 2x^2} = 1$, which means $S$ can be brought arbitrarily close to $1$. Therefore, we are done.)ppp";

const char* kRound1974_0 = R"ppp(theorem imo_1974_p5:
  fixes a b c d s :: real
  assumes "a>0" "b>0" "c>0" "d>0"
  assumes h0 : "s=a/(a+b+d) + b/(a+b+c) + c/(b+c+d) + d/(a+c+d)"
  shows "1<s \<and> s<2"
proof -
  let ?S = "a/(a+b+d) + b/(a+b+c) + c/(b+c+d) + d/(a+c+d)"
  have c0: "a/(a+b)+b/(a+b)+c/(c+d)+d/(c+d) = 2" using assms by auto
  have c1: "a/(a+b+c+d)+b/(a+b+c+d)+c/(a+b+c+d)+d/(a+b+c+d) = 1" using assms by auto
  have "1 < ?S" using assms by (simp add: add_pos_pos c1)
  moreover have "?S < 2" using assms by (simp add: add_pos_pos c0)
  then show "1<s \<and> s<2" using assms h0 by auto
qed)ppp";

const char* kRound1974_1 = R"ppp(theorem imo_1974_p5:
  fixes a b c d s :: real
  assumes "a>0" "b>0" "c>0" "d>0"
  assumes h0 : "s=a/(a+b+d) + b/(a+b+c) + c/(b+c+d) + d/(a+c+d)"
  shows "1<s \<and> s<2"
proof -
  let ?S = "a/(a+b+d) + b/(a+b+c) + c/(b+c+d) + d/(a+c+d)"

  (* Let's show that S > 1 *)
  have c1: "a/(a+b+c+d) + b/(a+b+c+d) + c/(a+b+c+d) + d/(a+b+c+d) = 1"
    using assms by (simp add: divide_simps)
  have "1 < ?S"
  proof -
    note add_strict_mono[of a a b d, of b a c b, of c b d c, of d a c d]
    then have "a/(a+b+d) > a/(a+b+c+d)" "b/(a+b+c) > b/(a+b+c+d)"
               "c/(b+c+d) > c/(a+b+c+d)" "d/(a+c+d) > d/(a+b+c+d)"
      using assms by (simp_all add: divide_strict_right_mono)
    then show "1 < ?S" using c1 by auto
  qed

  (* Let's show that S < 2 *)
  have c2: "a/(a+b) + b/(a+b) + c/(c+d) + d/(c+d) = 2"
    using assms by (simp add: divide_simps)
  have "?S < 2"
  proof -
    note add_strict_mono[of a a b 0, of b a 0 c, of c 0 d b, of d a 0 c]
    then have "a/(a+b+d) < a/(a+b)" "b/(a+b+c) < b/(a+b)"
               "c/(b+c+d) < c/(c+d)" "d/(a+c+d) < d/(c+d)"
      using assms by (simp_all add: divide_strict_right_mono)
    then show "?S < 2" using c2 by auto
  qed

  then show "1<s \<and> s<2" using assms h0 `1 < ?S` by auto
qed)ppp";

const char* kRound1974_2 = R"ppp((*statement begin*)
theorem imo_1974_p5:
  fixes a b c d s :: real
  assumes "a>0" "b>0" "c>0" "d>0"
  assumes h0 : "s=a/(a+b+d) + b/(a+b+c) + c/(b+c+d) + d/(a+c+d)"
  shows "1<s \<and> s<2"
(*statement end*)
proof -
(* Let's correct the proof. *)
  (* Define the sum S *)
  let ?S = "a/(a+b+d) + b/(a+b+c) + c/(b+c+d) + d/(a+c+d)"
  (* Show that S > 1 *)
  have "a/(a+b+c+d) + b/(a+b+c+d) + c/(a+b+c+d) + d/(a+b+c+d) = 1"
    using assms by (simp add: divide_simps)
  moreover have "?S > a/(a+b+c+d) + b/(a+b+c+d) + c/(a+b+c+d) + d/(a+b+c+d)"
  proof -
    have "a/(a+b+d) > a/(a+b+c+d)" "b/(a+b+c) > b/(a+b+c+d)"
          "c/(b+c+d) > c/(a+b+c+d)" "d/(a+c+d) > d/(a+b+c+d)"
      using assms by (simp_all add: divide_strict_right_mono)
    then show ?thesis by auto
  qed
  ultimately have "1 < ?S" by (simp add: div_mult_mod_eq)
  (* Show that S < 2 *)
  have "a/(a+b) + b/(a+b) + c/(c+d) + d/(c+d) = 2"
    using assms by (simp add: divide_simps)
  moreover have "?S < a/(a+b) + b/(a+b) + c/(c+d) + d/(c+d)"
  proof -
    have "a/(a+b+d) < a/(a+b)" "b/(a+b+c) < b/(a+b)"
          "c/(b+c+d) < c/(c+d)" "d/(a+c+d) < d/(c+d)"
      using assms by (simp_all add: divide_strict_right_mono)
    then show ?thesis by auto
  qed
  ultimately have "?S < 2" by simp
  (* Conclude the proof *)
  then show "1<s \<and> s<2" using assms h0 `1 < ?S` by auto
qed
end)ppp";

// Error texts are synthetic stand-ins with a realistic shape; no prover ran.
const char* kGoal1974 =
    "Failed to finish proof:\ngoal (1 subgoal):\n 1. 1 < a / (a + b + d) + b / (a + b "
    "+ c) + c / (b + c + d) + d / (a + c + d)";
const char* kNoteError1974 =
    "Failed to apply fact: add_strict_mono[of a a b d, of b a c b, of c b d c, of d a "
    "c d]";

FixtureSpec make_1974() {
    FixtureSpec spec;
    spec.name = "imo_1974_p5";
    spec.problem.id = "imo_1974_p5";
    spec.problem.split = harness::Split::valid;
    spec.problem.formal_statement = kStatement1974;
    spec.problem.informal_statement = kInformalStatement1974;
    spec.problem.human_informal_proof = kHumanInformal1974;

    spec.config.attempts = 5;
    spec.config.k = 5;
    spec.config.tc_enabled = true;
    spec.config.cc_enabled = true;
    spec.config.informal_source = harness::InformalSource::human;

    spec.responses = {kRound1974_0, kRound1974_1, kRound1974_2};

    isar::ProofScript r0 = isar::parse_proof(kRound1974_0);
    isar::ProofScript r1 = isar::parse_proof(kRound1974_1);
    isar::ProofScript r2 = isar::parse_proof(kRound1974_2);

    scripted::ScriptedProverRules rules;
    rules.initial_state = "s:init74";
    rules.default_reply = ok_to("s:ok");
    rules.notes =
        "Fraction-sum inequality scenario. Round 0 dies at the lower-bound goal (no "
        "tool finishes it), round 1 dies at an ineligible structural fact "
        "instantiation, round 2 succeeds once the div/mod simp step is replaced by an "
        "arithmetic tool. Error strings are synthetic stand-ins with a realistic "
        "shape; states are abstract tokens.";
    // Round 2: the div/mod simp step fails, "by auto" fails, "by arith" lands.
    rules.rules.push_back(
        {"s:ult1S", "^by \\(simp add: div_mult_mod_eq\\)$", fail_with(kGoal1974)});
    rules.rules.push_back({"s:ult1S", "^by auto$", fail_with(kGoal1974)});
    rules.rules.push_back({"s:ult1S", "^by arith$", ok_to("s:ok")});
    // Round 0: once the lower-bound goal is opened, nothing closes it.
    rules.rules.push_back(catch_all("s:r0fail", fail_with(kGoal1974)));
    rules.rules.push_back(
        exact_rule("", step_containing(r0, "\"1 < ?S\" using assms"), ok_to("s:r0fail")));
    // Round 1: the chained fact instantiation is rejected outright.
    rules.rules.push_back(exact_rule("", step_containing(r1, "of a a b d"),
                                     fail_with(kNoteError1974)));
    // Round 2 state anchors.
    rules.rules.push_back(
        exact_rule("", step_containing(r2, "ultimately have \"1 < ?S\""), ok_to("s:ult1S")));
    rules.rules.push_back(
        exact_rule("", step_containing(r2, "using assms h0 `1 < ?S`"), ok_to("s:final74")));
    rules.rules.push_back({"s:final74", "^by auto$", ok_to(prover::kNoGoals)});
    spec.rules = rules;

    spec.check = [](const std::vector<harness::AttemptRecord>& records,
                    const harness::ProblemResult& result) {
        require(result.solved, "1974: not solved");
        require(result.first_solving_attempt == std::size_t{2}, "1974: wrong solving attempt");
        require(records.size() == 3, "1974: expected 3 rounds");
        require(records[0].verdict == repair::Verdict::tactic_failed, "1974: round 0 verdict");
        require(records[1].verdict == repair::Verdict::tactic_failed, "1974: round 1 verdict");
        require(records[2].verdict == repair::Verdict::success, "1974: round 2 verdict");
        require(records[0].round.kind == refine::RoundKind::initial, "1974: round 0 kind");
        require(records[1].round.kind == refine::RoundKind::refine, "1974: round 1 kind");
        require(records[0].feedback_sent &&
                    records[0].feedback_sent->text.find("add_pos_pos c1") != std::string::npos,
                "1974: round 0 feedback should quote the failing tactic");
        require(records[1].feedback_sent &&
                    records[1].feedback_sent->text.find("add_strict_mono") != std::string::npos,
                "1974: round 1 feedback should quote the fact instantiation");
        require(records[1].substitutions.empty(), "1974: no substitution in round 1");
        require(records[2].substitutions.size() == 1, "1974: exactly one repair in round 2");
        require(records[2].substitutions.begin()->second == "by arith",
                "1974: repair tool should be \"by arith\"");
        require(records[2].validated_proof &&
                    records[2].validated_proof->find("by arith [ATPWithTC]") !=
                        std::string::npos,
                "1974: marker missing from the validated proof");
        require(records[2].validated_proof->find("div_mult_mod_eq") == std::string::npos,
                "1974: replaced tactic still present");
    };
    return spec;
}

// ---------------------------------------------------------------------------
// Fixture 2: gcd irreducibility (refinement with a model informal proof)
// ---------------------------------------------------------------------------

const char* kStatement1959 = R"ppp(theorem imo_1959_p1:
  fixes n :: nat
  shows "gcd (21*n + 4) (14*n + 3) = 1")ppp";

const char* kInformalStatement1959 =
    R"ppp(Prove that the fraction $\frac{21n+4}{14n+3}$ is irreducible for every natural number $n$.)ppp";

const char* kModelInformal1959 =
    R"ppp(We can use the Euclidean algorithm to prove this. If the greatest common divisor (gcd) of the numerator and the denominator is 1, then the fraction is irreducible.

Let's find the gcd of $21n+4$ and $14n+3$.

We start by subtracting the smaller number from the larger one. We get: $(21n+4)-(14n+3) = 7n+1$.

Next, we subtract $7n+1$ from $14n+3$. We get: $(14n+3) - (7n+1) = 7n+2$.

Now, we subtract $7n+1$ from $7n+2$. We get: $(7n+2) - (7n+1) = 1$.

Since the greatest common divisor of $21n+4$ and $14n+3$ is 1, the fraction $\frac{21n+4}{14n+3}$ is irreducible for every natural number $n$.)ppp";

const char* kRound1959_0 = R"ppp(theorem imo_1959_p1:
  fixes n :: nat
  shows "gcd (21*n + 4) (14*n + 3) = 1"
proof -
  (* Let's find the gcd of $21n+4$ and $14n+3$. *)
  have h1: "gcd (21*n + 4) (14*n + 3) = gcd ((21*n + 4) - (14*n + 3)) (14*n + 3)"
    by (metis add_diff_inverse_nat gcd_diff1_nat le_add2 nat_le_linear)
  (* We start by subtracting the smaller number from the larger one.
  We get: $(21n+4)-(14n+3) = 7n+1$. *)
  also have "... = gcd (7*n + 1) (14*n + 3)" by simp
  (* Next, we subtract $7n+1$ from $14n+3$. We get: $(14n+3) - (7n+1) = 7n+2$. *)
  also have "... = gcd (7*n + 1) (7*n + 2)"
    by (metis add_diff_inverse_nat gcd_diff1_nat le_add2 nat_le_linear)
  (* Now, we subtract $7n+1$ from $7n+2$. We get: $(7n+2) - (7n+1) = 1$. *)
  also have "... = gcd (7*n + 1) 1" by simp
  (* Since 1 is the greatest common divisor of any number,
  we find that gcd (7*n + 1) 1 = 1. *)
  finally show ?thesis by simp
qed)ppp";

const char* kRound1959_1 = R"ppp(theorem imo_1959_p1:
  fixes n :: nat
  shows "gcd (21*n + 4) (14*n + 3) = 1"
proof -
(* Let's find the gcd of $21n+4$ and $14n+3$. *)
  have h1: "gcd (21*n + 4) (14*n + 3) = gcd (14*n + 3) ((21*n + 4) mod (14*n + 3))"
    using gcd_red_nat by blast
  (* We compute modulo operation and get: $(21n+4) mod (14n+3) = 7n+1$ *)
  also have "... = gcd (14*n + 3) (7*n + 1)"
    by (smt add.right_neutral add_Suc_right add_lessD1 gcd.commute mult_2 mult_Suc
    mult_less_cancel1 mult_numeral_1 numeral_Bit0 numeral_Bit1 numeral_eq_iff
    semiring_norm(76) semiring_norm(78) semiring_norm(8))
  (* Then we again compute the GCD with the modulo operation. *)
  also have "... = gcd (7*n + 1) ((14*n + 3) mod (7*n + 1))"
    using gcd_red_nat by blast
  (* We compute the modulo operation and get: $(14n+3) mod (7n+1) = n+2$. *)
  also have "... = gcd (7*n + 1) (n + 2)"
    by (smt add_2_eq_Suc add_lessD1 gcd.commute mult_2 mult_Suc mult_less_cancel1
    semiring_norm(76) semiring_norm(78) semiring_norm(8))
  (* Then we again compute the GCD with the modulo operation. *)
  also have "... = gcd (n + 2) ((7*n + 1) mod (n + 2))"
    using gcd_red_nat by blast
  (* We compute the modulo operation and get: $(7n+1) mod (n+2) = 1$. *)
  also have "... = gcd (n + 2) 1"
    by (smt add.commute add_lessD1 gcd.commute mult_less_cancel1
    semiring_norm(76) semiring_norm(78) semiring_norm(8))
  (* gcd of any number with 1 is 1. *)
  also have "... = 1" by simp
  finally show ?thesis .
qed)ppp";

const char* kRound1959_2 = R"ppp(theorem imo_1959_p1:
  fixes n :: nat
  shows "gcd (21*n + 4) (14*n + 3) = 1"
theorem imo_1959_p1:
  fixes n :: nat
  shows "gcd (21*n + 4) (14*n + 3) = 1"
proof -
(* Let's find the gcd of $21n+4$ and $14n+3$. *)
  have h1: "gcd (21*n + 4) (14*n + 3) = gcd (14*n + 3) ((21*n + 4) mod (14*n + 3))"
    using gcd_red_nat by blast
  (* We compute modulo operation and get: $(21n+4) mod (14n+3) = 7n+1$ *)
  also have "... = gcd (14*n + 3) (7*n + 1)"
    by (simp add: mod_simps)
  (* Then we again compute the GCD with the modulo operation. *)
  also have "... = gcd (7*n + 1) ((14*n + 3) mod (7*n + 1))"
    using gcd_red_nat by blast
  (* We compute the modulo operation and get: $(14n+3) mod (7n+1) = n+2$. *)
  also have "... = gcd (7*n + 1) (n + 2)"
    by (simp add: mod_simps)
  (* Then we again compute the GCD with the modulo operation. *)
  also have "... = gcd (n + 2) ((7*n + 1) mod (n + 2))"
    using gcd_red_nat by blast
  (* We compute the modulo operation and get: $(7n+1) mod (n+2) = 1$. *)
  also have "... = gcd (n + 2) 1"
    by (simp add: mod_simps)
  (* gcd of any number with 1 is 1. *)
  also have "... = 1" by simp
  finally show ?thesis .
qed)ppp";

const char* kRound1959_3 = R"ppp(theorem imo_1959_p1:
  fixes n :: nat
  shows "gcd (21*n + 4) (14*n + 3) = 1"
proof -
(* We can use the Euclidean algorithm to prove this. *)
  (* If the greatest common divisor (gcd) of the numerator and the denominator is 1,
  then the fraction is irreducible. *)
  have h1: "gcd (21*n + 4) (14*n + 3) = gcd (14*n + 3) ((21*n + 4) mod (14*n + 3))"
    using gcd_red_nat by blast
  (* We start by subtracting the smaller number from the larger one. *)
  also have "... = gcd (14*n + 3) ((21 - 14)*n + (4 - 3))"
    using mod_if by auto
  (* We get: $(21n+4)-(14n+3) = 7n+1$. *)
  also have "... = gcd (14*n + 3) (7*n + 1)"
    by simp
  (* Next, we subtract $7n+1$ from $14n+3$. *)
  also have "... = gcd (7*n + 1) ((14*n + 3) mod (7*n + 1))"
    using gcd_red_nat by blast
  (* We get: $(14n+3) - (7n+1) = 7n+2$. *)
  also have "... = gcd (7*n + 1) ((14 - 7)*n + (3 - 1))"
    using mod_if by auto
  also have "... = gcd (7*n + 1) (7*n + 2)"
    by simp
  (* Now, we subtract $7n+1$ from $7n+2$. *)
  also have "... = gcd (7*n + 2) ((7*n + 1) mod (7*n + 2))"
    using gcd_red_nat by blast
  (* We get: $(7n+2) - (7n+1) = 1$. *)
  also have "... = gcd (7*n + 2) (1)"
    using mod_if by auto
  (* Since the greatest common divisor of $21n+4$ and $14n+3$ is 1, *)
  also have "... = 1"
    by simp
  finally show ?thesis .
qed)ppp";

const char* kMetisError1959 =
    "Failed to finish proof:\ngoal (1 subgoal):\n 1. gcd (21 * n + 4) (14 * n + 3) = "
    "gcd (21 * n + 4 - (14 * n + 3)) (14 * n + 3)";
const char* kSmtError1959 = "SMT: Solver \"z3\": timed out";
const char* kSimpError1959 =
    "Failed to finish proof:\ngoal (1 subgoal):\n 1. gcd (14 * n + 3) ((21 * n + 4) "
    "mod (14 * n + 3)) = gcd (14 * n + 3) (7 * n + 1)";

FixtureSpec make_1959() {
    FixtureSpec spec;
    spec.name = "imo_1959_p1";
    spec.problem.id = "imo_1959_p1";
    spec.problem.split = harness::Split::test;
    spec.problem.formal_statement = kStatement1959;
    spec.problem.informal_statement = kInformalStatement1959;

    spec.config.attempts = 5;
    spec.config.k = 5;
    spec.config.tc_enabled = true;
    spec.config.cc_enabled = true;
    spec.config.informal_source = harness::InformalSource::model;

    spec.responses = {kModelInformal1959, kRound1959_0, kRound1959_1, kRound1959_2,
                      kRound1959_3};

    isar::ProofScript r0 = isar::parse_proof(kRound1959_0);
    isar::ProofScript r1 = isar::parse_proof(kRound1959_1);
    isar::ProofScript r3 = isar::parse_proof(kRound1959_3);

    scripted::ScriptedProverRules rules;
    rules.initial_state = "s:init59";
    rules.default_reply = ok_to("s:ok");
    rules.notes =
        "Gcd irreducibility scenario with a model-written informal proof. Round 0 "
        "dies on a subtraction-form gcd rewrite, rounds 1 and 2 die on the same "
        "mod-form chain link (first via an smt call, then via a simp call), and round "
        "3 walks an explicit subtraction chain that passes every step unchanged. The "
        "chain link that kills rounds 1 and 2 reappears verbatim late in round 3, so "
        "the round-3 rules thread a distinct state through the preceding step to "
        "keep the two occurrences apart. Error strings are synthetic stand-ins with "
        "a realistic shape; states are abstract tokens.";
    // Round 3: the subtraction rewrite opens a guarded state so the shared
    // chain link below stays harmless there.
    rules.rules.push_back(exact_rule("s:subB",
                                     step_containing(r1, "= gcd (14*n + 3) (7*n + 1)"),
                                     ok_to("s:ok")));
    rules.rules.push_back({"s:subA", "^by auto$", ok_to("s:subB")});
    // Rounds 1 and 2: the shared chain link fails under every tactic.
    rules.rules.push_back({"s:7n1", "smt", fail_with(kSmtError1959)});
    rules.rules.push_back(catch_all("s:7n1", fail_with(kSimpError1959)));
    // Round 0: the subtraction-form rewrite fails under every tactic.
    rules.rules.push_back(catch_all("s:r1h1", fail_with(kMetisError1959)));
    rules.rules.push_back(exact_rule("", step_containing(r0, "(21*n + 4) - (14*n + 3)"),
                                     ok_to("s:r1h1")));
    rules.rules.push_back(exact_rule("", step_containing(r3, "(21 - 14)*n + (4 - 3)"),
                                     ok_to("s:subA")));
    rules.rules.push_back(exact_rule("", step_containing(r1, "= gcd (14*n + 3) (7*n + 1)"),
                                     ok_to("s:7n1")));
    rules.rules.push_back(
        exact_rule("", step_containing(r3, "finally show ?thesis"), ok_to("s:fin59")));
    rules.rules.push_back({"s:fin59", "^\\.$", ok_to(prover::kNoGoals)});
    spec.rules = rules;

    spec.check = [](const std::vector<harness::AttemptRecord>& records,
                    const harness::ProblemResult& result) {
        require(result.solved, "1959: not solved");
        require(result.first_solving_attempt == std::size_t{3}, "1959: wrong solving attempt");
        require(records.size() == 4, "1959: expected 4 rounds");
        for (std::size_t i = 0; i < 3; ++i)
            require(records[i].verdict == repair::Verdict::tactic_failed,
                    "1959: round " + std::to_string(i) + " verdict");
        require(records[3].verdict == repair::Verdict::success, "1959: round 3 verdict");
        require(records[0].round.kind == refine::RoundKind::initial, "1959: round 0 kind");
        for (std::size_t i = 1; i < 4; ++i)
            require(records[i].round.kind == refine::RoundKind::refine,
                    "1959: round " + std::to_string(i) + " kind");
        for (const auto& r : records)
            require(r.informal_proof == kModelInformal1959,
                    "1959: informal proof should be the model response throughout");
        require(records[0].feedback_sent &&
                    records[0].feedback_sent->text.find("metis") != std::string::npos,
                "1959: round 0 feedback should quote the metis step");
        require(records[1].feedback_sent &&
                    records[1].feedback_sent->text.find("SMT") != std::string::npos,
                "1959: round 1 feedback should carry the smt error");
        require(records[2].feedback_sent &&
                    records[2].feedback_sent->text.find("mod_simps") != std::string::npos,
                "1959: round 2 feedback should quote the simp step");
        require(records[3].substitutions.empty(), "1959: round 3 should pass unchanged");
        require(records[3].validated_proof == records[3].raw_formal_proof,
                "1959: unchanged proof should render byte-identically");
    };
    return spec;
}

// ---------------------------------------------------------------------------
// Fixture 3: recursive function evaluation (repair only, refinement off)
// ---------------------------------------------------------------------------

const char* kStatement1981 = R"ppp(theorem imo_1981_p6:
  fixes f :: "nat \<Rightarrow> nat \<Rightarrow> nat"
  assumes "\<forall> y. f 0 y = y + 1"
    and "\<forall> x. f (x + 1) 0 = f x 1"
    and "\<forall> x y. f (x + 1) (y + 1) = f x (f (x + 1) y)"
  shows "\<forall> y. f 4 (y + 1) = 2^(f 4 y + 3) - 3")ppp";

const char* kInformalStatement1981 =
    R"ppp(The function $f(x,y)$ satisfies (1) $f(0,y)=y+1$, (2) $f(x+1,0)=f(x,1)$, (3) $f(x+1,y+1)=f(x,f(x+1,y))$, for all non-negative integers $x,y$. Determine $f(4,1981)$.)ppp";

const char* kHumanInformal1981 =
    R"ppp(We observe that $f(1,0) = f(0,1) = 2 $ and that $f(1, y+1) = f(1, f(1,y)) = f(1,y) + 1$, so by induction, $f(1,y) = y+2 $.  Similarly, $f(2,0) = f(1,1) = 3$ and $f(2, y+1) = f(2,y) + 2$, yielding $f(2,y) = 2y + 3$.

We continue with $f(3,0) + 3 = 8 $; $f(3, y+1) + 3 = 2(f(3,y) + 3)$; $f(3,y) + 3 = 2^{y+3}$; and $f(4,0) + 3 = 2^{2^2}$; $f(4,y) + 3 = 2^{f(4,y) + 3}$.

It follows that $f(4,1981) = 2^{2\cdot ^{ . \cdot 2}} - 3 $ when there are 1984 2s, Q.E.D.)ppp";

const char* kRound1981_0 = R"ppp(theorem imo_1981_p6:
  fixes f :: "nat \<Rightarrow> nat \<Rightarrow> nat"
  assumes "\<forall> y. f 0 y = y + 1"
    and "\<forall> x. f (x + 1) 0 = f x 1"
    and "\<forall> x y. f (x + 1) (y + 1) = f x (f (x + 1) y)"
  shows "\<forall> y. f 4 (y + 1) = 2^(f 4 y + 3) - 3"
(*statement end*)
proof -
  (* We observe that $f(1,0) = f(0,1) = 2 $ *)
  have "\<forall>y. f 1 y = y + 2"
  proof
    fix y
    show "f 1 y = y + 2"
    proof (induction y)
      case 0
      then show ?case using assms(2)[rule_format, of "0"]
        by simp
    next
      case (Suc y)
      then show ?case using assms(3)[rule_format, of "0" "y"]
        by simp
    qed
  qed
  then have f1: "\<forall>y. f 1 y = y + 2"
    by simp
  (* Similarly, $f(2,0) = f(1,1) = 3$ and $f(2, y+1) = f(2,y) + 2$, yielding $f(2,y) = 2y + 3$. *)
  have "\<forall>y. f 2 y = 2*y + 3"
  proof
    fix y
    show "f 2 y = 2*y + 3"
    proof (induction y)
      case 0
      then show ?case using assms(2)[rule_format, of "1"]
        using f1 by simp
    next
      case (Suc y)
      then show ?case using assms(3)[rule_format, of "1" "y"]
        using f1 by simp
    qed
  qed
  then have f2: "\<forall>y. f 2 y = 2*y + 3"
    by simp
  (* We continue with $f(3,0) + 3 = 8 $; $f(3, y+1) + 3 = 2(f(3,y) + 3)$; $f(3,y) + 3 = 2^{y+3}$ *)
  have "\<forall>y. f 3 y + 3 = 2^(y + 3)"
  proof
    fix y
    show "f 3 y + 3 = 2^(y + 3)"
    proof (induction y)
      case 0
      then show ?case using assms(2)[rule_format, of "2"]
        using f2 by simp
    next
      case (Suc y)
      then show ?case using assms(3)[rule_format, of "2" "y"]
        using f2 by simp
    qed
  qed
  then have f3: "\<forall>y. f 3 y + 3 = 2^(y + 3)"
    by simp
  (* and $f(4,0) + 3 = 2^{2^2}$; $f(4,y) + 3 = 2^{f(4,y) + 3}$. *)
  have "\<forall>y. f 4 (y + 1) = 2^(f 4 y + 3) - 3"
  proof
    fix y
    show "f 4 (y + 1) = 2^(f 4 y + 3) - 3"
    proof (induction y)
      case 0
      then show ?case using assms(2)[rule_format, of "3"]
        using f3 by simp
    next
      case (Suc y)
      then show ?case using assms(3)[rule_format, of "3" "y"]
        using f3 by simp
    qed
  qed
  then show ?thesis
    by simp
qed)ppp";

const char* kCaseError1981 = "Failed to finish proof:\ngoal (1 subgoal):\n 1. f 1 0 = 0 + 2";

FixtureSpec make_1981() {
    FixtureSpec spec;
    spec.name = "imo_1981_p6";
    spec.problem.id = "imo_1981_p6";
    spec.problem.split = harness::Split::test;
    spec.problem.formal_statement = kStatement1981;
    spec.problem.informal_statement = kInformalStatement1981;
    spec.problem.human_informal_proof = kHumanInformal1981;

    spec.config.attempts = 5;
    spec.config.k = 5;
    spec.config.tc_enabled = true;
    spec.config.cc_enabled = false;  // repair only
    spec.config.informal_source = harness::InformalSource::human;

    spec.responses = {kRound1981_0};

    isar::ProofScript r0 = isar::parse_proof(kRound1981_0);

    scripted::ScriptedProverRules rules;
    rules.initial_state = "s:init81";
    rules.default_reply = ok_to("s:ok");
    rules.notes =
        "Recursive function evaluation scenario, repair only. The base case of the "
        "first induction rejects its simp call and everything before \"by "
        "fastforce\" in the tool order; because the failed original is itself \"by "
        "simp\", the substitution loop also exercises the duplicate-tool skip. Error "
        "strings are synthetic stand-ins with a realistic shape; states are abstract "
        "tokens.";
    rules.rules.push_back(
        exact_rule("", step_containing(r0, "of \"0\"]"), ok_to("s:c0")));
    rules.rules.push_back({"s:c0", "^by fastforce$", ok_to("s:ok")});
    rules.rules.push_back(catch_all("s:c0", fail_with(kCaseError1981)));
    rules.rules.push_back(
        exact_rule("", step_containing(r0, "then show ?thesis"), ok_to("s:fin81")));
    rules.rules.push_back({"s:fin81", "^by simp$", ok_to(prover::kNoGoals)});
    spec.rules = rules;

    spec.check = [](const std::vector<harness::AttemptRecord>& records,
                    const harness::ProblemResult& result) {
        require(result.solved, "1981: not solved");
        require(result.first_solving_attempt == std::size_t{0}, "1981: wrong solving attempt");
        require(records.size() == 1, "1981: expected a single round");
        require(records[0].verdict == repair::Verdict::success, "1981: verdict");
        require(records[0].round.kind == refine::RoundKind::initial, "1981: round kind");
        require(records[0].substitutions.size() == 1, "1981: exactly one repair");
        require(records[0].substitutions.begin()->second == "by fastforce",
                "1981: repair tool should be \"by fastforce\"");
        require(records[0].validated_proof &&
                    records[0].validated_proof->find("by fastforce [ATPWithTC]") !=
                        std::string::npos,
                "1981: marker missing from the validated proof");
    };
    return spec;
}

}  // namespace

int main(int argc, char** argv) {
    const std::string out_root = argc > 1 ? argv[1] : "fixtures";
    try {
        emit(make_1974(), out_root);
        emit(make_1959(), out_root);
        emit(make_1981(), out_root);
    } catch (const std::exception& e) {
        std::fprintf(stderr, "fixturegen: FAILED: %s\n", e.what());
        return 1;
    }
    return 0;
}
