#include "proofloop/isar.hpp"

#include <algorithm>
#include <array>
#include <cctype>
#include <unordered_set>

#include "proofloop/errors.hpp"

namespace proofloop::isar {
namespace {

// Per-byte lexical flags from the pre-pass. A byte carries kComment when it is
// part of a (* ... *) block (delimiters included), kString/kBacktick when part
// of a quotation (quotes included).
enum : unsigned char { kComment = 1, kString = 2, kBacktick = 4 };

struct LexMap {
    std::vector<unsigned char> flags;
    bool comments_balanced = true;
};

LexMap lex(const std::string& text) {
    LexMap m;
    m.flags.assign(text.size(), 0);
    int depth = 0;
    enum { plain, in_string, in_btick } state = plain;
    for (std::size_t i = 0; i < text.size(); ++i) {
        char c = text[i];
        if (depth > 0) {
            m.flags[i] = kComment;
            if (c == '*' && i + 1 < text.size() && text[i + 1] == ')') {
                m.flags[i + 1] = kComment;
                --depth;
                ++i;
            } else if (c == '(' && i + 1 < text.size() && text[i + 1] == '*') {
                m.flags[i + 1] = kComment;
                ++depth;
                ++i;
            }
        } else if (state == in_string) {
            m.flags[i] = kString;
            if (c == '"') state = plain;
        } else if (state == in_btick) {
            m.flags[i] = kBacktick;
            if (c == '`') state = plain;
        } else {
            if (c == '(' && i + 1 < text.size() && text[i + 1] == '*') {
                m.flags[i] = m.flags[i + 1] = kComment;
                depth = 1;
                ++i;
            } else if (c == '"') {
                m.flags[i] = kString;
                state = in_string;
            } else if (c == '`') {
                m.flags[i] = kBacktick;
                state = in_btick;
            }
        }
    }
    m.comments_balanced = (depth == 0);
    return m;
}

bool is_ws(char c) { return c == ' ' || c == '\t' || c == '\r' || c == '\n' || c == '\f' || c == '\v'; }

// Word characters for tokenization; Isar identifiers allow primes and '?' for
// schematic variables.
bool is_word(char c) {
    return std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '\'' || c == '?';
}

struct PlainToken {
    std::string text;
    std::size_t offset = 0;
    int depth = 0;  // paren/bracket depth at the token start
};

struct LineInfo {
    std::size_t begin = 0;
    std::size_t end = 0;  // offset of '\n' or text end
    std::size_t first_code = std::string::npos;  // first non-ws, non-comment byte
    std::string first_token;  // "<quote>" when the line leads with a quotation
    int depth_at_first = 0;
    std::vector<std::size_t> by_offsets;  // depth-0 plain "by" tokens
    PlainToken last_token;                // last plain token on the line
    bool has_last_token = false;
    bool has_comment = false;
};

std::vector<LineInfo> scan_lines(const std::string& text, const LexMap& lex_map) {
    std::vector<LineInfo> lines;
    int depth = 0;
    std::size_t pos = 0;
    while (pos <= text.size()) {
        LineInfo li;
        li.begin = pos;
        std::size_t eol = text.find('\n', pos);
        if (eol == std::string::npos) eol = text.size();
        li.end = eol;
        for (std::size_t i = pos; i < eol;) {
            unsigned char f = lex_map.flags[i];
            char c = text[i];
            if (f & kComment) {
                li.has_comment = true;
                ++i;
                continue;
            }
            if (f & (kString | kBacktick)) {
                if (li.first_code == std::string::npos) {
                    li.first_code = i;
                    li.first_token = "<quote>";
                    li.depth_at_first = depth;
                }
                ++i;
                continue;
            }
            if (is_ws(c)) {
                ++i;
                continue;
            }
            // plain code byte
            std::size_t tok_start = i;
            std::string tok;
            if (is_word(c)) {
                while (i < eol && !(lex_map.flags[i] & (kComment | kString | kBacktick)) &&
                       is_word(text[i]))
                    ++i;
                tok = text.substr(tok_start, i - tok_start);
            } else if (c == '.' && i + 1 < eol && text[i + 1] == '.' &&
                       !(lex_map.flags[i + 1] & (kComment | kString | kBacktick))) {
                tok = "..";
                i += 2;
            } else {
                tok = std::string(1, c);
                ++i;
            }
            if (li.first_code == std::string::npos) {
                li.first_code = tok_start;
                li.first_token = tok;
                li.depth_at_first = depth;
            }
            if (tok == "by" && depth == 0) li.by_offsets.push_back(tok_start);
            li.last_token = PlainToken{tok, tok_start, depth};
            li.has_last_token = true;
            if (tok == "(" || tok == "[") ++depth;
            if ((tok == ")" || tok == "]") && depth > 0) --depth;
        }
        lines.push_back(std::move(li));
        if (eol == text.size()) break;
        pos = eol + 1;
    }
    return lines;
}

const std::unordered_set<std::string>& step_keywords() {
    static const std::unordered_set<std::string> kw{
        "proof", "qed",      "have",   "show",       "hence",    "then",     "thus",
        "also",  "finally",  "moreover", "ultimately", "let",    "fix",      "assume",
        "obtain", "case",    "next",   "from",       "with",     "note",     "define",
        "by",    "apply",    "done",   "end",        "subgoal",  "consider", "presume",
        "interpret", "theorem", "lemma", "{",        "}",        ".",        ".."};
    return kw;
}

// Keywords that extend the step they follow instead of opening a new one.
bool attaches_to_previous(const std::string& tok) {
    return tok == "using" || tok == "unfolding" || tok == "including";
}

std::string trim(std::string_view s) {
    std::size_t b = 0, e = s.size();
    while (b < e && is_ws(s[b])) ++b;
    while (e > b && is_ws(s[e - 1])) --e;
    return std::string(s.substr(b, e - b));
}

bool word_boundary(const std::string& s, std::size_t begin, std::size_t end) {
    auto wordish = [](char c) {
        return std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '\'';
    };
    if (begin > 0 && wordish(s[begin - 1])) return false;
    if (end < s.size() && wordish(s[end])) return false;
    return true;
}

bool contains_word(const std::string& s, const std::string& word) {
    std::size_t pos = 0;
    while ((pos = s.find(word, pos)) != std::string::npos) {
        if (word_boundary(s, pos, pos + word.size())) return true;
        pos += 1;
    }
    return false;
}

}  // namespace

std::string strip_comments(const std::string& text) {
    LexMap m = lex(text);
    std::string out;
    out.reserve(text.size());
    for (std::size_t i = 0; i < text.size(); ++i)
        if (!(m.flags[i] & kComment)) out.push_back(text[i]);
    return out;
}

std::string normalize_tactic(const std::string& text) {
    std::string stripped = strip_comments(text);
    std::string out;
    out.reserve(stripped.size());
    bool pending_space = false;
    for (char c : stripped) {
        if (is_ws(c)) {
            pending_space = !out.empty();
            continue;
        }
        if (pending_space) out.push_back(' ');
        pending_space = false;
        out.push_back(c);
    }
    return out;
}

StepKind classify_step_text(const std::string& text) {
    std::string stripped = strip_comments(text);
    std::string t = trim(stripped);
    if (t == "." || t == ".." || t == "by") return StepKind::terminal;
    if (t.rfind("by ", 0) == 0) return StepKind::terminal;
    if (contains_word(stripped, "sledgehammer")) return StepKind::terminal;
    return StepKind::structural;
}

ProofScript parse_proof(const std::string& text) {
    if (trim(text).empty()) throw ParseError("parse_proof: empty input");
    LexMap lex_map = lex(text);
    if (!lex_map.comments_balanced)
        throw ParseError("parse_proof: unbalanced comment delimiters");
    std::vector<LineInfo> lines = scan_lines(text, lex_map);

    // Locate the statement (optional) and the start of the proof body.
    std::size_t stmt_begin = std::string::npos;
    std::size_t stmt_line = 0;
    for (std::size_t i = 0; i < lines.size(); ++i) {
        const auto& li = lines[i];
        if (li.first_code == std::string::npos) continue;
        if (li.first_token == "theorem" || li.first_token == "lemma") {
            stmt_begin = li.first_code;
            stmt_line = i;
            break;
        }
    }
    std::size_t body_begin = 0;
    std::string statement;
    if (stmt_begin != std::string::npos) {
        std::size_t body_line = std::string::npos;
        for (std::size_t i = stmt_line + 1; i < lines.size(); ++i) {
            const auto& li = lines[i];
            if (li.first_code == std::string::npos) continue;
            if (li.first_token == "proof" && li.depth_at_first == 0) {
                body_line = i;
                break;
            }
        }
        if (body_line == std::string::npos)
            throw ParseError("parse_proof: no proof body after the statement");
        body_begin = lines[body_line].begin;
        statement = trim(std::string_view(text).substr(stmt_begin, body_begin - stmt_begin));
    }

    // Break points: offsets where a new step's code begins.
    std::vector<std::size_t> breaks;
    for (const auto& li : lines) {
        if (li.begin < body_begin) continue;
        if (li.first_code == std::string::npos) continue;
        const std::string& tok = li.first_token;
        bool line_start_break = false;
        if (li.depth_at_first == 0) {
            if (step_keywords().count(tok)) line_start_break = true;
            else if (attaches_to_previous(tok) && breaks.empty()) line_start_break = true;
        }
        if (line_start_break) breaks.push_back(li.first_code);
        // A trailing "by ..." on a goal line becomes its own terminal step.
        bool by_break = false;
        if (tok != "by") {
            for (std::size_t off : li.by_offsets) {
                if (off > li.first_code) {
                    breaks.push_back(off);
                    by_break = true;
                    break;
                }
            }
        }
        // A trailing proof-dot ("." or "..") separated by whitespace likewise.
        if (!by_break && li.has_last_token && li.last_token.depth == 0 &&
            (li.last_token.text == "." || li.last_token.text == "..") &&
            li.last_token.offset > li.first_code && li.last_token.offset > 0 &&
            is_ws(text[li.last_token.offset - 1])) {
            breaks.push_back(li.last_token.offset);
        }
    }
    if (breaks.empty()) throw ParseError("parse_proof: no proof steps found");

    // Attachment pass: a step's span starts at the first comment of the
    // comment/whitespace run immediately preceding its code (comments attach
    // forward); it ends at the last non-whitespace byte before the next step's
    // span. The final step keeps any trailing comments.
    std::vector<std::size_t> span_begin(breaks.size());
    for (std::size_t i = 0; i < breaks.size(); ++i) {
        std::size_t lo = (i == 0) ? body_begin : breaks[i - 1];
        std::size_t p = breaks[i];
        std::size_t start = p;
        while (p > lo) {
            char c = text[p - 1];
            if (is_ws(c)) {
                --p;
            } else if (lex_map.flags[p - 1] & kComment) {
                while (p > lo && (lex_map.flags[p - 1] & kComment)) --p;
                start = p;
            } else {
                break;
            }
        }
        span_begin[i] = start;
    }
    ProofScript script;
    script.raw_text = text;
    script.statement = statement;
    for (std::size_t i = 0; i < breaks.size(); ++i) {
        std::size_t end;
        if (i + 1 < breaks.size()) {
            end = span_begin[i + 1];
            while (end > breaks[i] && is_ws(text[end - 1])) --end;
        } else {
            end = text.size();
            while (end > breaks[i] && is_ws(text[end - 1])) --end;
        }
        TacticStep step;
        step.index = i;
        step.source_span = {span_begin[i], end};
        step.text = text.substr(span_begin[i], end - span_begin[i]);
        step.kind = classify_step_text(step.text);
        script.steps.push_back(std::move(step));
    }
    return script;
}

ValidityReport check_validity(const std::string& text) {
    LexMap m = lex(text);
    ValidityReport report;
    static const std::array<std::string, 2> words{"sorry", "oops"};
    for (const auto& w : words) {
        std::size_t pos = 0;
        while ((pos = text.find(w, pos)) != std::string::npos) {
            bool clean = true;
            for (std::size_t i = pos; i < pos + w.size(); ++i)
                if (m.flags[i] & (kComment | kString | kBacktick)) clean = false;
            if (clean && word_boundary(text, pos, pos + w.size()))
                report.hits.push_back({w, pos});
            pos += 1;
        }
    }
    std::sort(report.hits.begin(), report.hits.end(),
              [](const ValidityHit& a, const ValidityHit& b) { return a.offset < b.offset; });
    report.has_cheating = !report.hits.empty();
    return report;
}

std::string render_with_markers(const ProofScript& script,
                                const std::map<std::size_t, std::string>& substitutions) {
    for (const auto& [idx, repl] : substitutions) {
        (void)repl;
        if (idx >= script.steps.size())
            throw IndexError("render_with_markers: no step with index " + std::to_string(idx));
        if (script.steps[idx].kind != StepKind::terminal)
            throw IndexError("render_with_markers: step " + std::to_string(idx) +
                             " is not terminal");
    }
    std::string out;
    out.reserve(script.raw_text.size() + substitutions.size() * kRepairMarker.size());
    std::size_t pos = 0;
    for (const auto& step : script.steps) {
        out.append(script.raw_text, pos, step.source_span.begin - pos);
        auto it = substitutions.find(step.index);
        if (it != substitutions.end()) {
            out.append(it->second);
            out.append(kRepairMarker);
        } else {
            out.append(script.raw_text, step.source_span.begin,
                       step.source_span.end - step.source_span.begin);
        }
        pos = step.source_span.end;
    }
    out.append(script.raw_text, pos, script.raw_text.size() - pos);
    return out;
}

std::string strip_markers(const std::string& text) {
    std::string out;
    out.reserve(text.size());
    std::size_t pos = 0;
    while (true) {
        std::size_t hit = text.find(kRepairMarker.data(), pos, kRepairMarker.size());
        if (hit == std::string::npos) {
            out.append(text, pos, text.size() - pos);
            break;
        }
        out.append(text, pos, hit - pos);
        pos = hit + kRepairMarker.size();
    }
    return out;
}

}  // namespace proofloop::isar
