#include "proofloop/llm.hpp"

#include <chrono>
#include <fstream>
#include <sstream>
#include <thread>

#include "httplib.h"
#include "json.hpp"
#include "proofloop/errors.hpp"
#include "proofloop/hash.hpp"

namespace proofloop::llm {

using nlohmann::json;

namespace {

void check_preconditions(const refine::Transcript& messages) {
    if (messages.empty()) throw BackendError("complete: empty transcript");
    if (messages.front().role != "system")
        throw BackendError("complete: first message role must be \"system\", got \"" +
                           messages.front().role + "\"");
}

}  // namespace

std::string fingerprint(const refine::Transcript& messages, const CompletionParams& params) {
    json canon;
    canon["messages"] = json::array();
    for (const auto& m : messages)
        canon["messages"].push_back({{"content", m.content}, {"role", m.role}});
    canon["params"] = {
        {"max_output", params.max_output},
        {"model", params.model_name},
        {"seed", params.seed_hint ? json(*params.seed_hint) : json(nullptr)},
        {"temperature", params.temperature},
    };
    return fnv1a64_hex(canon.dump());
}

void RequestBudget::charge() {
    std::lock_guard<std::mutex> lock(mu_);
    if (max_ > 0 && used_ >= max_)
        throw BudgetExceeded("request budget of " + std::to_string(max_) + " exhausted");
    ++used_;
}

ScriptedChatBackend::ScriptedChatBackend(std::vector<TranscriptEntry> entries,
                                         std::shared_ptr<RequestBudget> budget)
    : entries_(std::move(entries)), budget_(std::move(budget)) {}

std::vector<TranscriptEntry> ScriptedChatBackend::load_jsonl(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ConfigError("scripted transcript: cannot open " + path);
    std::vector<TranscriptEntry> entries;
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.empty()) continue;
        json j;
        try {
            j = json::parse(line);
        } catch (const json::exception& e) {
            throw ConfigError("scripted transcript: bad JSON at " + path + ":" +
                              std::to_string(lineno) + ": " + e.what());
        }
        if (!j.contains("fingerprint") || !j.contains("response"))
            throw ConfigError("scripted transcript: entry at " + path + ":" +
                              std::to_string(lineno) +
                              " needs fingerprint and response fields");
        entries.push_back({j["fingerprint"].get<std::string>(),
                           j["response"].get<std::string>()});
    }
    return entries;
}

std::string ScriptedChatBackend::complete(const refine::Transcript& messages,
                                          const CompletionParams& params) {
    check_preconditions(messages);
    if (budget_) budget_->charge();
    std::string fp = fingerprint(messages, params);
    if (cursor_ >= entries_.size())
        throw TranscriptMismatch("scripted transcript exhausted after " +
                                 std::to_string(entries_.size()) +
                                 " entries; next request fingerprint " + fp);
    if (entries_[cursor_].fingerprint != fp)
        throw TranscriptMismatch("scripted transcript entry " + std::to_string(cursor_) +
                                 " expects fingerprint " + entries_[cursor_].fingerprint +
                                 " but the request hashes to " + fp);
    return entries_[cursor_++].response;
}

void ScriptedChatBackend::skip(std::size_t count) {
    if (count > entries_.size())
        throw TranscriptMismatch("cannot skip " + std::to_string(count) +
                                 " entries of a " + std::to_string(entries_.size()) +
                                 "-entry transcript");
    cursor_ = count;
}

HttpChatBackend::HttpChatBackend(HttpBackendConfig config,
                                 std::shared_ptr<RequestBudget> budget)
    : config_(std::move(config)), budget_(std::move(budget)) {}

std::string HttpChatBackend::complete(const refine::Transcript& messages,
                                      const CompletionParams& params) {
    check_preconditions(messages);
    if (budget_) budget_->charge();

    json body;
    body["model"] = params.model_name;
    body["messages"] = json::array();
    for (const auto& m : messages)
        body["messages"].push_back({{"role", m.role}, {"content", m.content}});
    body["temperature"] = params.temperature;
    body["max_tokens"] = params.max_output;
    if (params.seed_hint) body["seed"] = *params.seed_hint;
    std::string payload = body.dump();

    auto log = [&](const std::string& direction, const std::string& text) {
        if (config_.log_path.empty()) return;
        std::ofstream out(config_.log_path, std::ios::app);
        json rec{{"direction", direction}, {"body", text}};
        out << rec.dump() << "\n";  // credentials live in headers, never logged
    };

    std::string last_error;
    for (int attempt = 0; attempt < config_.max_tries; ++attempt) {
        if (attempt > 0) {
            int delay = config_.retry_base_ms << (attempt - 1);
            std::this_thread::sleep_for(std::chrono::milliseconds(delay));
        }
        httplib::Client client(config_.base_url);
        client.set_connection_timeout(config_.timeout_s, 0);
        client.set_read_timeout(config_.timeout_s, 0);
        if (!config_.api_key.empty()) client.set_bearer_token_auth(config_.api_key);
        log("request", payload);
        auto res = client.Post("/chat/completions", payload, "application/json");
        if (!res) {
            last_error = "transport error: " + httplib::to_string(res.error());
            continue;
        }
        log("response", res->body);
        if (res->status >= 500) {
            last_error = "server error " + std::to_string(res->status);
            continue;
        }
        if (res->status != 200)
            throw BackendError("chat backend answered " + std::to_string(res->status) + ": " +
                               res->body);
        try {
            json reply = json::parse(res->body);
            return reply.at("choices").at(0).at("message").at("content").get<std::string>();
        } catch (const json::exception& e) {
            throw BackendError(std::string("chat backend returned malformed JSON: ") +
                               e.what());
        }
    }
    throw BackendError("chat backend unreachable after " + std::to_string(config_.max_tries) +
                       " tries: " + last_error);
}

}  // namespace proofloop::llm
