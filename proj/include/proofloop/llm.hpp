#pragma once

#include <cstdint>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <vector>

#include "proofloop/refinement.hpp"

// Chat-completion backends. The pipeline only ever sees complete(): the live
// backend posts an OpenAI-style chat request with retry/backoff; the scripted
// backend replays a recorded transcript strictly in order, keyed by a stable
// fingerprint of the request, which is what makes whole-pipeline runs
// deterministic and repeatable in tests.
namespace proofloop::llm {

struct CompletionParams {
    double temperature = 0.7;
    int max_output = 2048;
    std::string model_name = "gpt-4";
    std::optional<std::int64_t> seed_hint;
};

// Stable across processes and platforms: FNV-1a 64 over a canonical JSON
// serialization of roles, contents, and params. Returned as 16 hex digits.
std::string fingerprint(const refine::Transcript& messages, const CompletionParams& params);

// Run-level request cap shared by all backends of a run. max_requests == 0
// means unlimited.
class RequestBudget {
  public:
    explicit RequestBudget(std::size_t max_requests = 0) : max_(max_requests) {}
    void charge();  // throws BudgetExceeded once the cap is passed
    std::size_t used() const {
        std::lock_guard<std::mutex> lock(mu_);
        return used_;
    }

  private:
    mutable std::mutex mu_;
    std::size_t max_;
    std::size_t used_ = 0;
};

class ChatBackend {
  public:
    virtual ~ChatBackend() = default;
    // pre: messages non-empty, first role == "system". May throw BackendError,
    // TranscriptMismatch, BudgetExceeded.
    virtual std::string complete(const refine::Transcript& messages,
                                 const CompletionParams& params) = 0;
    virtual bool is_scripted() const { return false; }
};

struct TranscriptEntry {
    std::string fingerprint;
    std::string response;
};

// Replays a JSONL file of {"fingerprint": ..., "response": ...} records in
// order; a request whose fingerprint differs from the next entry (or arrives
// after the file is exhausted) raises TranscriptMismatch.
class ScriptedChatBackend : public ChatBackend {
  public:
    explicit ScriptedChatBackend(std::vector<TranscriptEntry> entries,
                                 std::shared_ptr<RequestBudget> budget = nullptr);
    static std::vector<TranscriptEntry> load_jsonl(const std::string& path);

    std::string complete(const refine::Transcript& messages,
                         const CompletionParams& params) override;
    bool is_scripted() const override { return true; }

    // Fast-forward over entries already consumed by a previous (resumed) run.
    void skip(std::size_t count);
    std::size_t cursor() const { return cursor_; }
    std::size_t size() const { return entries_.size(); }

  private:
    std::vector<TranscriptEntry> entries_;
    std::size_t cursor_ = 0;
    std::shared_ptr<RequestBudget> budget_;
};

struct HttpBackendConfig {
    std::string base_url;      // e.g. http://127.0.0.1:8080 (path /chat/completions)
    std::string api_key;       // optional; sent as a bearer token
    std::string log_path;      // optional JSONL request/response log (key redacted)
    int max_tries = 3;
    int retry_base_ms = 500;   // backoff: base, 2*base, 4*base, ...
    int timeout_s = 120;
};

// POSTs {model, messages, temperature, max_tokens[, seed]} and returns
// choices[0].message.content. Transport failures and 5xx responses are
// retried max_tries times with exponential backoff, then raised as
// BackendError; 4xx responses fail immediately.
class HttpChatBackend : public ChatBackend {
  public:
    explicit HttpChatBackend(HttpBackendConfig config,
                             std::shared_ptr<RequestBudget> budget = nullptr);
    std::string complete(const refine::Transcript& messages,
                         const CompletionParams& params) override;

  private:
    HttpBackendConfig config_;
    std::shared_ptr<RequestBudget> budget_;
};

}  // namespace proofloop::llm
