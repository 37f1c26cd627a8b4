#pragma once

#include <memory>
#include <optional>
#include <string>
#include <vector>

// Prover session abstraction. A client speaks to one backend (scripted table
// or framed-socket bridge); a session wraps a client with the bookkeeping the
// repair loop relies on: an append-only submission log, refusal to submit
// after close or after the goal is discharged, and the guarantee that a failed
// submission leaves the prover state untouched (so alternative tactics can be
// retried against the same state).
namespace proofloop::prover {

struct ProverReply {
    std::optional<std::string> error;  // absent on success
    std::string tactic_state;          // meaningful only when error is absent

    bool ok() const { return !error.has_value(); }
};

inline constexpr const char* kNoGoals = "no goals";
inline constexpr const char* kTimeoutError = "timeout";

// One backend connection. init() may throw BadStatement or BridgeUnavailable;
// run_tac() reports tactic failures in-band via ProverReply::error and must
// not advance state on failure. close() is idempotent.
class ProverClient {
  public:
    virtual ~ProverClient() = default;
    virtual ProverReply init(const std::string& statement) = 0;
    virtual ProverReply run_tac(const std::string& tactic) = 0;
    virtual void close() = 0;
};

struct LogEntry {
    std::string tactic;
    ProverReply reply;
};

class ProverSession {
  public:
    ProverSession(std::unique_ptr<ProverClient> client, std::string problem_id,
                  std::string statement);
    ~ProverSession();

    ProverSession(const ProverSession&) = delete;
    ProverSession& operator=(const ProverSession&) = delete;

    // Throws SessionClosed after close() or after a reply reached "no goals".
    ProverReply run_tac(const std::string& tactic);

    void close();
    bool is_open() const { return open_; }
    bool goal_discharged() const { return discharged_; }
    const std::string& problem_id() const { return problem_id_; }
    const std::string& statement() const { return statement_; }
    const std::vector<LogEntry>& step_log() const { return log_; }

  private:
    std::unique_ptr<ProverClient> client_;
    std::string problem_id_;
    std::string statement_;
    std::vector<LogEntry> log_;
    bool open_ = true;
    bool discharged_ = false;
};

// Opens a session: constructs the client's connection for `statement` and
// positions it after the statement. Throws BadStatement / BridgeUnavailable.
std::unique_ptr<ProverSession> open_session(std::unique_ptr<ProverClient> client,
                                            const std::string& problem_id,
                                            const std::string& statement);

}  // namespace proofloop::prover
