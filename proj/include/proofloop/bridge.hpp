#pragma once

#include <atomic>
#include <memory>
#include <string>
#include <thread>
#include <vector>

#include "proofloop/prover.hpp"
#include "proofloop/scripted_prover.hpp"

// Wire protocol for bridging to an external prover service (an Isabelle-style
// server wrapped by a small adapter). Frames are a 4-byte big-endian length
// followed by that many bytes of UTF-8 JSON.
//
//   -> {"cmd": "init", "statement": "..."}      <- {"error": null|str, "tactic_state": str}
//   -> {"cmd": "run_tac", "tactic": "..."}      <- {"error": null|str, "tactic_state": str}
//   -> {"cmd": "rollback"}                      <- {"ok": true}
//   -> {"cmd": "close"}                         <- {"ok": true}
//
// The client sends rollback automatically after every failed run_tac so the
// service is back at the pre-submission state and repair can retry alternate
// tactics. A per-step deadline (longer for sledgehammer) turns an overdue
// reply into the synthetic in-band failure {"error": "timeout"}; the
// connection is considered desynchronized from then on and later submissions
// on the same session also report timeout rather than risking mismatched
// frames.
namespace proofloop::bridge {

struct BridgeConfig {
    std::string host = "127.0.0.1";
    int port = 0;
    int tactic_timeout_s = 10;
    int sledgehammer_timeout_s = 120;
};

class BridgeProverClient : public prover::ProverClient {
  public:
    explicit BridgeProverClient(BridgeConfig config);
    ~BridgeProverClient() override;

    // Connects lazily; throws BridgeUnavailable when the endpoint is down.
    prover::ProverReply init(const std::string& statement) override;
    prover::ProverReply run_tac(const std::string& tactic) override;
    void close() override;

  private:
    prover::ProverReply roundtrip(const std::string& payload, int timeout_s);

    BridgeConfig config_;
    int fd_ = -1;
    bool desynced_ = false;
};

// Reference implementation of the service side, backed by the scripted rules
// table. Used by the tests to exercise the protocol end to end; doubles as a
// template for wrapping a real prover.
class BridgeServer {
  public:
    explicit BridgeServer(scripted::ScriptedProverRules rules);
    ~BridgeServer();

    // Binds 127.0.0.1 on an ephemeral port and starts the accept loop.
    void start();
    void stop();
    int port() const { return port_; }

    // Testing hook: delay every reply to a tactic containing this substring.
    void set_delay(std::string tactic_contains, int delay_ms);

  private:
    void serve(int client_fd);

    scripted::ScriptedProverRules rules_;
    int listen_fd_ = -1;
    int port_ = 0;
    std::thread accept_thread_;
    std::vector<std::thread> workers_;
    std::atomic<bool> running_{false};
    std::string delay_needle_;
    int delay_ms_ = 0;
};

// Frame helpers shared by both ends (exposed for protocol tests).
std::string encode_frame(const std::string& payload);
// Reads one frame; returns false on clean EOF before any byte. Throws
// BridgeUnavailable on a broken stream, TimeoutExpired semantics are handled
// by the caller via poll.
bool read_frame(int fd, std::string& payload_out, int timeout_ms);
void write_frame(int fd, const std::string& payload);

}  // namespace proofloop::bridge
