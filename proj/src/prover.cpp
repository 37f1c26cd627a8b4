#include "proofloop/prover.hpp"

#include "proofloop/errors.hpp"

namespace proofloop::prover {

ProverSession::ProverSession(std::unique_ptr<ProverClient> client, std::string problem_id,
                             std::string statement)
    : client_(std::move(client)),
      problem_id_(std::move(problem_id)),
      statement_(std::move(statement)) {}

ProverSession::~ProverSession() {
    if (open_) close();
}

ProverReply ProverSession::run_tac(const std::string& tactic) {
    if (!open_) throw SessionClosed("run_tac on closed session for " + problem_id_);
    if (discharged_)
        throw SessionClosed("run_tac after goal discharged for " + problem_id_);
    ProverReply reply = client_->run_tac(tactic);
    log_.push_back({tactic, reply});
    if (reply.ok() && reply.tactic_state == kNoGoals) discharged_ = true;
    return reply;
}

void ProverSession::close() {
    if (!open_) return;
    open_ = false;
    client_->close();
}

std::unique_ptr<ProverSession> open_session(std::unique_ptr<ProverClient> client,
                                            const std::string& problem_id,
                                            const std::string& statement) {
    ProverReply reply = client->init(statement);
    if (!reply.ok())
        throw BadStatement("open_session(" + problem_id + "): " + *reply.error);
    return std::make_unique<ProverSession>(std::move(client), problem_id, statement);
}

}  // namespace proofloop::prover
