#include "proofloop/bridge.hpp"

#include <arpa/inet.h>
#include <netdb.h>
#include <netinet/in.h>
#include <poll.h>
#include <sys/socket.h>
#include <unistd.h>

#include <chrono>
#include <cstring>
#include <thread>

#include "json.hpp"
#include "proofloop/errors.hpp"

namespace proofloop::bridge {

using nlohmann::json;

namespace {

// Reads exactly n bytes; -1 broken stream, 0 timeout, 1 ok. A timeout_ms of
// <= 0 means wait forever.
int read_exact(int fd, char* buf, std::size_t n, int timeout_ms,
               std::chrono::steady_clock::time_point deadline) {
    std::size_t got = 0;
    while (got < n) {
        if (timeout_ms > 0) {
            auto remaining = std::chrono::duration_cast<std::chrono::milliseconds>(
                                 deadline - std::chrono::steady_clock::now())
                                 .count();
            if (remaining <= 0) return 0;
            pollfd pfd{fd, POLLIN, 0};
            int pr = ::poll(&pfd, 1, static_cast<int>(remaining));
            if (pr == 0) return 0;
            if (pr < 0) return -1;
        }
        ssize_t r = ::recv(fd, buf + got, n - got, 0);
        if (r == 0) return -1;  // peer closed mid-frame
        if (r < 0) {
            if (errno == EINTR) continue;
            return -1;
        }
        got += static_cast<std::size_t>(r);
    }
    return 1;
}

}  // namespace

std::string encode_frame(const std::string& payload) {
    std::uint32_t len = htonl(static_cast<std::uint32_t>(payload.size()));
    std::string frame(reinterpret_cast<const char*>(&len), 4);
    frame += payload;
    return frame;
}

void write_frame(int fd, const std::string& payload) {
    std::string frame = encode_frame(payload);
    std::size_t sent = 0;
    while (sent < frame.size()) {
        ssize_t r = ::send(fd, frame.data() + sent, frame.size() - sent, MSG_NOSIGNAL);
        if (r < 0) {
            if (errno == EINTR) continue;
            throw BridgeUnavailable(std::string("bridge write failed: ") +
                                    std::strerror(errno));
        }
        sent += static_cast<std::size_t>(r);
    }
}

bool read_frame(int fd, std::string& payload_out, int timeout_ms) {
    auto deadline = std::chrono::steady_clock::now() + std::chrono::milliseconds(timeout_ms);
    char lenbuf[4];
    // Peek-free: a clean EOF before the first length byte means "no frame".
    if (timeout_ms > 0) {
        pollfd pfd{fd, POLLIN, 0};
        int pr = ::poll(&pfd, 1, timeout_ms);
        if (pr == 0) {
            payload_out.clear();
            throw BridgeUnavailable("__timeout__");
        }
    }
    ssize_t first = ::recv(fd, lenbuf, 1, 0);
    if (first == 0) return false;
    if (first < 0) throw BridgeUnavailable(std::string("bridge read failed: ") +
                                           std::strerror(errno));
    int rc = read_exact(fd, lenbuf + 1, 3, timeout_ms, deadline);
    if (rc == 0) throw BridgeUnavailable("__timeout__");
    if (rc < 0) throw BridgeUnavailable("bridge stream broken mid-frame");
    std::uint32_t len;
    std::memcpy(&len, lenbuf, 4);
    len = ntohl(len);
    if (len > (64u << 20)) throw BridgeUnavailable("bridge frame too large");
    payload_out.resize(len);
    rc = read_exact(fd, payload_out.data(), len, timeout_ms, deadline);
    if (rc == 0) throw BridgeUnavailable("__timeout__");
    if (rc < 0) throw BridgeUnavailable("bridge stream broken mid-frame");
    return true;
}

BridgeProverClient::BridgeProverClient(BridgeConfig config) : config_(std::move(config)) {}

BridgeProverClient::~BridgeProverClient() { close(); }

prover::ProverReply BridgeProverClient::init(const std::string& statement) {
    addrinfo hints{};
    hints.ai_family = AF_UNSPEC;
    hints.ai_socktype = SOCK_STREAM;
    addrinfo* result = nullptr;
    std::string port_str = std::to_string(config_.port);
    int rc = ::getaddrinfo(config_.host.c_str(), port_str.c_str(), &hints, &result);
    if (rc != 0)
        throw BridgeUnavailable("bridge resolve " + config_.host + ": " + gai_strerror(rc));
    int fd = -1;
    for (addrinfo* ai = result; ai; ai = ai->ai_next) {
        fd = ::socket(ai->ai_family, ai->ai_socktype, ai->ai_protocol);
        if (fd < 0) continue;
        if (::connect(fd, ai->ai_addr, ai->ai_addrlen) == 0) break;
        ::close(fd);
        fd = -1;
    }
    ::freeaddrinfo(result);
    if (fd < 0)
        throw BridgeUnavailable("bridge endpoint " + config_.host + ":" + port_str +
                                " unreachable");
    fd_ = fd;
    json req{{"cmd", "init"}, {"statement", statement}};
    return roundtrip(req.dump(), config_.tactic_timeout_s);
}

prover::ProverReply BridgeProverClient::run_tac(const std::string& tactic) {
    if (fd_ < 0) throw BridgeUnavailable("bridge session not initialized");
    if (desynced_) return {std::string(prover::kTimeoutError), ""};
    int timeout = tactic.find("sledgehammer") != std::string::npos
                      ? config_.sledgehammer_timeout_s
                      : config_.tactic_timeout_s;
    json req{{"cmd", "run_tac"}, {"tactic", tactic}};
    prover::ProverReply reply = roundtrip(req.dump(), timeout);
    if (desynced_) return reply;
    if (!reply.ok() && *reply.error != prover::kTimeoutError) {
        // Restore the pre-submission state so alternatives see the same goal.
        json rb{{"cmd", "rollback"}};
        write_frame(fd_, rb.dump());
        std::string ack;
        read_frame(fd_, ack, config_.tactic_timeout_s * 1000);
    }
    return reply;
}

prover::ProverReply BridgeProverClient::roundtrip(const std::string& payload, int timeout_s) {
    try {
        write_frame(fd_, payload);
        std::string body;
        if (!read_frame(fd_, body, timeout_s * 1000))
            throw BridgeUnavailable("bridge closed the connection");
        json j = json::parse(body);
        prover::ProverReply reply;
        if (j.contains("error") && !j["error"].is_null())
            reply.error = j["error"].get<std::string>();
        reply.tactic_state = j.value("tactic_state", std::string{});
        return reply;
    } catch (const BridgeUnavailable& e) {
        if (std::string_view(e.what()) == "__timeout__") {
            desynced_ = true;  // frames may still arrive late; do not reuse them
            return {std::string(prover::kTimeoutError), ""};
        }
        throw;
    } catch (const json::exception& e) {
        throw BridgeUnavailable(std::string("bridge sent malformed JSON: ") + e.what());
    }
}

void BridgeProverClient::close() {
    if (fd_ < 0) return;
    if (!desynced_) {
        try {
            json req{{"cmd", "close"}};
            write_frame(fd_, req.dump());
        } catch (const BridgeUnavailable&) {
        }
    }
    ::close(fd_);
    fd_ = -1;
}

BridgeServer::BridgeServer(scripted::ScriptedProverRules rules) : rules_(std::move(rules)) {}

BridgeServer::~BridgeServer() { stop(); }

void BridgeServer::start() {
    listen_fd_ = ::socket(AF_INET, SOCK_STREAM, 0);
    if (listen_fd_ < 0) throw BridgeUnavailable("bridge server: socket() failed");
    int one = 1;
    ::setsockopt(listen_fd_, SOL_SOCKET, SO_REUSEADDR, &one, sizeof one);
    sockaddr_in addr{};
    addr.sin_family = AF_INET;
    addr.sin_addr.s_addr = htonl(INADDR_LOOPBACK);
    addr.sin_port = 0;
    if (::bind(listen_fd_, reinterpret_cast<sockaddr*>(&addr), sizeof addr) != 0)
        throw BridgeUnavailable("bridge server: bind failed");
    socklen_t len = sizeof addr;
    ::getsockname(listen_fd_, reinterpret_cast<sockaddr*>(&addr), &len);
    port_ = ntohs(addr.sin_port);
    if (::listen(listen_fd_, 16) != 0)
        throw BridgeUnavailable("bridge server: listen failed");
    running_ = true;
    accept_thread_ = std::thread([this] {
        while (running_) {
            int client = ::accept(listen_fd_, nullptr, nullptr);
            if (client < 0) break;
            workers_.emplace_back([this, client] { serve(client); });
        }
    });
}

void BridgeServer::stop() {
    if (!running_) return;
    running_ = false;
    ::shutdown(listen_fd_, SHUT_RDWR);
    ::close(listen_fd_);
    if (accept_thread_.joinable()) accept_thread_.join();
    for (auto& w : workers_)
        if (w.joinable()) w.join();
    workers_.clear();
}

void BridgeServer::set_delay(std::string tactic_contains, int delay_ms) {
    delay_needle_ = std::move(tactic_contains);
    delay_ms_ = delay_ms;
}

void BridgeServer::serve(int client_fd) {
    scripted::ScriptedProverClient prover_impl(rules_);
    std::string prev_state;
    std::string cur_state;
    try {
        std::string body;
        while (read_frame(client_fd, body, 0)) {
            json req = json::parse(body, nullptr, false);
            if (req.is_discarded()) break;
            std::string cmd = req.value("cmd", std::string{});
            if (cmd == "init") {
                prover::ProverReply r = prover_impl.init(req.value("statement", std::string{}));
                cur_state = prev_state = r.tactic_state;
                json resp{{"error", r.error ? json(*r.error) : json(nullptr)},
                          {"tactic_state", r.tactic_state}};
                write_frame(client_fd, resp.dump());
            } else if (cmd == "run_tac") {
                std::string tactic = req.value("tactic", std::string{});
                if (delay_ms_ > 0 && !delay_needle_.empty() &&
                    tactic.find(delay_needle_) != std::string::npos)
                    std::this_thread::sleep_for(std::chrono::milliseconds(delay_ms_));
                prev_state = prover_impl.state();
                prover::ProverReply r = prover_impl.run_tac(tactic);
                json resp{{"error", r.error ? json(*r.error) : json(nullptr)},
                          {"tactic_state", r.tactic_state}};
                write_frame(client_fd, resp.dump());
            } else if (cmd == "rollback") {
                // The scripted prover never advances on failure, so the saved
                // state is already current; acknowledge regardless.
                (void)prev_state;
                write_frame(client_fd, json{{"ok", true}}.dump());
            } else if (cmd == "close") {
                write_frame(client_fd, json{{"ok", true}}.dump());
                break;
            } else {
                write_frame(client_fd,
                            json{{"error", "unknown cmd"}, {"tactic_state", ""}}.dump());
            }
        }
    } catch (const BridgeUnavailable&) {
        // connection dropped; nothing to clean up beyond the socket
    }
    ::close(client_fd);
}

}  // namespace proofloop::bridge
