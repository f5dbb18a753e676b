#pragma once

#include <chrono>
#include <cstdint>
#include <string>

#include "ssgk/handshake.hpp"
#include "ssgk/rng.hpp"
#include "ssgk/transport.hpp"

namespace ssgk {

// The responder plays Bob because Bob speaks first: it must be ready to
// send Msg1 as soon as the connection is up. The initiator plays Alice.
enum class Role {
    initiator,
    responder,
};

inline constexpr std::chrono::milliseconds kDefaultTimeout{30000};

// Blocking TCP stream with per-operation timeout. Owns the descriptor.
class TcpStream final : public ByteStream {
public:
    explicit TcpStream(int fd);
    ~TcpStream() override;
    TcpStream(TcpStream&& other) noexcept;
    TcpStream& operator=(TcpStream&&) = delete;
    TcpStream(const TcpStream&) = delete;

    void set_timeout(std::chrono::milliseconds per_op);
    void write_all(std::span<const std::uint8_t> data) override;
    void read_exact(std::span<std::uint8_t> out) override;

private:
    int fd_;
};

class TcpListener {
public:
    TcpListener(const std::string& host, std::uint16_t port);
    ~TcpListener();
    TcpListener(TcpListener&& other) noexcept;
    TcpListener& operator=(TcpListener&&) = delete;
    TcpListener(const TcpListener&) = delete;

    std::uint16_t local_port() const { return port_; }
    TcpStream accept(std::chrono::milliseconds timeout = kDefaultTimeout);

private:
    int fd_;
    std::uint16_t port_;
};

TcpStream tcp_connect(const std::string& host, std::uint16_t port,
                      std::chrono::milliseconds timeout = kDefaultTimeout);

// Runs one handshake over the stream and returns the agreed key. Both
// sides must already hold the same public parameters; the transcript on
// the wire is exactly the three framed protocol messages.
SharedKey peer_handshake(Role role, ByteStream& io, const PublicParams& params,
                         Rng& rng);

}  // namespace ssgk
