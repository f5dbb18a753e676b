#include "ssgk/peer.hpp"

#include <arpa/inet.h>
#include <netdb.h>
#include <netinet/in.h>
#include <netinet/tcp.h>
#include <poll.h>
#include <sys/socket.h>
#include <unistd.h>

#include <cerrno>
#include <cstring>

#include "ssgk/errors.hpp"
#include "ssgk/wire.hpp"

namespace ssgk {

namespace {

[[noreturn]] void throw_errno(const std::string& what) {
    throw TransportError(what + ": " + std::strerror(errno));
}

timeval to_timeval(std::chrono::milliseconds ms) {
    timeval tv{};
    tv.tv_sec = static_cast<time_t>(ms.count() / 1000);
    tv.tv_usec = static_cast<suseconds_t>((ms.count() % 1000) * 1000);
    return tv;
}

struct AddrInfo {
    addrinfo* res = nullptr;
    ~AddrInfo() {
        if (res)
            freeaddrinfo(res);
    }
};

addrinfo* resolve(const std::string& host, std::uint16_t port, AddrInfo& holder,
                  bool passive) {
    addrinfo hints{};
    hints.ai_family = AF_UNSPEC;
    hints.ai_socktype = SOCK_STREAM;
    if (passive)
        hints.ai_flags = AI_PASSIVE;
    const std::string port_str = std::to_string(port);
    const int rc = getaddrinfo(host.empty() ? nullptr : host.c_str(), port_str.c_str(),
                               &hints, &holder.res);
    if (rc != 0)
        throw TransportError("resolve '" + host + "': " + gai_strerror(rc));
    return holder.res;
}

}  // namespace

TcpStream::TcpStream(int fd) : fd_(fd) {
    set_timeout(kDefaultTimeout);
    int one = 1;
    setsockopt(fd_, IPPROTO_TCP, TCP_NODELAY, &one, sizeof(one));
}

TcpStream::~TcpStream() {
    if (fd_ >= 0)
        ::close(fd_);
}

TcpStream::TcpStream(TcpStream&& other) noexcept : fd_(other.fd_) {
    other.fd_ = -1;
}

void TcpStream::set_timeout(std::chrono::milliseconds per_op) {
    const timeval tv = to_timeval(per_op);
    setsockopt(fd_, SOL_SOCKET, SO_RCVTIMEO, &tv, sizeof(tv));
    setsockopt(fd_, SOL_SOCKET, SO_SNDTIMEO, &tv, sizeof(tv));
}

void TcpStream::write_all(std::span<const std::uint8_t> data) {
    std::size_t off = 0;
    while (off < data.size()) {
        const ssize_t n = ::send(fd_, data.data() + off, data.size() - off, MSG_NOSIGNAL);
        if (n < 0) {
            if (errno == EINTR)
                continue;
            if (errno == EAGAIN || errno == EWOULDBLOCK)
                throw TimeoutError();
            throw_errno("send");
        }
        off += static_cast<std::size_t>(n);
    }
}

void TcpStream::read_exact(std::span<std::uint8_t> out) {
    std::size_t off = 0;
    while (off < out.size()) {
        const ssize_t n = ::recv(fd_, out.data() + off, out.size() - off, 0);
        if (n < 0) {
            if (errno == EINTR)
                continue;
            if (errno == EAGAIN || errno == EWOULDBLOCK)
                throw TimeoutError();
            throw_errno("recv");
        }
        if (n == 0)
            throw TransportError("connection closed mid-message");
        off += static_cast<std::size_t>(n);
    }
}

TcpListener::TcpListener(const std::string& host, std::uint16_t port) : fd_(-1), port_(0) {
    AddrInfo holder;
    addrinfo* ai = resolve(host, port, holder, true);
    for (; ai; ai = ai->ai_next) {
        fd_ = ::socket(ai->ai_family, ai->ai_socktype, ai->ai_protocol);
        if (fd_ < 0)
            continue;
        int one = 1;
        setsockopt(fd_, SOL_SOCKET, SO_REUSEADDR, &one, sizeof(one));
        if (::bind(fd_, ai->ai_addr, ai->ai_addrlen) == 0 && ::listen(fd_, 4) == 0)
            break;
        ::close(fd_);
        fd_ = -1;
    }
    if (fd_ < 0)
        throw_errno("bind/listen");
    sockaddr_storage ss{};
    socklen_t len = sizeof(ss);
    if (getsockname(fd_, reinterpret_cast<sockaddr*>(&ss), &len) != 0)
        throw_errno("getsockname");
    if (ss.ss_family == AF_INET)
        port_ = ntohs(reinterpret_cast<sockaddr_in*>(&ss)->sin_port);
    else
        port_ = ntohs(reinterpret_cast<sockaddr_in6*>(&ss)->sin6_port);
}

TcpListener::~TcpListener() {
    if (fd_ >= 0)
        ::close(fd_);
}

TcpListener::TcpListener(TcpListener&& other) noexcept : fd_(other.fd_), port_(other.port_) {
    other.fd_ = -1;
}

TcpStream TcpListener::accept(std::chrono::milliseconds timeout) {
    pollfd pf{fd_, POLLIN, 0};
    const int rc = ::poll(&pf, 1, static_cast<int>(timeout.count()));
    if (rc == 0)
        throw TimeoutError();
    if (rc < 0)
        throw_errno("poll");
    const int client = ::accept(fd_, nullptr, nullptr);
    if (client < 0)
        throw_errno("accept");
    return TcpStream(client);
}

TcpStream tcp_connect(const std::string& host, std::uint16_t port,
                      std::chrono::milliseconds timeout) {
    AddrInfo holder;
    addrinfo* ai = resolve(host, port, holder, false);
    int fd = -1;
    for (; ai; ai = ai->ai_next) {
        fd = ::socket(ai->ai_family, ai->ai_socktype, ai->ai_protocol);
        if (fd < 0)
            continue;
        if (::connect(fd, ai->ai_addr, ai->ai_addrlen) == 0)
            break;
        ::close(fd);
        fd = -1;
    }
    if (fd < 0)
        throw_errno("connect");
    TcpStream stream(fd);
    stream.set_timeout(timeout);
    return stream;
}

SharedKey peer_handshake(Role role, ByteStream& io, const PublicParams& params,
                         Rng& rng) {
    if (role == Role::responder) {
        auto [msg1, bob] = bob_init(params, rng);
        write_frame(io, MsgType::msg1, encode_msg1(msg1));
        Frame f = read_frame(io);
        if (f.type != MsgType::msg2)
            throw MalformedMessageError("peer: expected a msg2 frame");
        auto [msg3, key] = bob_complete(decode_msg2(f.payload), bob);
        write_frame(io, MsgType::msg3, encode_msg3(msg3));
        return key;
    }
    Frame f1 = read_frame(io);
    if (f1.type != MsgType::msg1)
        throw MalformedMessageError("peer: expected a msg1 frame");
    auto [msg2, alice] = alice_respond(params, decode_msg1(f1.payload), rng);
    write_frame(io, MsgType::msg2, encode_msg2(msg2));
    Frame f3 = read_frame(io);
    if (f3.type != MsgType::msg3)
        throw MalformedMessageError("peer: expected a msg3 frame");
    return alice_finalize(decode_msg3(f3.payload), alice);
}

}  // namespace ssgk
