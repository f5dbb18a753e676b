#pragma once

#include <cstdint>
#include <span>
#include <vector>

namespace ssgk {

// Ordered, reliable byte stream. That is the whole transport contract:
// anything satisfying it (TCP socket, socketpair, pipe) can carry a
// handshake.
class ByteStream {
public:
    virtual ~ByteStream() = default;
    virtual void write_all(std::span<const std::uint8_t> data) = 0;
    virtual void read_exact(std::span<std::uint8_t> out) = 0;
};

// Tee wrapper for tests: forwards to the inner stream and keeps a copy of
// everything sent and received.
class RecordingStream final : public ByteStream {
public:
    explicit RecordingStream(ByteStream& inner) : inner_(inner) {}

    void write_all(std::span<const std::uint8_t> data) override {
        inner_.write_all(data);
        sent_.insert(sent_.end(), data.begin(), data.end());
    }
    void read_exact(std::span<std::uint8_t> out) override {
        inner_.read_exact(out);
        received_.insert(received_.end(), out.begin(), out.end());
    }

    const std::vector<std::uint8_t>& sent() const { return sent_; }
    const std::vector<std::uint8_t>& received() const { return received_; }

private:
    ByteStream& inner_;
    std::vector<std::uint8_t> sent_;
    std::vector<std::uint8_t> received_;
};

}  // namespace ssgk
