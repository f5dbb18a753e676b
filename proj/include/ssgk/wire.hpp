#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "ssgk/handshake.hpp"
#include "ssgk/transport.hpp"

namespace ssgk {

// Frame layout: magic "SSGK" | version 0x01 | msg type | payload length
// (u32 LE) | payload. All multi-byte integers little-endian throughout.
enum class MsgType : std::uint8_t {
    msg1 = 0x01,
    msg2 = 0x02,
    msg3 = 0x03,
    params = 0x10,
};

struct Frame {
    MsgType type;
    std::vector<std::uint8_t> payload;
};

inline constexpr std::uint8_t kWireVersion = 0x01;
inline constexpr std::size_t kFrameHeaderSize = 10;
inline constexpr std::uint32_t kMaxPayload = 1u << 24;

// Matrix: n (u16 LE), then n rows of ceil(n/8) bytes each, bit j of a row
// in byte j/8 at bit position j%8 (LSB first). Pad bits must be zero.
std::vector<std::uint8_t> encode_matrix(const BitMatrix& m);
BitMatrix decode_matrix(std::span<const std::uint8_t> in);

// Unsigned big integer: byte count (u16 LE), then little-endian magnitude
// with no leading zero bytes; zero encodes with length 0.
std::vector<std::uint8_t> encode_bigint(const Exponent& v);
Exponent decode_bigint(std::span<const std::uint8_t> in);

// Msg1: t (u16), then t mu then t sigma big integers.
std::vector<std::uint8_t> encode_msg1(const Msg1& m);
Msg1 decode_msg1(std::span<const std::uint8_t> in);

// Msg2: t (u16), then t A-side then t B-side matrices.
std::vector<std::uint8_t> encode_msg2(const Msg2& m);
Msg2 decode_msg2(std::span<const std::uint8_t> in);

// Msg3: one matrix.
std::vector<std::uint8_t> encode_msg3(const Msg3& m);
Msg3 decode_msg3(std::span<const std::uint8_t> in);

// Params: m (u16), p (bigint), t (u16), polynomial coefficient bits (bigint).
std::vector<std::uint8_t> encode_params(const PublicParams& p);
PublicParams decode_params(std::span<const std::uint8_t> in);

std::vector<std::uint8_t> encode_frame(MsgType type, std::span<const std::uint8_t> payload);
Frame decode_frame(std::span<const std::uint8_t> in);

void write_frame(ByteStream& io, MsgType type, std::span<const std::uint8_t> payload);
Frame read_frame(ByteStream& io);

// Unpadded lowercase hex of the first 8 bytes of the encoded key matrix.
// A debugging aid for comparing runs, not a key-derivation function.
std::string key_fingerprint(const SharedKey& key);

}  // namespace ssgk
