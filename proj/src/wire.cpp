#include "ssgk/wire.hpp"

#include <cstring>

#include "ssgk/errors.hpp"

namespace ssgk {

namespace {

constexpr std::size_t kMaxMatrixDim = 1u << 12;
constexpr char kMagic[4] = {'S', 'S', 'G', 'K'};

void put_u16(std::vector<std::uint8_t>& out, std::uint16_t v) {
    out.push_back(static_cast<std::uint8_t>(v & 0xFF));
    out.push_back(static_cast<std::uint8_t>(v >> 8));
}

void put_u32(std::vector<std::uint8_t>& out, std::uint32_t v) {
    for (int i = 0; i < 4; ++i)
        out.push_back(static_cast<std::uint8_t>((v >> (8 * i)) & 0xFF));
}

struct Cursor {
    std::span<const std::uint8_t> rest;

    std::span<const std::uint8_t> take(std::size_t k) {
        if (rest.size() < k)
            throw TruncatedInputError();
        auto head = rest.first(k);
        rest = rest.subspan(k);
        return head;
    }
    std::uint16_t u16() {
        auto b = take(2);
        return static_cast<std::uint16_t>(b[0] | (b[1] << 8));
    }
    std::uint32_t u32() {
        auto b = take(4);
        return static_cast<std::uint32_t>(b[0]) | (static_cast<std::uint32_t>(b[1]) << 8) |
               (static_cast<std::uint32_t>(b[2]) << 16) |
               (static_cast<std::uint32_t>(b[3]) << 24);
    }
    void expect_done() const {
        if (!rest.empty())
            throw DecodeError("trailing bytes after message");
    }
};

void put_matrix(std::vector<std::uint8_t>& out, const BitMatrix& m) {
    const std::size_t n = m.dim();
    if (n > 0xFFFF)
        throw std::invalid_argument("encode_matrix: dimension exceeds u16");
    put_u16(out, static_cast<std::uint16_t>(n));
    const std::size_t row_bytes = (n + 7) / 8;
    for (std::size_t i = 0; i < n; ++i) {
        const std::uint64_t* row = m.row(i);
        for (std::size_t k = 0; k < row_bytes; ++k)
            out.push_back(static_cast<std::uint8_t>((row[k / 8] >> (8 * (k % 8))) & 0xFF));
    }
}

BitMatrix get_matrix(Cursor& cur) {
    const std::uint16_t n = cur.u16();
    if (n == 0)
        throw DecodeError("matrix dimension must be >= 1");
    if (n > kMaxMatrixDim)
        throw DecodeError("matrix dimension implausibly large");
    const std::size_t row_bytes = (n + 7) / 8;
    BitMatrix m(n);
    for (std::size_t i = 0; i < n; ++i) {
        auto bytes = cur.take(row_bytes);
        for (std::size_t k = 0; k < row_bytes; ++k) {
            const std::uint8_t b = bytes[k];
            for (unsigned bit = 0; bit < 8; ++bit) {
                if (!((b >> bit) & 1u))
                    continue;
                const std::size_t j = k * 8 + bit;
                if (j >= n)
                    throw NonzeroPadBitsError();
                m.set(i, j, true);
            }
        }
    }
    return m;
}

void put_bigint(std::vector<std::uint8_t>& out, const Exponent& v) {
    if (v < 0)
        throw std::invalid_argument("encode_bigint: negative value");
    std::vector<std::uint8_t> mag;
    if (v != 0)
        export_bits(v, std::back_inserter(mag), 8, false);  // LSB first, minimal
    if (mag.size() > 0xFFFF)
        throw std::invalid_argument("encode_bigint: value too large for u16 length");
    put_u16(out, static_cast<std::uint16_t>(mag.size()));
    out.insert(out.end(), mag.begin(), mag.end());
}

Exponent get_bigint(Cursor& cur) {
    const std::uint16_t len = cur.u16();
    if (len == 0)
        return 0;
    auto bytes = cur.take(len);
    if (bytes.back() == 0)
        throw DecodeError("big integer not canonical (leading zero byte)");
    Exponent v;
    import_bits(v, bytes.begin(), bytes.end(), 8, false);
    return v;
}

}  // namespace

std::vector<std::uint8_t> encode_matrix(const BitMatrix& m) {
    std::vector<std::uint8_t> out;
    put_matrix(out, m);
    return out;
}

BitMatrix decode_matrix(std::span<const std::uint8_t> in) {
    Cursor cur{in};
    BitMatrix m = get_matrix(cur);
    cur.expect_done();
    return m;
}

std::vector<std::uint8_t> encode_bigint(const Exponent& v) {
    std::vector<std::uint8_t> out;
    put_bigint(out, v);
    return out;
}

Exponent decode_bigint(std::span<const std::uint8_t> in) {
    Cursor cur{in};
    Exponent v = get_bigint(cur);
    cur.expect_done();
    return v;
}

std::vector<std::uint8_t> encode_msg1(const Msg1& m) {
    if (m.mu.size() != m.sigma.size())
        throw std::invalid_argument("encode_msg1: tuple lengths differ");
    std::vector<std::uint8_t> out;
    put_u16(out, static_cast<std::uint16_t>(m.mu.size()));
    for (const Exponent& v : m.mu)
        put_bigint(out, v);
    for (const Exponent& v : m.sigma)
        put_bigint(out, v);
    return out;
}

Msg1 decode_msg1(std::span<const std::uint8_t> in) {
    Cursor cur{in};
    const std::uint16_t t = cur.u16();
    if (t == 0)
        throw DecodeError("msg1: empty tuples");
    Msg1 m;
    m.mu.reserve(t);
    m.sigma.reserve(t);
    for (unsigned i = 0; i < t; ++i)
        m.mu.push_back(get_bigint(cur));
    for (unsigned i = 0; i < t; ++i)
        m.sigma.push_back(get_bigint(cur));
    cur.expect_done();
    return m;
}

std::vector<std::uint8_t> encode_msg2(const Msg2& m) {
    if (m.a_tuple.size() != m.b_tuple.size())
        throw std::invalid_argument("encode_msg2: tuple lengths differ");
    std::vector<std::uint8_t> out;
    put_u16(out, static_cast<std::uint16_t>(m.a_tuple.size()));
    for (const BitMatrix& a : m.a_tuple)
        put_matrix(out, a);
    for (const BitMatrix& b : m.b_tuple)
        put_matrix(out, b);
    return out;
}

Msg2 decode_msg2(std::span<const std::uint8_t> in) {
    Cursor cur{in};
    const std::uint16_t t = cur.u16();
    if (t == 0)
        throw DecodeError("msg2: empty tuples");
    Msg2 m;
    m.a_tuple.reserve(t);
    m.b_tuple.reserve(t);
    for (unsigned i = 0; i < t; ++i)
        m.a_tuple.push_back(get_matrix(cur));
    for (unsigned i = 0; i < t; ++i)
        m.b_tuple.push_back(get_matrix(cur));
    cur.expect_done();
    return m;
}

std::vector<std::uint8_t> encode_msg3(const Msg3& m) {
    return encode_matrix(m.share);
}

Msg3 decode_msg3(std::span<const std::uint8_t> in) {
    return Msg3{decode_matrix(in)};
}

std::vector<std::uint8_t> encode_params(const PublicParams& p) {
    std::vector<std::uint8_t> out;
    put_u16(out, static_cast<std::uint16_t>(p.field.m));
    put_bigint(out, p.field.p);
    put_u16(out, static_cast<std::uint16_t>(p.t));
    put_bigint(out, p.field.poly.coefficient_bits());
    return out;
}

PublicParams decode_params(std::span<const std::uint8_t> in) {
    Cursor cur{in};
    const std::uint16_t m = cur.u16();
    const Exponent p = get_bigint(cur);
    const std::uint16_t t = cur.u16();
    const Exponent poly_bits = get_bigint(cur);
    cur.expect_done();

    const DegreeEntry* entry = find_degree(m);
    if (!entry)
        throw DecodeError("params: degree not in the parameter table");
    if (p != entry->p)
        throw DecodeError("params: prime does not match the table entry");
    BinaryPoly poly = BinaryPoly::from_coefficient_bits(poly_bits);
    if (poly.degree() != static_cast<int>(m))
        throw DecodeError("params: polynomial degree != m");
    if (t < 4 || entry->p <= t)
        throw DecodeError("params: tuple length out of range");
    return PublicParams{field_params_with_poly(m, std::move(poly)), t};
}

std::vector<std::uint8_t> encode_frame(MsgType type, std::span<const std::uint8_t> payload) {
    if (payload.size() > kMaxPayload)
        throw std::invalid_argument("encode_frame: payload too large");
    std::vector<std::uint8_t> out;
    out.reserve(kFrameHeaderSize + payload.size());
    out.insert(out.end(), kMagic, kMagic + 4);
    out.push_back(kWireVersion);
    out.push_back(static_cast<std::uint8_t>(type));
    put_u32(out, static_cast<std::uint32_t>(payload.size()));
    out.insert(out.end(), payload.begin(), payload.end());
    return out;
}

namespace {

MsgType check_header(std::span<const std::uint8_t> hdr, std::uint32_t& len_out) {
    if (std::memcmp(hdr.data(), kMagic, 4) != 0)
        throw BadFrameError("bad frame magic");
    if (hdr[4] != kWireVersion)
        throw BadFrameError("unsupported frame version");
    const std::uint8_t type = hdr[5];
    if (type != 0x01 && type != 0x02 && type != 0x03 && type != 0x10)
        throw BadFrameError("unknown message type");
    len_out = static_cast<std::uint32_t>(hdr[6]) | (static_cast<std::uint32_t>(hdr[7]) << 8) |
              (static_cast<std::uint32_t>(hdr[8]) << 16) |
              (static_cast<std::uint32_t>(hdr[9]) << 24);
    if (len_out > kMaxPayload)
        throw BadFrameError("frame payload length implausibly large");
    return static_cast<MsgType>(type);
}

}  // namespace

Frame decode_frame(std::span<const std::uint8_t> in) {
    if (in.size() < kFrameHeaderSize)
        throw TruncatedInputError();
    std::uint32_t len = 0;
    const MsgType type = check_header(in.first(kFrameHeaderSize), len);
    if (in.size() - kFrameHeaderSize < len)
        throw TruncatedInputError();
    if (in.size() - kFrameHeaderSize > len)
        throw DecodeError("trailing bytes after frame");
    return Frame{type, {in.begin() + kFrameHeaderSize, in.end()}};
}

void write_frame(ByteStream& io, MsgType type, std::span<const std::uint8_t> payload) {
    io.write_all(encode_frame(type, payload));
}

Frame read_frame(ByteStream& io) {
    std::uint8_t hdr[kFrameHeaderSize];
    io.read_exact(hdr);
    std::uint32_t len = 0;
    const MsgType type = check_header(hdr, len);
    Frame f{type, std::vector<std::uint8_t>(len)};
    if (len > 0)
        io.read_exact(f.payload);
    return f;
}

std::string key_fingerprint(const SharedKey& key) {
    const std::vector<std::uint8_t> enc = encode_matrix(key.key);
    const std::size_t n = std::min<std::size_t>(8, enc.size());
    static const char* hex = "0123456789abcdef";
    std::string out;
    out.reserve(2 * n);
    for (std::size_t i = 0; i < n; ++i) {
        out.push_back(hex[enc[i] >> 4]);
        out.push_back(hex[enc[i] & 0xF]);
    }
    return out;
}

}  // namespace ssgk
