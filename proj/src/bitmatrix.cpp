#include "ssgk/bitmatrix.hpp"

#include <bit>
#include <stdexcept>

#include "ssgk/errors.hpp"

namespace ssgk {

BitMatrix::BitMatrix(std::size_t n)
    : n_(n), words_((n + 63) / 64), bits_(n * words_, 0) {
    if (n == 0)
        throw std::invalid_argument("BitMatrix dimension must be >= 1");
}

BitMatrix BitMatrix::identity(std::size_t n) {
    BitMatrix m(n);
    for (std::size_t i = 0; i < n; ++i)
        m.set(i, i, true);
    return m;
}

bool BitMatrix::is_identity() const {
    return *this == identity(n_);
}

std::string BitMatrix::to_string() const {
    std::string s;
    s.reserve(n_ * (n_ + 1));
    for (std::size_t i = 0; i < n_; ++i) {
        for (std::size_t j = 0; j < n_; ++j)
            s += get(i, j) ? '1' : '0';
        s += '\n';
    }
    return s;
}

FactoredOrder FactoredOrder::from_factors(std::vector<std::pair<Exponent, unsigned>> fs) {
    FactoredOrder fo;
    fo.factors = std::move(fs);
    fo.value = 1;
    for (const auto& [q, k] : fo.factors)
        for (unsigned i = 0; i < k; ++i)
            fo.value *= q;
    return fo;
}

BitMatrix operator*(const BitMatrix& a, const BitMatrix& b) {
    if (a.dim() != b.dim())
        throw std::invalid_argument("BitMatrix multiply: dimension mismatch");
    const std::size_t n = a.dim();
    const std::size_t w = a.words_per_row();
    BitMatrix out(n);
    // Row i of the product is the XOR of the rows of b selected by the set
    // bits of row i of a (word-parallel, no per-entry arithmetic).
    for (std::size_t i = 0; i < n; ++i) {
        std::uint64_t* dst = out.row(i);
        const std::uint64_t* ai = a.row(i);
        for (std::size_t wk = 0; wk < w; ++wk) {
            std::uint64_t word = ai[wk];
            while (word) {
                const unsigned bit = static_cast<unsigned>(std::countr_zero(word));
                word &= word - 1;
                const std::uint64_t* bk = b.row(wk * 64 + bit);
                for (std::size_t t = 0; t < w; ++t)
                    dst[t] ^= bk[t];
            }
        }
    }
    return out;
}

namespace {

// Gauss-Jordan over F2 on [a | rhs]. Returns false at the first missing
// pivot. rhs may be null (rank probe only).
bool eliminate(BitMatrix& a, BitMatrix* rhs) {
    const std::size_t n = a.dim();
    const std::size_t w = a.words_per_row();
    for (std::size_t col = 0; col < n; ++col) {
        std::size_t piv = col;
        while (piv < n && !a.get(piv, col))
            ++piv;
        if (piv == n)
            return false;
        if (piv != col) {
            for (std::size_t t = 0; t < w; ++t)
                std::swap(a.row(col)[t], a.row(piv)[t]);
            if (rhs)
                for (std::size_t t = 0; t < w; ++t)
                    std::swap(rhs->row(col)[t], rhs->row(piv)[t]);
        }
        for (std::size_t i = 0; i < n; ++i) {
            if (i == col || !a.get(i, col))
                continue;
            for (std::size_t t = 0; t < w; ++t)
                a.row(i)[t] ^= a.row(col)[t];
            if (rhs)
                for (std::size_t t = 0; t < w; ++t)
                    rhs->row(i)[t] ^= rhs->row(col)[t];
        }
    }
    return true;
}

}  // namespace

bool is_nonsingular(const BitMatrix& a) {
    BitMatrix work = a;
    return eliminate(work, nullptr);
}

BitMatrix inverse(const BitMatrix& a) {
    BitMatrix work = a;
    BitMatrix inv = BitMatrix::identity(a.dim());
    if (!eliminate(work, &inv))
        throw SingularMatrixError();
    return inv;
}

BitMatrix pow(const BitMatrix& a, const Exponent& e) {
    if (e < 0)
        throw std::invalid_argument("pow: negative exponent");
    BitMatrix acc = BitMatrix::identity(a.dim());
    if (e == 0)
        return acc;
    for (int i = static_cast<int>(msb(e)); i >= 0; --i) {
        acc = acc * acc;
        if (bit_test(e, static_cast<unsigned>(i)))
            acc = acc * a;
    }
    return acc;
}

Exponent order(const BitMatrix& a, const FactoredOrder& bound) {
    if (!pow(a, bound.value).is_identity())
        throw NotAnnihilatedError();
    Exponent d = bound.value;
    for (const auto& [q, mult] : bound.factors) {
        for (unsigned i = 0; i < mult; ++i) {
            if (d % q != 0)
                break;
            Exponent cand = d / q;
            if (pow(a, cand).is_identity())
                d = cand;
            else
                break;
        }
    }
    return d;
}

BitMatrix random_nonsingular(std::size_t n, Rng& rng) {
    if (n == 0)
        throw std::invalid_argument("random_nonsingular: dimension must be >= 1");
    const std::size_t w = (n + 63) / 64;
    const unsigned tail = static_cast<unsigned>(n % 64);
    for (;;) {
        BitMatrix m(n);
        for (std::size_t i = 0; i < n; ++i) {
            std::uint64_t* r = m.row(i);
            for (std::size_t t = 0; t < w; ++t)
                r[t] = rng.next_u64();
            if (tail)
                r[w - 1] &= (std::uint64_t{1} << tail) - 1;
        }
        if (is_nonsingular(m))
            return m;
    }
}

std::pair<BitMatrix, BitMatrix> random_noncommuting_pair(std::size_t n, Rng& rng) {
    if (n < 2)
        throw std::invalid_argument("random_noncommuting_pair: GL(1,2) is abelian, need n >= 2");
    for (;;) {
        BitMatrix r = random_nonsingular(n, rng);
        BitMatrix s = random_nonsingular(n, rng);
        if (!(r * s == s * r))
            return {std::move(r), std::move(s)};
    }
}

BitMatrix companion(const BinaryPoly& p) {
    const int deg = p.degree();
    if (deg < 1)
        throw std::invalid_argument("companion: polynomial must have degree >= 1");
    if (!p.coeff(static_cast<unsigned>(deg)))
        throw std::invalid_argument("companion: polynomial must be monic");
    const std::size_t m = static_cast<std::size_t>(deg);
    BitMatrix c(m);
    for (std::size_t i = 0; i + 1 < m; ++i)
        c.set(i, i + 1, true);
    for (std::size_t j = 0; j < m; ++j)
        c.set(m - 1, j, p.coeff(static_cast<unsigned>(j)));
    return c;
}

BitMatrix block_diag(std::span<const BitMatrix> blocks) {
    if (blocks.empty())
        throw std::invalid_argument("block_diag: need at least one block");
    std::size_t n = 0;
    for (const BitMatrix& b : blocks)
        n += b.dim();
    BitMatrix out(n);
    std::size_t off = 0;
    for (const BitMatrix& b : blocks) {
        for (std::size_t i = 0; i < b.dim(); ++i)
            for (std::size_t j = 0; j < b.dim(); ++j)
                if (b.get(i, j))
                    out.set(off + i, off + j, true);
        off += b.dim();
    }
    return out;
}

BitMatrix conjugate(const BitMatrix& x, const BitMatrix& a) {
    if (x.dim() != a.dim())
        throw std::invalid_argument("conjugate: dimension mismatch");
    return x * a * inverse(x);
}

}  // namespace ssgk
