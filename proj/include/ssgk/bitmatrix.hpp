#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "ssgk/binary_poly.hpp"
#include "ssgk/exponent.hpp"
#include "ssgk/rng.hpp"

namespace ssgk {

// Dense square matrix over F2. Rows are bit-packed into 64-bit words,
// bit j of row i = entry (i, j). Pad bits past column n-1 stay zero.
// Values are immutable in practice: all operations return fresh matrices.
class BitMatrix {
public:
    explicit BitMatrix(std::size_t n);
    static BitMatrix identity(std::size_t n);

    std::size_t dim() const { return n_; }
    std::size_t words_per_row() const { return words_; }

    bool get(std::size_t i, std::size_t j) const {
        return (bits_[i * words_ + j / 64] >> (j % 64)) & 1u;
    }
    void set(std::size_t i, std::size_t j, bool v) {
        std::uint64_t& w = bits_[i * words_ + j / 64];
        const std::uint64_t m = std::uint64_t{1} << (j % 64);
        w = v ? (w | m) : (w & ~m);
    }

    std::uint64_t* row(std::size_t i) { return bits_.data() + i * words_; }
    const std::uint64_t* row(std::size_t i) const { return bits_.data() + i * words_; }

    bool is_identity() const;
    std::string to_string() const;  // rows of '0'/'1', for diagnostics

    friend bool operator==(const BitMatrix&, const BitMatrix&) = default;

private:
    std::size_t n_;
    std::size_t words_;
    std::vector<std::uint64_t> bits_;
};

// Product of prime powers, used as an exponent bound whose factorization
// is known (orders of the matrix subgroups are built from {2, 3, p}).
struct FactoredOrder {
    std::vector<std::pair<Exponent, unsigned>> factors;  // (prime, multiplicity)
    Exponent value;

    static FactoredOrder from_factors(std::vector<std::pair<Exponent, unsigned>> fs);
};

BitMatrix operator*(const BitMatrix& a, const BitMatrix& b);

bool is_nonsingular(const BitMatrix& a);
BitMatrix inverse(const BitMatrix& a);  // throws SingularMatrixError

// Left-to-right square-and-multiply; pow(a, 0) is the identity.
BitMatrix pow(const BitMatrix& a, const Exponent& e);

// Exact multiplicative order given a factored annihilating bound:
// smallest d | bound.value with a^d = I. Throws NotAnnihilatedError
// if a^bound.value != I.
Exponent order(const BitMatrix& a, const FactoredOrder& bound);

// Uniform over GL(n, 2) by rejection sampling on uniform bit fills.
BitMatrix random_nonsingular(std::size_t n, Rng& rng);

// Nonsingular (r, s) with r*s != s*r; requires n >= 2.
std::pair<BitMatrix, BitMatrix> random_noncommuting_pair(std::size_t n, Rng& rng);

// Companion matrix of a monic polynomial of degree >= 1: ones on the
// superdiagonal, coefficients c_0..c_{m-1} along the last row.
BitMatrix companion(const BinaryPoly& p);

BitMatrix block_diag(std::span<const BitMatrix> blocks);

// x * a * x^-1; throws SingularMatrixError if x is singular.
BitMatrix conjugate(const BitMatrix& x, const BitMatrix& a);

}  // namespace ssgk
