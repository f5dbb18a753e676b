#pragma once

#include <cstdint>
#include <optional>
#include <set>
#include <vector>

#include "ssgk/bitmatrix.hpp"
#include "ssgk/exponent.hpp"
#include "ssgk/handshake.hpp"
#include "ssgk/rng.hpp"

namespace ssgk {

// The reduction's quadruple (g, g^a, g^b, g^ab-or-g^c) over the hidden
// order-p generator. Built from a finished run by the helpers below.
struct DdhQuadruple {
    BitMatrix g1, g2, g3, g4;
};

// One congruence sum(coeffs_i * x_i) = rhs (mod modulus).
struct CongruenceRow {
    std::vector<Exponent> coeffs;
    Exponent rhs;
    Exponent modulus;
};

// What the dlog adversary can assemble. `unknown_count` counts the
// underlying unknowns; `coeff rows` are the linearized presentation
// (each nonlinear product folded into one column), whose rank is
// computed by unit-pivot elimination per modulus.
struct AssembledSystem {
    std::vector<CongruenceRow> rows;
    std::size_t equation_count = 0;
    std::size_t unknown_count = 0;
    std::size_t rank = 0;
};

struct AttackReport {
    std::vector<Exponent> c;  // dlog of a_tuple[j] to base a_tuple[0], j >= 1
    std::vector<Exponent> d;  // dlog of b_tuple[j] to base b_tuple[0]
    AssembledSystem system_a;      // from the c dlogs, mod 2p
    AssembledSystem system_b;      // from the d dlogs, mod 3p
    AssembledSystem system_theta;  // the two public weighted-sum congruences

    // Exhaustive enumeration at small p of (alpha', zeta_1') consistent
    // with the c observations and (gamma', zeta_1') consistent with d,
    // collapsed into the distinct key-exponent ratios gamma' * alpha'^-1.
    std::vector<Exponent> candidate_ratios;
    // share^ratio for each candidate ratio, deduplicated: the keys the
    // attack cannot choose between.
    std::vector<BitMatrix> implied_keys;
    // Distinct in-range solutions of the theta system (first few found).
    std::vector<std::vector<Exponent>> theta_candidates;

    bool secrets_checked = false;
    bool secrets_consistent = false;
};

// Smallest e in [0, max_exp] with base^e = target, by incremental
// multiplication. max_exp must be desk-scale (<= ~10^6).
std::optional<Exponent> brute_dlog(const BitMatrix& base, const BitMatrix& target,
                                   const Exponent& max_exp);

// True iff no x in [1, 6p] maps `a` onto `b` by exponentiation, i.e. `b`
// lies outside the cyclic group generated by `a`. Exhaustive.
bool cross_power_scan(const BitMatrix& a, const BitMatrix& b, const Exponent& p);

// Multiplicative orders realized in GL(n, 2), by enumeration of all 2^(n^2)
// candidate matrices; n <= 4.
std::set<std::uint64_t> gl_order_census(unsigned n);

// Runs the dlog-oracle attack against one transcript: solves every c_j and
// d_j by brute force, assembles the three congruence systems, enumerates
// candidate secrets at small p, and (with the true secrets supplied)
// verifies that they satisfy every assembled equation.
AttackReport mount_dlog_attack(const Transcript& transcript,
                               const PublicParams& params,
                               const AliceSecret* alice = nullptr,
                               const BobSecret* bob = nullptr);

// A genuine Diffie-Hellman quadruple over the run's hidden generator.
DdhQuadruple proper_quadruple(const LocalRun& run);
// Same first three slots, last slot a random non-matching power.
DdhQuadruple random_quadruple(const LocalRun& run, Rng& rng);

// The reduction's transcript simulator: maps a quadruple (plus the private
// matrices) to a full protocol transcript with the same structure as a
// real run. The first tuple elements are formed from the quadruple's base
// slots directly; the rest use fresh random exponents, re-rolled until the
// order tests (the executable form of the unit-exponent conditions) pass.
Transcript simulate_ddh_transcript(const DdhQuadruple& quad,
                                   const MasterMatrix& master,
                                   const BitMatrix& a_conj, const BitMatrix& b_conj,
                                   const PublicParams& params, Rng& rng);

// True iff every a_tuple entry has exact order 2p, every b_tuple entry
// exact order 3p, and the share and key have order dividing p.
bool verify_transcript_orders(const Transcript& transcript, const Exponent& p);

}  // namespace ssgk
