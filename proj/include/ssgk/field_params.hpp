#pragma once

#include <vector>

#include "ssgk/bitmatrix.hpp"
#include "ssgk/binary_poly.hpp"
#include "ssgk/exponent.hpp"
#include "ssgk/rng.hpp"

namespace ssgk {

// One supported polynomial degree m: 2^m - 1 factored, with the designated
// large prime factor p. Mersenne prime exponents have cofactor 1.
struct DegreeEntry {
    unsigned m;
    Exponent p;
    Exponent cofactor;  // (2^m - 1) / p
    FactoredOrder factors_of_2m_minus_1;
};

const std::vector<DegreeEntry>& supported_degrees();
const DegreeEntry* find_degree(unsigned m);  // nullptr if absent

// Per-degree public parameters. The matrix dimension is n = m + 4: the
// fixed order-6 block is 4x4 (see build_order6_block).
struct FieldParams {
    unsigned m = 0;
    BinaryPoly poly;  // primitive, degree m
    Exponent p;
    Exponent cofactor;
    FactoredOrder factors_of_2m_minus_1;
    unsigned n = 0;  // = m + 4

    Exponent group_order() const { return 6 * p; }  // order of the master matrix
};

// Factorization of 6p (merges p into {2,3} when p is 2 or 3).
FactoredOrder six_p_factors(const Exponent& p);

// True iff companion(poly) has exact multiplicative order 2^m - 1, which
// characterizes primitivity since poly is the minimal polynomial of its
// companion matrix. `factors` must fully factor 2^m - 1.
bool is_primitive(const BinaryPoly& poly, const FactoredOrder& factors);

// Random monic degree-m polynomials with nonzero constant term until one
// passes is_primitive. Throws UnsupportedDegreeError for m outside the table.
BinaryPoly find_primitive_poly(unsigned m, Rng& rng);

// 4x4 matrix of exact multiplicative order 6: blockdiag of a unipotent
// 2x2 (order 2) and the companion of x^2+x+1 (order 3). A 3x3 block cannot
// work: no element of GL(3,2) has order 6 (see gl_order_census).
BitMatrix build_order6_block();

FieldParams make_field_params(unsigned m, Rng& rng);
FieldParams field_params_with_poly(unsigned m, BinaryPoly poly);

// Master matrix M of verified multiplicative order 6p, conjugated into a
// random secret basis so the block structure is hidden.
struct MasterMatrix {
    BitMatrix matrix;  // = basis * blockdiag(D6, C^cofactor) * basis^-1
    BitMatrix basis;   // secret change of basis
    FieldParams field;
    Exponent order;  // = 6p, verified at construction

    MasterMatrix(BitMatrix mat, BitMatrix bas, FieldParams f, Exponent ord)
        : matrix(std::move(mat)), basis(std::move(bas)),
          field(std::move(f)), order(std::move(ord)) {}
};

MasterMatrix generate_master_matrix(const FieldParams& field, Rng& rng);

}  // namespace ssgk
