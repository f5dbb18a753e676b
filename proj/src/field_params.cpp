#include "ssgk/field_params.hpp"

#include <array>

#include "ssgk/errors.hpp"

namespace ssgk {

namespace {

constexpr unsigned kGenerationRetries = 1000;

std::vector<DegreeEntry> build_table() {
    auto mersenne = [](unsigned m, const char* p) {
        return DegreeEntry{m, Exponent(p), 1,
                           FactoredOrder::from_factors({{Exponent(p), 1}})};
    };
    std::vector<DegreeEntry> t;
    t.push_back(mersenne(2, "3"));
    t.push_back(mersenne(3, "7"));
    t.push_back(mersenne(5, "31"));
    t.push_back(mersenne(7, "127"));
    // 2^11 - 1 = 2047 = 23 * 89; the designated large prime factor is 89.
    t.push_back(DegreeEntry{11, 89, 23,
                            FactoredOrder::from_factors({{23, 1}, {89, 1}})});
    t.push_back(mersenne(13, "8191"));
    t.push_back(mersenne(17, "131071"));
    t.push_back(mersenne(19, "524287"));
    t.push_back(mersenne(31, "2147483647"));
    t.push_back(mersenne(61, "2305843009213693951"));
    t.push_back(mersenne(89, "618970019642690137449562111"));
    t.push_back(mersenne(127, "170141183460469231731687303715884105727"));
    return t;
}

}  // namespace

const std::vector<DegreeEntry>& supported_degrees() {
    static const std::vector<DegreeEntry> table = build_table();
    return table;
}

const DegreeEntry* find_degree(unsigned m) {
    for (const DegreeEntry& e : supported_degrees())
        if (e.m == m)
            return &e;
    return nullptr;
}

FactoredOrder six_p_factors(const Exponent& p) {
    std::vector<std::pair<Exponent, unsigned>> fs{{2, 1}, {3, 1}};
    bool merged = false;
    for (auto& [q, k] : fs) {
        if (q == p) {
            ++k;
            merged = true;
        }
    }
    if (!merged)
        fs.emplace_back(p, 1);
    return FactoredOrder::from_factors(std::move(fs));
}

bool is_primitive(const BinaryPoly& poly, const FactoredOrder& factors) {
    const int deg = poly.degree();
    if (deg < 1 || !poly.coeff(static_cast<unsigned>(deg)))
        return false;
    if (!poly.coeff(0))
        return false;  // x divides poly, companion is singular
    const BitMatrix c = companion(poly);
    if (!pow(c, factors.value).is_identity())
        return false;
    return order(c, factors) == factors.value;
}

BinaryPoly find_primitive_poly(unsigned m, Rng& rng) {
    const DegreeEntry* entry = find_degree(m);
    if (!entry)
        throw UnsupportedDegreeError(m);
    for (unsigned attempt = 0; attempt < kGenerationRetries; ++attempt) {
        // Monic with nonzero constant term; interior coefficients uniform.
        Exponent bits = 1;
        bit_set(bits, m);
        for (unsigned i = 1; i < m; ++i)
            if (rng.bits(1))
                bit_set(bits, i);
        BinaryPoly cand = BinaryPoly::from_coefficient_bits(bits);
        if (is_primitive(cand, entry->factors_of_2m_minus_1))
            return cand;
    }
    throw RetryExhaustedError("find_primitive_poly: no primitive polynomial found");
}

BitMatrix build_order6_block() {
    BitMatrix unipotent(2);
    unipotent.set(0, 0, true);
    unipotent.set(0, 1, true);
    unipotent.set(1, 1, true);
    const BitMatrix c3 = companion(BinaryPoly::from_exponents({2, 1, 0}));
    const std::array<BitMatrix, 2> blocks{unipotent, c3};
    return block_diag(blocks);
}

FieldParams make_field_params(unsigned m, Rng& rng) {
    return field_params_with_poly(m, find_primitive_poly(m, rng));
}

FieldParams field_params_with_poly(unsigned m, BinaryPoly poly) {
    const DegreeEntry* entry = find_degree(m);
    if (!entry)
        throw UnsupportedDegreeError(m);
    if (poly.degree() != static_cast<int>(m))
        throw std::invalid_argument("field_params_with_poly: polynomial degree != m");
    FieldParams f;
    f.m = m;
    f.poly = std::move(poly);
    f.p = entry->p;
    f.cofactor = entry->cofactor;
    f.factors_of_2m_minus_1 = entry->factors_of_2m_minus_1;
    f.n = m + 4;
    return f;
}

MasterMatrix generate_master_matrix(const FieldParams& field, Rng& rng) {
    const FactoredOrder phi = six_p_factors(field.p);
    const BitMatrix d6 = build_order6_block();
    BinaryPoly poly = field.poly;
    for (unsigned attempt = 0; attempt < kGenerationRetries; ++attempt) {
        const BitMatrix c = companion(poly);
        const BitMatrix sub = pow(c, field.cofactor);
        const std::array<BitMatrix, 2> blocks{d6, sub};
        const BitMatrix n = block_diag(blocks);
        BitMatrix basis = random_nonsingular(field.n, rng);
        BitMatrix m = basis * n * inverse(basis);
        bool annihilated = pow(m, phi.value).is_identity();
        if (annihilated && order(m, phi) == phi.value) {
            FieldParams used = field;
            used.poly = poly;
            return MasterMatrix(std::move(m), std::move(basis), std::move(used), phi.value);
        }
        // Order came out short; try a fresh primitive polynomial.
        poly = find_primitive_poly(field.m, rng);
    }
    throw OrderVerificationError("generate_master_matrix: could not reach order 6p");
}

}  // namespace ssgk
