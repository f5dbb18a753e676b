#include <doctest.h>

#include "ssgk/errors.hpp"
#include "ssgk/field_params.hpp"
#include "test_util.hpp"

using namespace ssgk;
using test::naive_order;

namespace {

// Deterministic Miller-Rabin; the fixed base set is proven complete for
// 64-bit inputs and serves as a strong probable-prime screen above that.
bool miller_rabin(const Exponent& n) {
    if (n < 2)
        return false;
    for (int q : {2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37}) {
        if (n == q)
            return true;
        if (n % q == 0)
            return false;
    }
    Exponent d = n - 1;
    unsigned r = 0;
    while (d % 2 == 0) {
        d /= 2;
        ++r;
    }
    for (int a : {2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37}) {
        Exponent x = boost::multiprecision::powm(Exponent(a), d, n);
        if (x == 1 || x == n - 1)
            continue;
        bool composite = true;
        for (unsigned i = 1; i < r; ++i) {
            x = (x * x) % n;
            if (x == n - 1) {
                composite = false;
                break;
            }
        }
        if (composite)
            return false;
    }
    return true;
}

}  // namespace

TEST_CASE("degree table contents") {
    for (unsigned m : {5u, 7u, 13u, 17u, 31u, 61u, 89u, 127u}) {
        const DegreeEntry* e = find_degree(m);
        REQUIRE(e != nullptr);
        CHECK(e->cofactor == 1);
    }
    const DegreeEntry* e5 = find_degree(5);
    CHECK(e5->p == 31);
    const DegreeEntry* e11 = find_degree(11);
    REQUIRE(e11 != nullptr);
    CHECK(e11->p == 89);
    CHECK(e11->cofactor == 23);
    CHECK(find_degree(6) == nullptr);
    CHECK(find_degree(0) == nullptr);
}

TEST_CASE("degree table validates against arithmetic oracles") {
    for (const DegreeEntry& e : supported_degrees()) {
        const Exponent full = (Exponent(1) << e.m) - 1;
        CHECK(e.p * e.cofactor == full);
        CHECK(miller_rabin(e.p));
        CHECK(e.factors_of_2m_minus_1.value == full);
        Exponent rebuilt = 1;
        for (const auto& [q, k] : e.factors_of_2m_minus_1.factors) {
            CHECK(miller_rabin(q));
            for (unsigned i = 0; i < k; ++i)
                rebuilt *= q;
        }
        CHECK(rebuilt == full);
        // desk-scale trial division for the small entries
        if (e.m <= 13) {
            for (Exponent q = 2; q * q <= full; ++q)
                if (full % q == 0) {
                    bool listed = false;
                    for (const auto& [fq, fk] : e.factors_of_2m_minus_1.factors)
                        listed = listed || fq == q;
                    CHECK(listed);
                }
        }
    }
}

TEST_CASE("six_p_factors merges small primes") {
    const FactoredOrder f31 = six_p_factors(31);
    CHECK(f31.value == 186);
    CHECK(f31.factors.size() == 3);
    const FactoredOrder f3 = six_p_factors(3);
    CHECK(f3.value == 18);
    CHECK(f3.factors.size() == 2);
}

TEST_CASE("primitivity test") {
    const DegreeEntry* e5 = find_degree(5);
    REQUIRE(e5 != nullptr);
    const FactoredOrder& f = e5->factors_of_2m_minus_1;

    CHECK(is_primitive(BinaryPoly::from_exponents({5, 2, 0}), f));

    // oracle: a quintic is primitive iff its companion has order exactly 31
    auto oracle = [&](const BinaryPoly& p) {
        if (p.degree() != 5 || !p.coeff(0))
            return false;
        return naive_order(companion(p), 31) == 31;
    };
    const BinaryPoly q = BinaryPoly::from_exponents({5, 4, 3, 2, 0});
    CHECK(is_primitive(q, f) == oracle(q));
    // exhaust all monic quintics with nonzero constant term
    for (unsigned interior = 0; interior < 16; ++interior) {
        Exponent bits = 1;
        bit_set(bits, 5);
        for (unsigned i = 0; i < 4; ++i)
            if ((interior >> i) & 1u)
                bit_set(bits, i + 1);
        const BinaryPoly cand = BinaryPoly::from_coefficient_bits(bits);
        CHECK(is_primitive(cand, f) == oracle(cand));
    }

    // (x+1)^2 is reducible; its companion has order 2
    const FactoredOrder f3 = FactoredOrder::from_factors({{3, 1}});
    CHECK_FALSE(is_primitive(BinaryPoly::from_exponents({2, 0}), f3));
}

TEST_CASE("find_primitive_poly") {
    Rng rng2(1);
    CHECK(find_primitive_poly(2, rng2) == BinaryPoly::from_exponents({2, 1, 0}));

    Rng rng5(20);
    const BinaryPoly p5 = find_primitive_poly(5, rng5);
    CHECK(is_primitive(p5, find_degree(5)->factors_of_2m_minus_1));
    CHECK(p5 == BinaryPoly::from_exponents({5, 4, 2, 1, 0}));  // frozen seeded output
    Rng rng5b(20);
    CHECK(find_primitive_poly(5, rng5b) == p5);  // reproducible

    Rng rng6(1);
    CHECK_THROWS_AS(find_primitive_poly(6, rng6), UnsupportedDegreeError);
}

TEST_CASE("order-6 block") {
    const BitMatrix d = build_order6_block();
    CHECK(d.dim() == 4);
    CHECK(pow(d, 6).is_identity());
    CHECK_FALSE(pow(d, 2).is_identity());
    CHECK_FALSE(pow(d, 3).is_identity());
    CHECK(order(d, FactoredOrder::from_factors({{2, 1}, {3, 1}})) == 6);
    CHECK(naive_order(d, 6) == 6);
}

TEST_CASE("master matrix at m=5") {
    Rng rng(77);
    const FieldParams field = make_field_params(5, rng);
    CHECK(field.n == 9);
    const MasterMatrix master = generate_master_matrix(field, rng);
    CHECK(master.order == 186);
    CHECK(naive_order(master.matrix, 200) == 186);

    // conjugation invariance: same order as the block-diagonal source
    const BitMatrix rebuilt =
        inverse(master.basis) * master.matrix * master.basis;
    CHECK(naive_order(rebuilt, 200) == 186);

    // the three protocol bases
    const FactoredOrder fp = FactoredOrder::from_factors({{31, 1}});
    const FactoredOrder f2p = FactoredOrder::from_factors({{2, 1}, {31, 1}});
    const FactoredOrder f3p = FactoredOrder::from_factors({{3, 1}, {31, 1}});
    CHECK(order(pow(master.matrix, 6), fp) == 31);
    CHECK(order(pow(master.matrix, 3), f2p) == 62);
    CHECK(order(pow(master.matrix, 2), f3p) == 93);

    // exact-order witnesses for p > 6
    CHECK(pow(master.matrix, 6 * 31).is_identity());
    CHECK_FALSE(pow(master.matrix, 3 * 31).is_identity());
    CHECK_FALSE(pow(master.matrix, 2 * 31).is_identity());
    CHECK_FALSE(pow(master.matrix, 6).is_identity());
}

TEST_CASE("master matrix generation fails loudly when 6p is unreachable") {
    // p = 3 shares a factor with 6: the block orders can only reach
    // lcm(6, 3) = 6, never 18, so verification exhausts its retries.
    Rng rng(1);
    const FieldParams field = make_field_params(2, rng);
    CHECK_THROWS_AS(generate_master_matrix(field, rng), OrderVerificationError);
}

TEST_CASE("master matrix at m=11 (composite cofactor)") {
    Rng rng(5);
    const FieldParams field = make_field_params(11, rng);
    CHECK(field.n == 15);
    CHECK(field.cofactor == 23);
    const MasterMatrix master = generate_master_matrix(field, rng);
    CHECK(master.order == 6 * 89);
    CHECK(order(master.matrix, six_p_factors(89)) == 534);
}
