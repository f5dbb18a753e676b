#pragma once

#include <boost/multiprecision/cpp_int.hpp>

namespace ssgk {

// Unsigned arbitrary-precision integer for exponents, primes and moduli.
// Values reach products of 128-bit numbers, so a fixed-width type won't do.
using Exponent = boost::multiprecision::cpp_int;

using boost::multiprecision::gcd;

// Least non-negative residue; boost's % follows the sign of the dividend.
inline Exponent mod_floor(const Exponent& a, const Exponent& n) {
    Exponent r = a % n;
    if (r < 0)
        r += n;
    return r;
}

}  // namespace ssgk
