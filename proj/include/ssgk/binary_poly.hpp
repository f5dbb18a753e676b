#pragma once

#include <initializer_list>
#include <string>

#include "ssgk/exponent.hpp"

namespace ssgk {

// Polynomial over F2, bit i of `bits` = coefficient of x^i.
class BinaryPoly {
public:
    BinaryPoly() = default;  // zero polynomial

    static BinaryPoly from_coefficient_bits(Exponent bits) {
        BinaryPoly p;
        p.bits_ = std::move(bits);
        return p;
    }

    // e.g. from_exponents({5, 2, 0}) is x^5 + x^2 + 1
    static BinaryPoly from_exponents(std::initializer_list<unsigned> exps) {
        Exponent b = 0;
        for (unsigned e : exps)
            bit_set(b, e);
        return from_coefficient_bits(b);
    }

    bool is_zero() const { return bits_ == 0; }
    int degree() const { return is_zero() ? -1 : static_cast<int>(msb(bits_)); }
    bool coeff(unsigned i) const { return bit_test(bits_, i); }
    const Exponent& coefficient_bits() const { return bits_; }

    std::string to_string() const {
        if (is_zero())
            return "0";
        std::string s;
        for (int i = degree(); i >= 0; --i) {
            if (!coeff(static_cast<unsigned>(i)))
                continue;
            if (!s.empty())
                s += " + ";
            if (i == 0)
                s += "1";
            else if (i == 1)
                s += "x";
            else
                s += "x^" + std::to_string(i);
        }
        return s;
    }

    friend bool operator==(const BinaryPoly&, const BinaryPoly&) = default;

private:
    Exponent bits_;
};

}  // namespace ssgk
