#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <string>

namespace synmine {

// Exact rational arithmetic. All causal strengths, dependence checks and
// conformance scores are computed without rounding; decimals only appear
// when rendering reports.
using BigInt = boost::multiprecision::cpp_int;
using Rat = boost::multiprecision::cpp_rational;

inline Rat rat(long num, long den = 1) { return Rat(num, den); }

// Fixed-point rendering with the given number of decimal places,
// rounded half away from zero.
inline std::string to_decimal_string(const Rat& r, int places = 6) {
    BigInt num = boost::multiprecision::numerator(r);
    BigInt den = boost::multiprecision::denominator(r);
    bool neg = num < 0;
    if (neg) num = -num;
    BigInt scale = 1;
    for (int i = 0; i < places; ++i) scale *= 10;
    BigInt scaled = num * scale;
    BigInt q = scaled / den;
    BigInt rem = scaled % den;
    if (rem * 2 >= den) q += 1;
    std::string digits = q.str();
    if (static_cast<int>(digits.size()) <= places)
        digits.insert(0, places + 1 - digits.size(), '0');
    std::string out = digits.substr(0, digits.size() - places) + "." +
                      digits.substr(digits.size() - places);
    return neg && q != 0 ? "-" + out : out;
}

inline std::string to_fraction_string(const Rat& r) {
    return boost::multiprecision::numerator(r).str() + "/" +
           boost::multiprecision::denominator(r).str();
}

}  // namespace synmine
