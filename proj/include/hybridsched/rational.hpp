#pragma once

// Exact arithmetic used throughout the library.  Every cost, weight, dual
// variable and certificate comparison is a Rational; doubles appear only in
// the *_dec companion columns of CSV output.

#include <boost/multiprecision/cpp_int.hpp>

#include <cctype>
#include <cstdio>
#include <optional>
#include <string>

namespace hybridsched {

using BigInt = boost::multiprecision::cpp_int;
using Rational = boost::multiprecision::cpp_rational;
using Int = long long;

namespace detail {

inline bool all_digits(const std::string& s) {
    if (s.empty()) return false;
    for (char c : s) {
        if (!std::isdigit(static_cast<unsigned char>(c))) return false;
    }
    return true;
}

} // namespace detail

// Accepts "num" or "num/den" with optional leading '-' on num; den must be a
// positive integer.  No whitespace, no decimals.  Returns nullopt on any
// malformed input instead of throwing so parsers can attach line numbers.
inline std::optional<Rational> parse_rational(const std::string& text) {
    std::string num = text;
    std::string den = "1";
    if (auto slash = text.find('/'); slash != std::string::npos) {
        num = text.substr(0, slash);
        den = text.substr(slash + 1);
    }
    bool negative = false;
    if (!num.empty() && (num[0] == '-' || num[0] == '+')) {
        negative = num[0] == '-';
        num = num.substr(1);
    }
    if (!detail::all_digits(num) || !detail::all_digits(den)) return std::nullopt;
    BigInt n(num);
    BigInt d(den);
    if (d == 0) return std::nullopt;
    if (negative) n = -n;
    return Rational(n, d);
}

// Canonical "num" or "num/den" (denominator omitted when 1).  cpp_rational
// keeps values normalized, so equal rationals format identically.
inline std::string format_rational(const Rational& value) {
    const BigInt num = boost::multiprecision::numerator(value);
    const BigInt den = boost::multiprecision::denominator(value);
    if (den == 1) return num.str();
    return num.str() + "/" + den.str();
}

// Decimal approximation for the *_dec CSV columns.  Not used in any check.
inline std::string format_decimal(const Rational& value) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.12g", value.convert_to<double>());
    return buf;
}

// ceil(value) for value > 0, e.g. the dilation factor m = ceil(2 + eps).
inline Int ceil_positive(const Rational& value) {
    BigInt num = boost::multiprecision::numerator(value);
    BigInt den = boost::multiprecision::denominator(value);
    BigInt q = (num + den - 1) / den;
    return q.convert_to<Int>();
}

} // namespace hybridsched
