#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <string>

#include "qlbridge/errors.hpp"

namespace qlb {

// Exact arbitrary-precision rational. All probability arithmetic in the
// model layer is carried out on this type; doubles appear only at
// reporting boundaries.
using Rational = boost::multiprecision::cpp_rational;
using BigInt = boost::multiprecision::cpp_int;

inline double to_double(const Rational& r) { return r.template convert_to<double>(); }

inline std::string to_string(const Rational& r) { return r.str(); }

// Accepts "p/q", "p", and plain decimal forms like "0.25".
inline Rational parse_rational(const std::string& text) {
    try {
        auto slash = text.find('/');
        if (slash != std::string::npos) {
            BigInt num(text.substr(0, slash));
            BigInt den(text.substr(slash + 1));
            if (den == 0) throw InputError("rational with zero denominator: " + text);
            return Rational(num, den);
        }
        auto dot = text.find('.');
        if (dot != std::string::npos) {
            std::string digits = text.substr(0, dot) + text.substr(dot + 1);
            BigInt den = 1;
            for (std::size_t i = dot + 1; i < text.size(); ++i) den *= 10;
            return Rational(BigInt(digits), den);
        }
        return Rational(BigInt(text));
    } catch (const std::exception&) {
        throw InputError("cannot parse rational value: '" + text + "'");
    }
}

} // namespace qlb
