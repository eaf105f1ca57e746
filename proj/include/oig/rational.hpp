#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <cstdint>
#include <string>

#include "oig/error.hpp"

namespace oig
{
    using BigInt = boost::multiprecision::cpp_int;
    using Rational = boost::multiprecision::cpp_rational;

    // Parses "p", "-p", or "p/q" with q > 0. No whitespace, no decimals.
    inline Rational parse_rational(const std::string & text)
    {
        auto digits_ok = [](const std::string & part, bool allow_sign) {
            if (part.empty())
                return false;
            std::size_t i = (allow_sign && (part[0] == '-' || part[0] == '+')) ? 1 : 0;
            if (i == part.size())
                return false;
            for (; i < part.size(); ++i)
                if (part[i] < '0' || part[i] > '9')
                    return false;
            return true;
        };

        auto slash = text.find('/');
        if (slash == std::string::npos) {
            if (! digits_ok(text, true))
                throw Error("not a rational: '" + text + "'");
            return Rational(BigInt(text));
        }

        std::string num = text.substr(0, slash), den = text.substr(slash + 1);
        if (! digits_ok(num, true) || ! digits_ok(den, false))
            throw Error("not a rational: '" + text + "'");
        BigInt d(den);
        if (d == 0)
            throw Error("zero denominator: '" + text + "'");
        return Rational(BigInt(num), d);
    }

    // Canonical form: reduced, "p" when the denominator is 1, else "p/q".
    inline std::string format_rational(const Rational & value)
    {
        std::string num = numerator(value).str();
        if (denominator(value) == 1)
            return num;
        return num + "/" + denominator(value).str();
    }

    // value / (a * b) as an exact rational, overflow-safe.
    inline Rational rational_over(std::int64_t value, std::int64_t a, std::int64_t b)
    {
        return Rational(BigInt(value), BigInt(a) * BigInt(b));
    }

    inline double rational_to_double(const Rational & value)
    {
        return value.convert_to<double>();
    }
}
