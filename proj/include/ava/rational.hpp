#ifndef AVA_RATIONAL_HPP
#define AVA_RATIONAL_HPP

#include <boost/multiprecision/gmp.hpp>

#include <string>
#include <string_view>

namespace ava {

/// Exact rational scalar used for every value, threshold, cost and budget.
/// Expression templates are off so `auto` behaves like a plain value type.
using Rational = boost::multiprecision::number<boost::multiprecision::gmp_rational,
                                               boost::multiprecision::et_off>;

/// Parses "3", "-0.25", "1e-3", "7/20".  Throws std::invalid_argument.
Rational parse_rational(std::string_view text);

/// Converts a double through its shortest round-trip decimal form, so 0.1 maps
/// to exactly 1/10 rather than the binary expansion of the double.
Rational rational_from_double(double value);

inline double to_double(const Rational& r) { return r.convert_to<double>(); }

/// True when the denominator has no prime factors other than 2 and 5.
bool has_terminating_decimal(const Rational& r);

/// Decimal text if terminating ("2.2"), otherwise "p/q".
std::string to_string(const Rational& r);

Rational ceil_rational(const Rational& r);

}  // namespace ava

#endif  // AVA_RATIONAL_HPP
