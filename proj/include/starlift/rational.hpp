#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <string>
#include <string_view>

namespace starlift {

// Exact arbitrary-precision rationals back every probability, capacity, flow
// and multiplicative factor in the library. The privacy factor k = e^eps is
// carried as a rational; eps itself only appears as a float for display.
using Int = boost::multiprecision::cpp_int;
using Rat = boost::multiprecision::number<
    boost::multiprecision::backends::rational_adaptor<boost::multiprecision::backends::cpp_int_backend<>>,
    boost::multiprecision::et_off>;

// Parses "p/q", a plain integer "p", or a plain decimal such as "0.25".
// Throws std::invalid_argument on anything else.
Rat parse_rational(std::string_view text);

// Canonical form "p/q": gcd-reduced, q > 0, the slash always present.
std::string format_rational(const Rat& r);

double to_double(const Rat& r);

// base^exp for non-negative integer exponents.
Rat pow_rational(const Rat& base, unsigned exp);

// Smallest multiple of 10^-(significant_digits-1-floor(log10 x)) that is
// strictly above x. Used to round float-computed privacy factors up so that
// downstream exact checks only ever weaken a claim.
Rat rational_upper_bound(double x, int significant_digits);

Int ceil_to_int(const Rat& r);

}  // namespace starlift
