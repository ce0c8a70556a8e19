#pragma once

#include <boost/multiprecision/cpp_int.hpp>

namespace openbook {

// Exact arbitrary-precision rational; the coefficient field for all
// symbolic work. Float evaluation is a separate fast path with no
// exactness claim.
using Rational = boost::multiprecision::cpp_rational;
using BigInt = boost::multiprecision::cpp_int;

inline double to_double(const Rational& q) { return q.convert_to<double>(); }

} // namespace openbook
