#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <cstdint>
#include <string>

#include "meanly/errors.hpp"
#include "meanly/logreal.hpp"

namespace meanly {

// Exact integer index type. Orbit times and anchor positions grow like
// exp(Theta(k^3 log k)) along the anchor sequences, so 64 bits run out near
// the fourth anchor; everything index-valued routes through BigIndex.
using BigIndex = boost::multiprecision::cpp_int;

// Natural log of a positive BigIndex, accurate to ~1 ulp of double: take the
// top bits as a double mantissa and add msb * ln 2.
double ln_big(const BigIndex& n);

// a / b as a double, usable when the quotient fits a double even though the
// operands do not.
double big_ratio(const BigIndex& a, const BigIndex& b);

// exact -> log-domain conversion (sign preserved)
LogReal log_from_big(const BigIndex& n);

// Decimal round-trips for reports and CLI I/O (indices exceed uint64 range).
std::string big_to_string(const BigIndex& n);
BigIndex big_from_string(const std::string& s);

// floor(sqrt(n)) for n >= 0
BigIndex big_isqrt(const BigIndex& n);

// clamp into [int64 min, int64 max]
int64_t big_to_i64_saturating(const BigIndex& n);

// true if n fits an int64 exactly
bool fits_i64(const BigIndex& n);

}  // namespace meanly
