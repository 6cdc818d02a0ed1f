#include "meanly/bigindex.hpp"

#include <boost/multiprecision/cpp_int.hpp>

#include <cmath>
#include <stdexcept>

#include "meanly/errors.hpp"

namespace meanly {

namespace {
constexpr double kLn2 = 0.6931471805599453;
}

double ln_big(const BigIndex& n) {
    if (n <= 0) throw DomainError("ln_big: argument must be positive");
    if (n <= BigIndex(1) << 62) {
        return std::log(static_cast<double>(n.convert_to<int64_t>()));
    }
    // n = top * 2^shift with top holding the leading 62 bits
    unsigned bits = boost::multiprecision::msb(n) + 1;
    unsigned shift = bits - 62;
    BigIndex top = n >> shift;
    return std::log(static_cast<double>(top.convert_to<int64_t>())) +
           static_cast<double>(shift) * kLn2;
}

double big_ratio(const BigIndex& a, const BigIndex& b) {
    if (b == 0) throw DomainError("big_ratio: zero denominator");
    if (a == 0) return 0.0;
    bool neg = (a < 0) != (b < 0);
    BigIndex aa = a < 0 ? BigIndex(-a) : a;
    BigIndex bb = b < 0 ? BigIndex(-b) : b;
    double r = std::exp(ln_big(aa) - ln_big(bb));
    // one refinement step recovers full double precision when the ratio is
    // representable: r' = r * (a - r*b) / b correction via exact arithmetic
    // is overkill here; ln_big is already ~1 ulp so exp of the difference is
    // good to ~2-3 ulp, fine for every consumer (tolerances >= 1e-12).
    return neg ? -r : r;
}

LogReal log_from_big(const BigIndex& n) {
    if (n == 0) return LogReal::zero();
    if (n < 0) return LogReal::from_log(ln_big(-n), -1);
    return LogReal::from_log(ln_big(n), +1);
}

std::string big_to_string(const BigIndex& n) { return n.str(); }

BigIndex big_from_string(const std::string& s) {
    try {
        return BigIndex(s);
    } catch (const std::exception&) {
        throw DomainError("not a valid integer literal: '" + s + "'");
    }
}

BigIndex big_isqrt(const BigIndex& n) {
    if (n < 0) throw DomainError("big_isqrt: negative argument");
    return boost::multiprecision::sqrt(n);
}

int64_t big_to_i64_saturating(const BigIndex& n) {
    static const BigIndex lo = std::numeric_limits<int64_t>::min();
    static const BigIndex hi = std::numeric_limits<int64_t>::max();
    if (n <= lo) return std::numeric_limits<int64_t>::min();
    if (n >= hi) return std::numeric_limits<int64_t>::max();
    return n.convert_to<int64_t>();
}

bool fits_i64(const BigIndex& n) {
    static const BigIndex lo = std::numeric_limits<int64_t>::min();
    static const BigIndex hi = std::numeric_limits<int64_t>::max();
    return n >= lo && n <= hi;
}

}  // namespace meanly
