#include "meanly/logreal.hpp"

#include <cstdio>

namespace meanly {

std::string to_string(LogReal v) {
    if (v.sign == 0) return "0";
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%sexp(%.12g)", v.sign < 0 ? "-" : "",
                  v.logmag);
    return buf;
}

}  // namespace meanly
