#pragma once

#include <cstdio>
#include <string>

namespace homecourt {

// Output convention: 6 significant digits for ordinary values, scientific
// notation with 3 significant digits for p-values.
inline std::string fmt_value(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.6g", v);
    return buf;
}

inline std::string fmt_pvalue(double p) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.2e", p);
    return buf;
}

inline std::string fmt_fixed(double v, int decimals) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.*f", decimals, v);
    return buf;
}

} // namespace homecourt
