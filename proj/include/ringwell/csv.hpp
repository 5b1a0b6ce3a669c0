#ifndef RINGWELL_CSV_HPP
#define RINGWELL_CSV_HPP

#include <cstdio>
#include <string>

namespace ringwell {

/// Decimal rendering with 17 significant digits: enough to round-trip a
/// double exactly, and the fixed width keeps re-runs byte-identical.
inline std::string fmt17(double x) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", x);
    return buf;
}

} // namespace ringwell

#endif
