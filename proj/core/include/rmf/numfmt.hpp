#pragma once

#include <cstdio>
#include <cstdlib>
#include <string>

namespace rmf {

// All emitted reals use this: shortest %g form capped at 12 significant
// digits, so identical inputs produce byte-identical files.
inline std::string format_real(double x) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.12g", x);
    return buf;
}

// Round through the 12-digit text form; JSON values pass through here before
// serialization so the emitted text obeys the same cap as CSV/SVG.
inline double round_emitted(double x) {
    return std::strtod(format_real(x).c_str(), nullptr);
}

}  // namespace rmf
