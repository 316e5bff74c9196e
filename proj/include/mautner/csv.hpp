// Locale-independent CSV cell formatting; %.17g round-trips doubles exactly.
#ifndef MAUTNER_CSV_HPP
#define MAUTNER_CSV_HPP

#include <cstdio>
#include <string>

namespace mautner {

inline std::string g17(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

} // namespace mautner

#endif
