#ifndef BILOCAL_JSON_FORMAT_HPP
#define BILOCAL_JSON_FORMAT_HPP

#include <cstdio>
#include <span>
#include <string>

namespace bilocal::detail {

// 17 significant digits: enough for exact double round trips.
inline std::string fmt17(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

inline void append_flat_array(std::string& out, std::span<const double> values) {
    out += '[';
    for (size_t i = 0; i < values.size(); ++i) {
        if (i != 0) out += ',';
        out += fmt17(values[i]);
    }
    out += ']';
}

}  // namespace bilocal::detail

#endif
