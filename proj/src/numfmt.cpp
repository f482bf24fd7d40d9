#include "p2n/numfmt.hpp"

#include <charconv>
#include <cmath>

namespace p2n {

void append_double(std::string& out, double value) {
    if (value == 0.0 && std::signbit(value)) {
        out += "-0.0";
        return;
    }
    char buf[32];
    auto res = std::to_chars(buf, buf + sizeof buf, value);
    out.append(buf, res.ptr);
}

std::string format_double(double value) {
    std::string s;
    append_double(s, value);
    return s;
}

std::optional<double> parse_double(std::string_view text) {
    if (!text.empty() && text.front() == '+') text.remove_prefix(1);
    double v = 0.0;
    auto res = std::from_chars(text.data(), text.data() + text.size(), v);
    if (res.ec != std::errc{} || res.ptr != text.data() + text.size()) return std::nullopt;
    return v;
}

}  // namespace p2n
