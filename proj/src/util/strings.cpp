#include "util/strings.hpp"

#include <charconv>

namespace sheetcheck::util {

std::string format_double(double v) {
    char buf[64];
    auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
    if (ec != std::errc{}) return std::to_string(v);
    return std::string(buf, ptr);
}

}  // namespace sheetcheck::util
