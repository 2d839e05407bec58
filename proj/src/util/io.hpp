#pragma once

#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>

namespace sheetcheck::util {

// Throws std::runtime_error with the path when the file cannot be opened.
inline std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

}  // namespace sheetcheck::util
