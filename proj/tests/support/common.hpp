#pragma once

#include <unistd.h>

#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include "sheetcheck/workbook.hpp"

namespace testsupport {

inline std::string fixture_path(const std::string& name) { return std::string(SHEETCHECK_TEST_FIXTURES) + "/" + name; }

// Fresh path under the system temp directory; the file itself is not created.
inline std::string temp_path(const std::string& name) {
    static int counter = 0;
    auto dir = std::filesystem::temp_directory_path() / ("sheetcheck-tests-" + std::to_string(::getpid()));
    std::filesystem::create_directories(dir);
    return (dir / (std::to_string(++counter) + "-" + name)).string();
}

inline std::string slurp(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    std::ostringstream s;
    s << in.rdbuf();
    return s.str();
}

inline void spit(const std::string& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    out << text;
}

inline sheetcheck::Workbook fixture(const std::string& json) { return sheetcheck::load_fixture_text(json); }

}  // namespace testsupport
