#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace sheetcheck::zip {

struct Entry {
    std::string name;
    std::uint16_t method = 0;
    std::uint16_t flags = 0;
    std::uint32_t crc32 = 0;
    std::uint64_t compressed_size = 0;
    std::uint64_t uncompressed_size = 0;
    std::uint64_t local_header_offset = 0;
};

/// Read-only view of a ZIP archive held in memory. Stored and deflated entries only.
class Archive {
public:
    /// Throws LoadError(not_a_zip_archive) when no central directory can be read.
    explicit Archive(std::string bytes);
    static Archive open(const std::string& path);

    bool contains(const std::string& name) const { return entries_.count(name) != 0; }
    std::optional<std::string> read(const std::string& name) const;
    std::vector<std::string> names() const;

private:
    std::string read_entry(const Entry& e) const;

    std::string bytes_;
    std::map<std::string, Entry> entries_;
};

}  // namespace sheetcheck::zip
