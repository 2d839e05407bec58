#include "workbook/zip_archive.hpp"

#include <zlib.h>

#include <cstring>
#include <fstream>
#include <iterator>

#include "sheetcheck/workbook.hpp"

namespace sheetcheck::zip {
namespace {

constexpr std::uint32_t kLocalHeaderSig = 0x04034b50;
constexpr std::uint32_t kCentralHeaderSig = 0x02014b50;
constexpr std::uint32_t kEndOfCentralDirSig = 0x06054b50;
constexpr std::uint32_t kZip64EndSig = 0x06064b50;
constexpr std::uint32_t kZip64LocatorSig = 0x07064b50;

[[noreturn]] void bad(const std::string& detail) {
    throw LoadError(LoadError::Code::not_a_zip_archive, detail);
}

class Reader {
public:
    Reader(const std::string& bytes, std::uint64_t offset) : bytes_(bytes), pos_(offset) {}

    std::uint16_t u16() { return static_cast<std::uint16_t>(take(2)); }
    std::uint32_t u32() { return static_cast<std::uint32_t>(take(4)); }
    std::uint64_t u64() { return take(8); }
    std::string str(std::size_t n) {
        need(n);
        std::string s = bytes_.substr(pos_, n);
        pos_ += n;
        return s;
    }
    void skip(std::size_t n) {
        need(n);
        pos_ += n;
    }
    std::uint64_t pos() const { return pos_; }

private:
    void need(std::uint64_t n) const {
        if (pos_ + n > bytes_.size()) bad("truncated archive");
    }
    std::uint64_t take(int n) {
        need(static_cast<std::uint64_t>(n));
        std::uint64_t v = 0;
        for (int i = 0; i < n; ++i) v |= std::uint64_t(static_cast<unsigned char>(bytes_[pos_ + i])) << (8 * i);
        pos_ += static_cast<std::uint64_t>(n);
        return v;
    }

    const std::string& bytes_;
    std::uint64_t pos_;
};

std::uint64_t find_end_of_central_dir(const std::string& bytes) {
    if (bytes.size() < 22) bad("file too small");
    const std::size_t lowest = bytes.size() > 22 + 0xFFFF ? bytes.size() - 22 - 0xFFFF : 0;
    for (std::size_t i = bytes.size() - 22 + 1; i-- > lowest;) {
        if (static_cast<unsigned char>(bytes[i]) == 0x50 && bytes[i + 1] == 0x4b && bytes[i + 2] == 0x05 &&
            bytes[i + 3] == 0x06) {
            return i;
        }
    }
    bad("no end of central directory record");
}

}  // namespace

Archive::Archive(std::string bytes) : bytes_(std::move(bytes)) {
    const std::uint64_t eocd = find_end_of_central_dir(bytes_);
    Reader r(bytes_, eocd);
    if (r.u32() != kEndOfCentralDirSig) bad("bad end of central directory");
    r.skip(4);  // disk numbers
    r.skip(2);
    std::uint64_t count = r.u16();
    std::uint64_t dir_size = r.u32();
    std::uint64_t dir_offset = r.u32();

    if (count == 0xFFFF || dir_offset == 0xFFFFFFFF) {
        if (eocd < 20) bad("missing zip64 locator");
        Reader loc(bytes_, eocd - 20);
        if (loc.u32() != kZip64LocatorSig) bad("missing zip64 locator");
        loc.skip(4);
        Reader z(bytes_, loc.u64());
        if (z.u32() != kZip64EndSig) bad("bad zip64 end record");
        z.skip(8 + 2 + 2 + 4 + 4 + 8);
        count = z.u64();
        dir_size = z.u64();
        dir_offset = z.u64();
    }
    if (dir_offset + dir_size > bytes_.size()) bad("central directory out of range");

    Reader d(bytes_, dir_offset);
    for (std::uint64_t i = 0; i < count; ++i) {
        if (d.u32() != kCentralHeaderSig) bad("bad central directory entry");
        Entry e;
        d.skip(4);  // versions
        e.flags = d.u16();
        e.method = d.u16();
        d.skip(4);  // time, date
        e.crc32 = d.u32();
        e.compressed_size = d.u32();
        e.uncompressed_size = d.u32();
        const std::uint16_t name_len = d.u16();
        const std::uint16_t extra_len = d.u16();
        const std::uint16_t comment_len = d.u16();
        d.skip(8);  // disk, attributes
        e.local_header_offset = d.u32();
        e.name = d.str(name_len);

        const std::uint64_t extra_end = d.pos() + extra_len;
        while (d.pos() + 4 <= extra_end) {
            const std::uint16_t id = d.u16();
            const std::uint16_t size = d.u16();
            const std::uint64_t field_end = d.pos() + size;
            if (id == 0x0001) {
                if (e.uncompressed_size == 0xFFFFFFFF && d.pos() + 8 <= field_end) e.uncompressed_size = d.u64();
                if (e.compressed_size == 0xFFFFFFFF && d.pos() + 8 <= field_end) e.compressed_size = d.u64();
                if (e.local_header_offset == 0xFFFFFFFF && d.pos() + 8 <= field_end)
                    e.local_header_offset = d.u64();
            }
            d.skip(field_end - d.pos());
        }
        d.skip(extra_end - d.pos());
        d.skip(comment_len);
        entries_.emplace(e.name, std::move(e));
    }
}

Archive Archive::open(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw LoadError(LoadError::Code::io, "cannot open '" + path + "'");
    std::string bytes((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    return Archive(std::move(bytes));
}

std::vector<std::string> Archive::names() const {
    std::vector<std::string> out;
    out.reserve(entries_.size());
    for (const auto& [name, e] : entries_) out.push_back(name);
    return out;
}

std::optional<std::string> Archive::read(const std::string& name) const {
    auto it = entries_.find(name);
    if (it == entries_.end()) return std::nullopt;
    return read_entry(it->second);
}

std::string Archive::read_entry(const Entry& e) const {
    if (e.flags & 0x1) throw LoadError(LoadError::Code::unsupported_feature, "encrypted entry " + e.name);
    Reader r(bytes_, e.local_header_offset);
    if (r.u32() != kLocalHeaderSig) bad("bad local header for " + e.name);
    r.skip(22);
    const std::uint16_t name_len = r.u16();
    const std::uint16_t extra_len = r.u16();
    r.skip(name_len + extra_len);
    const std::uint64_t data_offset = r.pos();
    if (data_offset + e.compressed_size > bytes_.size()) bad("entry data out of range: " + e.name);

    std::string out;
    if (e.method == 0) {
        out = bytes_.substr(data_offset, e.compressed_size);
    } else if (e.method == 8) {
        out.resize(e.uncompressed_size);
        z_stream zs{};
        if (inflateInit2(&zs, -MAX_WBITS) != Z_OK) bad("inflate init failed");
        zs.next_in = reinterpret_cast<Bytef*>(const_cast<char*>(bytes_.data() + data_offset));
        zs.avail_in = static_cast<uInt>(e.compressed_size);
        zs.next_out = reinterpret_cast<Bytef*>(out.data());
        zs.avail_out = static_cast<uInt>(out.size());
        const int rc = inflate(&zs, Z_FINISH);
        inflateEnd(&zs);
        if (rc != Z_STREAM_END || zs.total_out != e.uncompressed_size) bad("corrupt deflate data in " + e.name);
    } else {
        throw LoadError(LoadError::Code::unsupported_feature,
                        "compression method " + std::to_string(e.method) + " in " + e.name);
    }
    const auto crc = ::crc32(0L, reinterpret_cast<const Bytef*>(out.data()), static_cast<uInt>(out.size()));
    if (crc != e.crc32) bad("crc mismatch in " + e.name);
    return out;
}

}  // namespace sheetcheck::zip
