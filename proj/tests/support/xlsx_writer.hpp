#pragma once

// Minimal .xlsx writer for tests: a ZIP container (stored or deflated entries)
// around hand-written SpreadsheetML parts.

#include <zlib.h>

#include <cstdint>
#include <fstream>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace testsupport {

class ZipWriter {
public:
    void add(const std::string& name, const std::string& data, bool deflate = true) {
        Entry e;
        e.name = name;
        e.crc = crc32(0L, reinterpret_cast<const Bytef*>(data.data()), static_cast<uInt>(data.size()));
        e.size = static_cast<std::uint32_t>(data.size());
        e.method = deflate ? 8 : 0;
        e.payload = deflate ? raw_deflate(data) : data;
        e.offset = static_cast<std::uint32_t>(out_.size());
        put32(0x04034b50);
        put16(20);
        put16(0);
        put16(e.method);
        put16(0);
        put16(0x21);
        put32(e.crc);
        put32(static_cast<std::uint32_t>(e.payload.size()));
        put32(e.size);
        put16(static_cast<std::uint16_t>(name.size()));
        put16(0);
        out_ += name;
        out_ += e.payload;
        entries_.push_back(std::move(e));
    }

    std::string finish() {
        const auto cd_start = static_cast<std::uint32_t>(out_.size());
        for (const auto& e : entries_) {
            put32(0x02014b50);
            put16(20);
            put16(20);
            put16(0);
            put16(e.method);
            put16(0);
            put16(0x21);
            put32(e.crc);
            put32(static_cast<std::uint32_t>(e.payload.size()));
            put32(e.size);
            put16(static_cast<std::uint16_t>(e.name.size()));
            put16(0);
            put16(0);
            put16(0);
            put16(0);
            put32(0);
            put32(e.offset);
            out_ += e.name;
        }
        const auto cd_size = static_cast<std::uint32_t>(out_.size()) - cd_start;
        put32(0x06054b50);
        put16(0);
        put16(0);
        put16(static_cast<std::uint16_t>(entries_.size()));
        put16(static_cast<std::uint16_t>(entries_.size()));
        put32(cd_size);
        put32(cd_start);
        put16(0);
        return out_;
    }

private:
    struct Entry {
        std::string name, payload;
        std::uint32_t crc = 0, size = 0, offset = 0;
        std::uint16_t method = 0;
    };

    static std::string raw_deflate(const std::string& data) {
        z_stream zs{};
        if (deflateInit2(&zs, Z_BEST_COMPRESSION, Z_DEFLATED, -15, 8, Z_DEFAULT_STRATEGY) != Z_OK)
            throw std::runtime_error("deflateInit2");
        std::string out(deflateBound(&zs, static_cast<uLong>(data.size())), '\0');
        zs.next_in = reinterpret_cast<Bytef*>(const_cast<char*>(data.data()));
        zs.avail_in = static_cast<uInt>(data.size());
        zs.next_out = reinterpret_cast<Bytef*>(out.data());
        zs.avail_out = static_cast<uInt>(out.size());
        deflate(&zs, Z_FINISH);
        out.resize(zs.total_out);
        deflateEnd(&zs);
        return out;
    }
    void put16(std::uint16_t v) {
        out_ += static_cast<char>(v & 0xff);
        out_ += static_cast<char>(v >> 8);
    }
    void put32(std::uint32_t v) {
        put16(static_cast<std::uint16_t>(v & 0xffff));
        put16(static_cast<std::uint16_t>(v >> 16));
    }

    std::string out_;
    std::vector<Entry> entries_;
};

struct XlsxSheet {
    std::string name;
    std::string body;  // children of <worksheet>: sheetViews, sheetData, dataValidations, ...
    std::vector<std::pair<std::string, std::string>> comments;  // (A1 ref, text)
    std::string vml;    // legacy drawing part, optional
    bool chartsheet = false;
};

struct XlsxBuilder {
    std::vector<XlsxSheet> sheets;
    std::vector<std::string> shared_strings;
    std::string styles;          // full styles.xml; empty for none
    std::string defined_names;   // <definedName> elements
    bool deflate = true;
    bool include_workbook = true;

    static std::string ns() {
        return "xmlns=\"http://schemas.openxmlformats.org/spreadsheetml/2006/main\" "
               "xmlns:r=\"http://schemas.openxmlformats.org/officeDocument/2006/relationships\"";
    }
    static std::string rel(const std::string& id, const std::string& type, const std::string& target) {
        return "<Relationship Id=\"" + id + "\" Type=\"http://schemas.openxmlformats.org/officeDocument/2006/relationships/" +
               type + "\" Target=\"" + target + "\"/>";
    }
    static std::string rels(const std::string& inner) {
        return "<?xml version=\"1.0\" encoding=\"UTF-8\"?><Relationships "
               "xmlns=\"http://schemas.openxmlformats.org/package/2006/relationships\">" + inner + "</Relationships>";
    }
    static std::string escape(const std::string& s) {
        std::string out;
        for (char c : s) {
            if (c == '&') out += "&amp;";
            else if (c == '<') out += "&lt;";
            else if (c == '>') out += "&gt;";
            else if (c == '"') out += "&quot;";
            else out += c;
        }
        return out;
    }

    std::string build() const {
        ZipWriter zip;
        zip.add("[Content_Types].xml",
                "<?xml version=\"1.0\" encoding=\"UTF-8\"?><Types "
                "xmlns=\"http://schemas.openxmlformats.org/package/2006/content-types\"><Default Extension=\"xml\" "
                "ContentType=\"application/xml\"/></Types>", deflate);
        zip.add("_rels/.rels", rels(rel("rId1", "officeDocument", "xl/workbook.xml")), deflate);
        if (!include_workbook) return zip.finish();

        std::string wb_rels, sheet_list;
        for (std::size_t i = 0; i < sheets.size(); ++i) {
            const auto& s = sheets[i];
            const std::string n = std::to_string(i + 1);
            const std::string id = "rId" + std::to_string(i + 10);
            const std::string part = (s.chartsheet ? "chartsheets/sheet" : "worksheets/sheet") + n + ".xml";
            wb_rels += rel(id, s.chartsheet ? "chartsheet" : "worksheet", part);
            sheet_list += "<sheet name=\"" + escape(s.name) + "\" sheetId=\"" + n + "\" r:id=\"" + id + "\"/>";
            if (s.chartsheet) {
                zip.add("xl/" + part, "<?xml version=\"1.0\"?><chartsheet " + ns() + "/>", deflate);
                continue;
            }
            std::string sheet_rels;
            if (!s.comments.empty()) {
                std::string list;
                for (const auto& [ref, text] : s.comments)
                    list += "<comment ref=\"" + ref + "\" authorId=\"0\"><text><r><t>" + escape(text) + "</t></r></text></comment>";
                zip.add("xl/comments" + n + ".xml",
                        "<?xml version=\"1.0\"?><comments " + ns() + "><authors><author>t</author></authors><commentList>" +
                            list + "</commentList></comments>", deflate);
                sheet_rels += rel("rIdC", "comments", "../comments" + n + ".xml");
            }
            if (!s.vml.empty()) {
                zip.add("xl/drawings/vmlDrawing" + n + ".vml", s.vml, deflate);
                sheet_rels += rel("rIdV", "vmlDrawing", "../drawings/vmlDrawing" + n + ".vml");
            }
            if (!sheet_rels.empty()) zip.add("xl/worksheets/_rels/sheet" + n + ".xml.rels", rels(sheet_rels), deflate);
            zip.add("xl/" + part, "<?xml version=\"1.0\" encoding=\"UTF-8\"?><worksheet " + ns() + ">" + s.body + "</worksheet>", deflate);
        }
        if (!shared_strings.empty()) {
            std::string si;
            for (const auto& s : shared_strings) si += "<si><t>" + escape(s) + "</t></si>";
            zip.add("xl/sharedStrings.xml", "<?xml version=\"1.0\"?><sst " + ns() + ">" + si + "</sst>", deflate);
            wb_rels += rel("rIdS", "sharedStrings", "sharedStrings.xml");
        }
        if (!styles.empty()) {
            zip.add("xl/styles.xml", styles, deflate);
            wb_rels += rel("rIdT", "styles", "styles.xml");
        }
        zip.add("xl/_rels/workbook.xml.rels", rels(wb_rels), deflate);
        std::string names = defined_names.empty() ? "" : "<definedNames>" + defined_names + "</definedNames>";
        zip.add("xl/workbook.xml",
                "<?xml version=\"1.0\" encoding=\"UTF-8\"?><workbook " + ns() + "><sheets>" + sheet_list + "</sheets>" +
                    names + "</workbook>", deflate);
        return zip.finish();
    }

    void write(const std::string& path) const {
        std::ofstream f(path, std::ios::binary);
        f << build();
        if (!f) throw std::runtime_error("cannot write " + path);
    }
};

}  // namespace testsupport
