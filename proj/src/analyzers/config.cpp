#include <regex>

#include <json.hpp>

#include "sheetcheck/analyzers.hpp"
#include "util/io.hpp"
#include "util/strings.hpp"

namespace sheetcheck {

void AnalyzerConfig::validate() const {
    auto fraction = [](double v, const char* key) {
        if (!(v > 0 && v <= 1)) throw ConfigError(std::string(key) + " must be in (0,1]");
    };
    fraction(format_consistency_threshold, "format_consistency_threshold");
    fraction(naming_threshold, "naming_threshold");
    if (normalization_min_repeats < 1) throw ConfigError("normalization_min_repeats must be at least 1");
    if (doc_sheet_min_text_cells < 1) throw ConfigError("doc_sheet_min_text_cells must be at least 1");
    if (evidence_limit < 1) throw ConfigError("evidence_limit must be at least 1");
    if (literal_exemptions.empty()) throw ConfigError("literal_exemptions must not be empty");
    if (complex_function_list.empty()) throw ConfigError("complex_function_list must not be empty");
    if (default_sheet_name_pattern.empty()) throw ConfigError("default_sheet_name_pattern must not be empty");
    try {
        std::regex re(default_sheet_name_pattern, std::regex::icase);
    } catch (const std::regex_error& e) {
        throw ConfigError("default_sheet_name_pattern: " + std::string(e.what()));
    }
}

std::string AnalyzerConfig::to_json() const {
    nlohmann::json j;  // std::map-backed, so keys come out sorted
    j["nesting_semantics"] = std::string(formula::to_string(nesting_semantics));
    j["format_consistency_threshold"] = format_consistency_threshold;
    j["normalization_min_repeats"] = normalization_min_repeats;
    j["literal_exemptions"] = literal_exemptions;
    j["complex_function_list"] = complex_function_list;
    j["default_sheet_name_pattern"] = default_sheet_name_pattern;
    j["naming_threshold"] = naming_threshold;
    j["doc_sheet_min_text_cells"] = doc_sheet_min_text_cells;
    j["evidence_limit"] = evidence_limit;
    return j.dump();
}

AnalyzerConfig parse_analyzer_config(std::string_view json_text) {
    nlohmann::json doc;
    try {
        doc = nlohmann::json::parse(json_text);
    } catch (const nlohmann::json::parse_error& e) {
        throw ConfigError(e.what());
    }
    if (!doc.is_object()) throw ConfigError("config must be a JSON object");

    AnalyzerConfig cfg;
    auto number = [](const nlohmann::json& v, const std::string& key) {
        if (!v.is_number()) throw ConfigError(key + " must be a number");
        return v.get<double>();
    };
    auto integer = [](const nlohmann::json& v, const std::string& key) {
        if (!v.is_number_integer()) throw ConfigError(key + " must be an integer");
        return v.get<long long>();
    };
    for (const auto& [key, v] : doc.items()) {
        if (key == "nesting_semantics") {
            if (!v.is_string()) throw ConfigError(key + " must be text");
            auto s = formula::nesting_semantics_from_string(v.get<std::string>());
            if (!s) throw ConfigError("unknown nesting_semantics '" + v.get<std::string>() + "'");
            cfg.nesting_semantics = *s;
        } else if (key == "format_consistency_threshold") {
            cfg.format_consistency_threshold = number(v, key);
        } else if (key == "naming_threshold") {
            cfg.naming_threshold = number(v, key);
        } else if (key == "normalization_min_repeats") {
            cfg.normalization_min_repeats = static_cast<int>(integer(v, key));
        } else if (key == "doc_sheet_min_text_cells") {
            cfg.doc_sheet_min_text_cells = static_cast<int>(integer(v, key));
        } else if (key == "evidence_limit") {
            const auto n = integer(v, key);
            if (n < 1) throw ConfigError("evidence_limit must be at least 1");
            cfg.evidence_limit = static_cast<std::size_t>(n);
        } else if (key == "literal_exemptions") {
            if (!v.is_array()) throw ConfigError(key + " must be a list");
            cfg.literal_exemptions.clear();
            for (const auto& x : v) cfg.literal_exemptions.insert(number(x, key));
        } else if (key == "complex_function_list") {
            if (!v.is_array()) throw ConfigError(key + " must be a list");
            cfg.complex_function_list.clear();
            for (const auto& x : v) {
                if (!x.is_string()) throw ConfigError(key + " entries must be text");
                cfg.complex_function_list.insert(util::to_upper(x.get<std::string>()));
            }
        } else if (key == "default_sheet_name_pattern") {
            if (!v.is_string()) throw ConfigError(key + " must be text");
            cfg.default_sheet_name_pattern = v.get<std::string>();
        } else {
            throw ConfigError("unknown config key '" + key + "'");
        }
    }
    cfg.validate();
    return cfg;
}

AnalyzerConfig load_analyzer_config(const std::string& path) {
    std::string text;
    try {
        text = util::read_file(path);
    } catch (const std::runtime_error& e) {
        throw ConfigError(e.what());
    }
    return parse_analyzer_config(text);
}

}  // namespace sheetcheck
