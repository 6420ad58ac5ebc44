#pragma once

#include <filesystem>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

namespace pointint::cli {

/// Shortest decimal representation that round-trips to the same double.
std::string format_double(double v);

/// Ordered provenance block stamped into every output file. Deliberately
/// free of timestamps: identical runs must produce identical bytes.
struct Provenance {
    std::string command;
    std::vector<std::pair<std::string, std::string>> params;

    void add(std::string key, std::string value) {
        params.emplace_back(std::move(key), std::move(value));
    }
    void add(std::string key, double value) { add(std::move(key), format_double(value)); }
    void add(std::string key, long long value) { add(std::move(key), std::to_string(value)); }
};

/// CSV document: '#'-prefixed provenance lines, a header row, data rows,
/// Unix newlines.
std::string csv_document(const Provenance& prov, const std::vector<std::string>& header,
                         const std::vector<std::vector<std::string>>& rows,
                         const std::vector<std::string>& trailer = {});

nlohmann::ordered_json provenance_json(const Provenance& prov);

/// Write-then-rename so readers never observe a half-written file.
void write_text_atomic(const std::filesystem::path& path, const std::string& content);

}  // namespace pointint::cli
