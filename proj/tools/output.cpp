#include "output.hpp"

#include <charconv>
#include <fstream>

#include "pointint/errors.hpp"
#include "pointint/version.hpp"

namespace pointint::cli {

std::string format_double(double v) {
    char buf[32];
    const auto res = std::to_chars(buf, buf + sizeof(buf), v);
    return std::string(buf, res.ptr);
}

std::string csv_document(const Provenance& prov, const std::vector<std::string>& header,
                         const std::vector<std::vector<std::string>>& rows,
                         const std::vector<std::string>& trailer) {
    std::string out;
    out += "# pointint ";
    out += kVersion;
    out += "\n# command: " + prov.command + "\n";
    for (const auto& [key, value] : prov.params) out += "# " + key + ": " + value + "\n";
    for (std::size_t i = 0; i < header.size(); ++i) {
        if (i) out += ',';
        out += header[i];
    }
    out += '\n';
    for (const auto& row : rows) {
        for (std::size_t i = 0; i < row.size(); ++i) {
            if (i) out += ',';
            out += row[i];
        }
        out += '\n';
    }
    for (const auto& line : trailer) out += "# " + line + "\n";
    return out;
}

nlohmann::ordered_json provenance_json(const Provenance& prov) {
    nlohmann::ordered_json j;
    j["tool"] = "pointint";
    j["version"] = kVersion;
    j["command"] = prov.command;
    nlohmann::ordered_json params;
    for (const auto& [key, value] : prov.params) params[key] = value;
    j["params"] = std::move(params);
    return j;
}

void write_text_atomic(const std::filesystem::path& path, const std::string& content) {
    if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
    const std::filesystem::path tmp = path.string() + ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw Error("cannot open output file: " + tmp.string());
        out << content;
        if (!out) throw Error("write failed: " + tmp.string());
    }
    std::filesystem::rename(tmp, path);
}

}  // namespace pointint::cli
