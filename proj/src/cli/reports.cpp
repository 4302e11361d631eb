#include "levypos/reports.hpp"

#include "levypos/errors.hpp"

#include <charconv>
#include <cmath>
#include <fstream>

namespace levypos {

std::uint64_t fnv1a(std::string_view data) {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (const unsigned char c : data) {
        h ^= c;
        h *= 0x100000001b3ULL;
    }
    return h;
}

std::string hex64(std::uint64_t v) {
    static constexpr char digits[] = "0123456789abcdef";
    std::string out(16, '0');
    for (int i = 15; i >= 0; --i) {
        out[static_cast<std::size_t>(i)] = digits[v & 0xF];
        v >>= 4;
    }
    return out;
}

std::string format_number(double v) {
    if (std::isnan(v)) {
        return "nan";
    }
    if (std::isinf(v)) {
        return v > 0 ? "inf" : "-inf";
    }
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof(buf), v);
    return std::string(buf, res.ptr);
}

nlohmann::ordered_json json_number(double v) {
    if (std::isfinite(v)) {
        return v;
    }
    return format_number(v);
}

std::string config_hash(const nlohmann::ordered_json& inputs) {
    return hex64(fnv1a(inputs.dump()));
}

nlohmann::ordered_json provenance_json(const Provenance& p) {
    nlohmann::ordered_json j;
    j["command"] = p.command;
    j["model_label"] = p.model_label;
    j["seed"] = p.seed;
    j["config_hash"] = p.config_hash;
    return j;
}

CsvWriter::CsvWriter(const Provenance& p, std::vector<std::string> columns)
    : width_(columns.size()) {
    text_ += "# command=" + p.command + "\n";
    text_ += "# model_label=" + p.model_label + "\n";
    text_ += "# seed=" + std::to_string(p.seed) + "\n";
    text_ += "# config_hash=" + p.config_hash + "\n";
    row(columns);
}

void CsvWriter::row(const std::vector<double>& values) {
    std::vector<std::string> cells;
    cells.reserve(values.size());
    for (const double v : values) {
        cells.push_back(format_number(v));
    }
    row(cells);
}

void CsvWriter::row(const std::vector<std::string>& cells) {
    if (cells.size() != width_) {
        throw Error("CSV row has " + std::to_string(cells.size()) + " cells, expected " +
                    std::to_string(width_));
    }
    for (std::size_t i = 0; i < cells.size(); ++i) {
        if (i > 0) {
            text_ += ',';
        }
        text_ += cells[i];
    }
    text_ += '\n';
}

void CsvWriter::write(const std::filesystem::path& path) const {
    write_text(path, text_);
}

void write_text(const std::filesystem::path& path, std::string_view text) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) {
        throw InputError("cannot write " + path.string());
    }
    out << text;
    if (!out) {
        throw InputError("write failed for " + path.string());
    }
}

void write_json(const std::filesystem::path& path, const nlohmann::ordered_json& doc) {
    write_text(path, doc.dump(2) + "\n");
}

}  // namespace levypos
