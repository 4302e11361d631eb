#pragma once

#include <json.hpp>

#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

namespace levypos {

[[nodiscard]] std::uint64_t fnv1a(std::string_view data);
[[nodiscard]] std::string hex64(std::uint64_t v);

// Shortest text that reads back to the same double; inf, -inf and nan spelled out.
[[nodiscard]] std::string format_number(double v);

// Finite values as JSON numbers, non-finite ones as the strings "inf", "-inf", "nan".
[[nodiscard]] nlohmann::ordered_json json_number(double v);

// Identifies the run that produced a file.
struct Provenance {
    std::string command;
    std::string model_label;
    std::uint64_t seed = 0;
    std::string config_hash;
};

// Hash of the canonical form of the run inputs.
[[nodiscard]] std::string config_hash(const nlohmann::ordered_json& inputs);

[[nodiscard]] nlohmann::ordered_json provenance_json(const Provenance& p);

// CSV with '#' comment lines carrying the provenance, then a header row.
class CsvWriter {
public:
    CsvWriter(const Provenance& p, std::vector<std::string> columns);

    void row(const std::vector<double>& values);
    void row(const std::vector<std::string>& cells);

    [[nodiscard]] const std::string& text() const noexcept { return text_; }
    void write(const std::filesystem::path& path) const;

private:
    std::size_t width_;
    std::string text_;
};

void write_text(const std::filesystem::path& path, std::string_view text);
void write_json(const std::filesystem::path& path, const nlohmann::ordered_json& doc);

}  // namespace levypos
