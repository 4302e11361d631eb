#pragma once

#include "levypos/levy_model.hpp"

#include <filesystem>
#include <string>
#include <string_view>

namespace levypos {

inline constexpr int kSpecSchema = 1;

// Parses a process-spec document. Throws InputError for malformed JSON, unknown keys,
// missing fields or a wrong schema, and ValidationError when the parameters cannot
// describe a Levy measure. Analytic-only models (no jumps, sigma2 > 0) are accepted.
[[nodiscard]] LevyModel parse_model_spec(std::string_view text);
[[nodiscard]] LevyModel load_model_spec(const std::filesystem::path& path);

// Canonical spec document for a catalog or table model; used for config hashing.
[[nodiscard]] std::string model_spec_json(const LevyModel& m);

}  // namespace levypos
