#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>

namespace sqpe {

inline constexpr std::string_view kVersion = "0.1.0";

// Shortest round-trip decimal text (std::to_chars); locale-independent.
std::string format_double(double v);
std::string format_u64(std::uint64_t v);

// Writes content to a sibling .tmp file and renames it into place, so a
// partially written file is never observable under the final name.
void atomic_write(const std::filesystem::path& path, std::string_view content);

}  // namespace sqpe
