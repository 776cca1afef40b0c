#pragma once

#include <filesystem>
#include <string>
#include <string_view>

namespace curveflat::cli {

// Writes via a sibling temporary file and rename, so readers never observe a
// partially written artifact.
void write_atomic(const std::filesystem::path& path, std::string_view content);

// Six significant digits; used for every non-count CSV column.
std::string format_real(double v);

}  // namespace curveflat::cli
