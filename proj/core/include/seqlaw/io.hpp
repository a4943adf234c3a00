#pragma once

#include <filesystem>
#include <string>
#include <string_view>

namespace seqlaw {

// Whole-file read; throws DataError when the file cannot be opened.
std::string read_text_file(const std::filesystem::path& path);

// If the file starts with the gzip magic it is inflated first.
std::string read_text_file_maybe_gzip(const std::filesystem::path& path);

// Write-temp-then-rename so readers never observe a partial file.
void write_text_file_atomic(const std::filesystem::path& path, std::string_view content);

std::string gzip_decompress(std::string_view compressed);
std::string gzip_compress(std::string_view plain);

// 17 significant digits: enough for binary64 values to round-trip exactly.
std::string format_g17(double value);

} // namespace seqlaw
