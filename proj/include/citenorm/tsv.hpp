#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace citenorm::tsv {

std::vector<std::string_view> split(std::string_view line, char sep);
std::string_view trim(std::string_view text);

/// Next line that is neither empty nor '#'-prefixed. Strips a trailing '\r'.
/// line_no is advanced past every physical line consumed.
bool next_record(std::istream& in, std::string& line, std::size_t& line_no);

std::optional<std::int64_t> parse_int(std::string_view text);
/// Finite decimal number; rejects trailing garbage.
std::optional<double> parse_double(std::string_view text);

/// printf("%.*f") with negative zero folded to zero.
std::string fixed(double value, int decimals);

/// printf("%.*g"), for values whose magnitude varies widely.
std::string general(double value, int significant);

std::string join(const std::vector<std::string>& parts, std::string_view sep);

/// 64-bit FNV-1a over the file bytes, hex encoded.
std::string file_digest(const std::filesystem::path& path);

} // namespace citenorm::tsv
