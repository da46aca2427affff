#pragma once

#include <compare>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>

namespace citenorm {

enum class YearStatus : std::uint8_t { valid, invalid_format, pre1900, future };

/// Position of a journal inside a JournalTable. Only meaningful together with
/// the table that produced it.
struct JournalIndex {
    std::uint32_t value = 0;
    auto operator<=>(const JournalIndex&) const = default;
};

/// A cited reference split into venue and year, plus its match against the
/// journal master.
struct CitedRef {
    std::string venue_abbrev;
    std::optional<int> year;
    YearStatus year_status = YearStatus::invalid_format;
    std::optional<JournalIndex> matched_journal;

    bool operator==(const CitedRef&) const = default;
};

/// Uppercase (ASCII), collapse whitespace runs, strip leading/trailing
/// whitespace and trailing punctuation. Idempotent.
std::string normalize_venue(std::string_view venue);

const char* to_string(YearStatus status);

} // namespace citenorm
