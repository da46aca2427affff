#pragma once

#include "citenorm/reference.hpp"

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace citenorm {

struct Journal {
    std::string journal_id;
    std::string full_name;
    std::vector<std::string> abbreviations;
    std::string field_code;
    std::map<int, std::int64_t> items_by_year;
    std::optional<std::string> merge_group;

    bool operator==(const Journal&) const = default;
};

/// Journal master records with id and abbreviation indexes.
///
/// Construction rejects duplicate journal ids, negative item counts and
/// abbreviations that normalize to the same string for two different
/// journals, so venue lookup never has to break a tie.
class JournalTable {
public:
    JournalTable() = default;
    explicit JournalTable(std::vector<Journal> journals);

    std::span<const Journal> journals() const { return journals_; }
    std::size_t size() const { return journals_.size(); }
    bool empty() const { return journals_.empty(); }

    const Journal& operator[](JournalIndex index) const { return journals_.at(index.value); }

    std::optional<JournalIndex> find_id(std::string_view journal_id) const;
    /// Exact lookup of an already-normalized abbreviation.
    std::optional<JournalIndex> find_abbreviation(std::string_view normalized) const;

    bool has_merge_groups() const;

private:
    std::vector<Journal> journals_;
    std::unordered_map<std::string, std::uint32_t> by_id_;
    std::unordered_map<std::string, std::uint32_t> by_abbrev_;
};

/// Journal master TSV: journal_id, full_name, abbrevs ('|'-joined), field,
/// merge_group, then any number of year=count cells. Header row required.
JournalTable read_journals(std::istream& in);
JournalTable load_journals(const std::filesystem::path& path);
void write_journals(std::ostream& out, const JournalTable& table);

} // namespace citenorm
