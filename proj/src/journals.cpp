#include "citenorm/journals.hpp"

#include "citenorm/error.hpp"
#include "citenorm/tsv.hpp"

#include <fstream>
#include <istream>
#include <ostream>

namespace citenorm {

JournalTable::JournalTable(std::vector<Journal> journals)
    : journals_(std::move(journals))
{
    for (std::uint32_t i = 0; i < journals_.size(); ++i) {
        const Journal& j = journals_[i];
        if (j.journal_id.empty()) {
            throw InputError("journal with empty journal_id");
        }
        if (!by_id_.emplace(j.journal_id, i).second) {
            throw InputError("duplicate journal_id '" + j.journal_id + "'");
        }
        for (const auto& [year, count] : j.items_by_year) {
            if (count < 0) {
                throw InputError("negative item count for '" + j.journal_id + "' in " + std::to_string(year));
            }
        }
        for (const auto& abbrev : j.abbreviations) {
            const std::string key = normalize_venue(abbrev);
            if (key.empty()) {
                continue;
            }
            const auto [it, inserted] = by_abbrev_.emplace(key, i);
            if (!inserted && it->second != i) {
                throw InputError("ambiguous abbreviation '" + key + "' shared by '"
                                 + journals_[it->second].journal_id + "' and '" + j.journal_id + "'");
            }
        }
    }
}

std::optional<JournalIndex> JournalTable::find_id(std::string_view journal_id) const
{
    const auto it = by_id_.find(std::string(journal_id));
    if (it == by_id_.end()) {
        return std::nullopt;
    }
    return JournalIndex{it->second};
}

std::optional<JournalIndex> JournalTable::find_abbreviation(std::string_view normalized) const
{
    const auto it = by_abbrev_.find(std::string(normalized));
    if (it == by_abbrev_.end()) {
        return std::nullopt;
    }
    return JournalIndex{it->second};
}

bool JournalTable::has_merge_groups() const
{
    for (const auto& j : journals_) {
        if (j.merge_group) {
            return true;
        }
    }
    return false;
}

JournalTable read_journals(std::istream& in)
{
    std::string line;
    std::size_t line_no = 0;
    if (!tsv::next_record(in, line, line_no)) {
        throw InputError("journal table: missing header");
    }
    {
        const auto header = tsv::split(line, '\t');
        static constexpr std::string_view expected[] = {"journal_id", "full_name", "abbrevs", "field", "merge_group"};
        if (header.size() < 5) {
            throw InputError("journal table: malformed header");
        }
        for (std::size_t i = 0; i < 5; ++i) {
            if (tsv::trim(header[i]) != expected[i]) {
                throw InputError("journal table: header column " + std::to_string(i + 1) + " must be '"
                                 + std::string(expected[i]) + "'");
            }
        }
    }

    std::vector<Journal> journals;
    while (tsv::next_record(in, line, line_no)) {
        const auto cells = tsv::split(line, '\t');
        const auto where = "journal table line " + std::to_string(line_no) + ": ";
        if (cells.size() < 5) {
            throw InputError(where + "expected at least 5 columns");
        }
        Journal j;
        j.journal_id = std::string(tsv::trim(cells[0]));
        j.full_name = std::string(tsv::trim(cells[1]));
        for (auto abbrev : tsv::split(cells[2], '|')) {
            abbrev = tsv::trim(abbrev);
            if (!abbrev.empty()) {
                j.abbreviations.emplace_back(abbrev);
            }
        }
        j.field_code = std::string(tsv::trim(cells[3]));
        const auto group = tsv::trim(cells[4]);
        if (!group.empty() && group != "-") {
            j.merge_group = std::string(group);
        }
        for (std::size_t c = 5; c < cells.size(); ++c) {
            const auto cell = tsv::trim(cells[c]);
            if (cell.empty()) {
                continue;
            }
            const auto eq = cell.find('=');
            const auto year = eq == std::string_view::npos ? std::nullopt : tsv::parse_int(cell.substr(0, eq));
            const auto count = eq == std::string_view::npos ? std::nullopt : tsv::parse_int(cell.substr(eq + 1));
            if (!year || !count) {
                throw InputError(where + "bad year=count cell '" + std::string(cell) + "'");
            }
            j.items_by_year[static_cast<int>(*year)] += *count;
        }
        journals.push_back(std::move(j));
    }
    try {
        return JournalTable(std::move(journals));
    } catch (const InputError& e) {
        throw InputError(std::string("journal table: ") + e.what());
    }
}

JournalTable load_journals(const std::filesystem::path& path)
{
    std::ifstream in(path);
    if (!in) {
        throw InputError("cannot open journal table " + path.string());
    }
    return read_journals(in);
}

void write_journals(std::ostream& out, const JournalTable& table)
{
    out << "journal_id\tfull_name\tabbrevs\tfield\tmerge_group\titems_by_year\n";
    for (const auto& j : table.journals()) {
        out << j.journal_id << '\t' << j.full_name << '\t' << tsv::join(j.abbreviations, "|") << '\t'
            << j.field_code << '\t' << j.merge_group.value_or("");
        for (const auto& [year, count] : j.items_by_year) {
            out << '\t' << year << '=' << count;
        }
        out << '\n';
    }
}

} // namespace citenorm
