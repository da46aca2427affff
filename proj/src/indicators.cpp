#include "citenorm/indicators.hpp"

#include "citenorm/error.hpp"
#include "citenorm/tsv.hpp"

#include <fstream>
#include <istream>
#include <ostream>
#include <stdexcept>

namespace citenorm {

std::string DenominatorTable::variable_name() const
{
    switch (window) {
    case DenomWindow::two_year: return "IF2-Denom";
    case DenomWindow::five_year: return "IF5-Denom";
    case DenomWindow::census_only: return "Items" + std::to_string(census_year);
    }
    return "?";
}

DenominatorTable compute_denominator(const JournalTable& journals, DenomWindow window, int census_year)
{
    int first = census_year;
    int last = census_year;
    if (window == DenomWindow::two_year) {
        first = census_year - 2;
        last = census_year - 1;
    } else if (window == DenomWindow::five_year) {
        first = census_year - 5;
        last = census_year - 1;
    }
    DenominatorTable table{window, census_year, {}};
    for (const auto& j : journals.journals()) {
        std::int64_t total = 0;
        for (auto it = j.items_by_year.lower_bound(first); it != j.items_by_year.end() && it->first <= last; ++it) {
            total += it->second;
        }
        table.values.emplace(j.journal_id, total);
    }
    return table;
}

JournalTable with_items_from_corpus(const JournalTable& journals, const Corpus& corpus,
                                    const std::set<DocType>& citable_types)
{
    std::map<std::string, std::map<int, std::int64_t>> derived;
    for (const auto& doc : corpus.documents) {
        if (citable_types.contains(doc.doc_type)) {
            ++derived[doc.journal_id][doc.pub_year];
        }
    }
    std::vector<Journal> updated(journals.journals().begin(), journals.journals().end());
    for (auto& j : updated) {
        if (!j.items_by_year.empty()) {
            continue;
        }
        if (const auto it = derived.find(j.journal_id); it != derived.end()) {
            j.items_by_year = it->second;
        }
    }
    return JournalTable(std::move(updated));
}

namespace {

IndicatorTable divide(std::string indicator_id, const std::map<std::string, double>& numerators,
                      const std::map<std::string, std::int64_t>& denominators)
{
    IndicatorTable table;
    table.indicator_id = std::move(indicator_id);
    for (const auto& [journal, numerator] : numerators) {
        const auto it = denominators.find(journal);
        if (it == denominators.end() || it->second == 0) {
            table.undefined_journals.insert(journal);
            continue;
        }
        table.values.emplace(journal, numerator / static_cast<double>(it->second));
    }
    return table;
}

} // namespace

IndicatorTable quasi_if(const CountTable& numerators, const DenominatorTable& denominators)
{
    std::string prefix;
    if (numerators.window.kind == WindowKind::two_year && denominators.window == DenomWindow::two_year) {
        prefix = "IF2";
    } else if (numerators.window.kind == WindowKind::five_year && denominators.window == DenomWindow::five_year) {
        prefix = "IF5";
    } else {
        throw std::invalid_argument("quasi_if: numerator window " + std::string(to_string(numerators.window.kind))
                                    + " does not match denominator " + denominators.variable_name());
    }
    if (numerators.window.census_year != denominators.census_year) {
        throw std::invalid_argument("quasi_if: census years differ");
    }
    // TC-FC5+ -> IF5-FC+
    const std::string counted = numerators.variable_name();
    std::string suffix = counted.substr(3, 2);
    if (counted.back() == '+') {
        suffix += '+';
    }
    return divide(prefix + "-" + suffix, numerators.values, denominators.values);
}

IndicatorTable fc_over_p(const CountTable& all_year_fc, const DenominatorTable& items_census)
{
    if (all_year_fc.window.kind != WindowKind::all_years || !(all_year_fc.mode == fractional_in_window)) {
        throw std::invalid_argument("fc_over_p: numerator must be all-years fractional (in-window base) counts");
    }
    if (items_census.window != DenomWindow::census_only) {
        throw std::invalid_argument("fc_over_p: denominator must be census-year items");
    }
    if (all_year_fc.window.census_year != items_census.census_year) {
        throw std::invalid_argument("fc_over_p: census years differ");
    }
    return divide("FC/P", all_year_fc.values, items_census.values);
}

IndicatorTable as_indicator(const CountTable& counts)
{
    return {counts.variable_name(), counts.values, {}};
}

IndicatorTable as_indicator(const DenominatorTable& denominators)
{
    IndicatorTable table{denominators.variable_name(), {}, {}};
    for (const auto& [journal, count] : denominators.values) {
        table.values.emplace(journal, static_cast<double>(count));
    }
    return table;
}

IndicatorImport read_indicator_tsv(std::istream& in, std::string indicator_id, const JournalTable* journals)
{
    std::string line;
    std::size_t line_no = 0;
    if (!tsv::next_record(in, line, line_no)) {
        throw InputError("indicator file: missing header");
    }
    const auto header = tsv::split(line, '\t');
    std::size_t value_column = 0;
    bool has_id_column = false;
    if (header.size() == 2 && tsv::trim(header[0]) == "journal_id") {
        value_column = 1;
    } else if (header.size() == 3 && tsv::trim(header[0]) == "journal_id"
               && tsv::trim(header[1]) == "indicator_id") {
        value_column = 2;
        has_id_column = true;
    } else {
        throw InputError("indicator file: header must be 'journal_id, value' or 'journal_id, indicator_id, value'");
    }

    IndicatorImport result;
    while (tsv::next_record(in, line, line_no)) {
        const auto cells = tsv::split(line, '\t');
        if (cells.size() != header.size()) {
            result.errors.push_back({line_no, "expected " + std::to_string(header.size()) + " columns"});
            continue;
        }
        const std::string journal(tsv::trim(cells[0]));
        if (has_id_column && indicator_id.empty()) {
            indicator_id = std::string(tsv::trim(cells[1]));
        }
        const auto value = tsv::parse_double(cells[value_column]);
        if (journal.empty() || !value) {
            result.errors.push_back({line_no, "non-numeric value or empty journal_id"});
            continue;
        }
        if (journals && !journals->find_id(journal)) {
            result.warnings.push_back("unknown journal '" + journal + "' dropped");
            continue;
        }
        if (!result.table.values.emplace(journal, *value).second) {
            result.errors.push_back({line_no, "duplicate journal '" + journal + "'"});
        }
    }
    result.table.indicator_id = std::move(indicator_id);
    return result;
}

IndicatorImport import_external_indicator(const std::filesystem::path& path, std::string indicator_id,
                                          const JournalTable* journals)
{
    std::ifstream in(path);
    if (!in) {
        throw InputError("cannot open indicator file " + path.string());
    }
    auto result = read_indicator_tsv(in, std::move(indicator_id), journals);
    if (result.table.indicator_id.empty()) {
        result.table.indicator_id = path.stem().string();
    }
    return result;
}

void write_indicator_table(std::ostream& out, const IndicatorTable& table)
{
    out << "journal_id\tindicator_id\tvalue\n";
    for (const auto& [journal, value] : table.values) {
        out << journal << '\t' << table.indicator_id << '\t' << tsv::fixed(value, 6) << '\n';
    }
}

void write_undefined_journals(std::ostream& out, const IndicatorTable& table)
{
    out << "journal_id\n";
    for (const auto& journal : table.undefined_journals) {
        out << journal << '\n';
    }
}

std::string indicator_file_stem(const std::string& indicator_id)
{
    std::string stem = indicator_id;
    for (char& c : stem) {
        if (c == '/' || c == '\\' || c == ' ') {
            c = '_';
        }
    }
    return stem;
}

} // namespace citenorm
