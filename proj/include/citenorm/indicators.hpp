#pragma once

#include "citenorm/corpus.hpp"
#include "citenorm/counts.hpp"
#include "citenorm/journals.hpp"

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <map>
#include <set>
#include <string>
#include <vector>

namespace citenorm {

struct IndicatorTable {
    std::string indicator_id;
    std::map<std::string, double> values;
    /// Journals whose denominator was zero. Never present in values.
    std::set<std::string> undefined_journals;

    bool operator==(const IndicatorTable&) const = default;
};

enum class DenomWindow : std::uint8_t { two_year, five_year, census_only };

struct DenominatorTable {
    DenomWindow window = DenomWindow::two_year;
    int census_year = 0;
    std::map<std::string, std::int64_t> values;

    /// IF2-Denom, IF5-Denom or Items<census_year>.
    std::string variable_name() const;
};

inline const std::set<DocType> default_citable_types{DocType::article, DocType::review};

/// Sum of items_by_year over the window years; journals without entries get 0.
DenominatorTable compute_denominator(const JournalTable& journals, DenomWindow window, int census_year);

/// Returns a copy of the table where journals without any items_by_year entry
/// get counts derived from the corpus: documents of that journal whose type
/// is in citable_types, tallied by publication year.
JournalTable with_items_from_corpus(const JournalTable& journals, const Corpus& corpus,
                                    const std::set<DocType>& citable_types);

/// numerator / denominator per journal. Throws std::invalid_argument when the
/// windows do not correspond (two_year/two_year, five_year/five_year).
IndicatorTable quasi_if(const CountTable& numerators, const DenominatorTable& denominators);

/// All-years fractional citations over census-year citable items.
IndicatorTable fc_over_p(const CountTable& all_year_fc, const DenominatorTable& items_census);

/// Wraps count or denominator totals as indicator tables (no undefined set).
IndicatorTable as_indicator(const CountTable& counts);
IndicatorTable as_indicator(const DenominatorTable& denominators);

struct IndicatorImport {
    IndicatorTable table;
    /// Journals absent from the journal table, dropped.
    std::vector<std::string> warnings;
    /// Record-level parse failures, dropped.
    std::vector<LoadIssue> errors;
};

/// Reads "journal_id, value" or the exported "journal_id, indicator_id, value"
/// layout (header row required). An empty indicator_id takes the id from the
/// file's indicator_id column, or else from the file stem. When journals is
/// non-null, unknown journal ids are dropped with a warning.
IndicatorImport read_indicator_tsv(std::istream& in, std::string indicator_id, const JournalTable* journals);
IndicatorImport import_external_indicator(const std::filesystem::path& path, std::string indicator_id,
                                          const JournalTable* journals = nullptr);

/// TSV: journal_id, indicator_id, value (6 decimals).
void write_indicator_table(std::ostream& out, const IndicatorTable& table);
/// One undefined journal id per line under a journal_id header.
void write_undefined_journals(std::ostream& out, const IndicatorTable& table);

/// File-system friendly variant of an indicator id ('/' becomes '_').
std::string indicator_file_stem(const std::string& indicator_id);

} // namespace citenorm
