#pragma once

#include "citenorm/corpus.hpp"
#include "citenorm/journals.hpp"
#include "citenorm/reference.hpp"

#include <optional>
#include <string_view>

namespace citenorm {

/// pre1900 below 1900, future above the census year, valid otherwise.
YearStatus classify_year(int year, int census_year);

/// Parses a cited-reference string.
///
/// Comma layout: "AUTHOR, YEAR, VENUE[, VOL, PAGE...]". The year is the
/// second field when it is exactly four ASCII digits; otherwise a four-digit
/// first field is taken as the year of an anonymous reference and the venue
/// moves one field left. Any other shape yields invalid_format (the venue is
/// still extracted from the third field when present).
///
/// Structured layout: "VENUE|YEAR", recognized when the string has no comma
/// and exactly one '|'.
///
/// matched_journal is left empty; see match_venue / resolve_references.
CitedRef parse_reference(std::string_view raw, int census_year);

/// Exact match of the normalized venue against normalized abbreviations.
std::optional<JournalIndex> match_venue(std::string_view venue_abbrev, const JournalTable& journals);

/// Parses and matches every reference of the corpus. Result does not depend
/// on the thread count.
void resolve_references(Corpus& corpus, const JournalTable& journals, unsigned threads = 1);

} // namespace citenorm
