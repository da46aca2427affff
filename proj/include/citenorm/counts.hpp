#pragma once

#include "citenorm/corpus.hpp"
#include "citenorm/journals.hpp"

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <map>
#include <string>
#include <vector>

namespace citenorm {

enum class WindowKind : std::uint8_t { two_year, five_year, all_years };

/// Cited publication years counted for a census year.
///   two_year:  census-2 .. census-1
///   five_year: census-5 .. census-1
///   all_years: 1900 .. census
struct WindowSpec {
    WindowKind kind = WindowKind::two_year;
    int census_year = 0;

    int first_year() const;
    int last_year() const;
    bool operator==(const WindowSpec&) const = default;
};

bool in_window(int year, const WindowSpec& window);

enum class Counting : std::uint8_t { integer, fractional };
/// in_window: 1/k with k the citing document's valid in-window references.
/// all_refs:  1/NRef (the "+" variants).
enum class FractionBase : std::uint8_t { in_window, all_refs };

struct CountMode {
    Counting counting = Counting::integer;
    FractionBase fraction_base = FractionBase::in_window;

    bool operator==(const CountMode& other) const
    {
        return counting == other.counting
            && (counting == Counting::integer || fraction_base == other.fraction_base);
    }
};

inline constexpr CountMode integer_counting{Counting::integer, FractionBase::in_window};
inline constexpr CountMode fractional_in_window{Counting::fractional, FractionBase::in_window};
inline constexpr CountMode fractional_all_refs{Counting::fractional, FractionBase::all_refs};

const char* to_string(WindowKind kind);
std::string to_string(const CountMode& mode);

/// TC-IC, TC-IC2, TC-FC5, TC-FC2+ ...
std::string count_variable_name(WindowKind kind, const CountMode& mode);

struct CountTable {
    WindowSpec window;
    CountMode mode;
    /// Covers every journal of the table, zero when uncited.
    std::map<std::string, double> values;
    std::int64_t contributing_docs = 0;

    std::string variable_name() const { return count_variable_name(window.kind, mode); }
};

/// Weights of the references a document credits: matched references with a
/// valid year inside the window. The fractional base k counts valid in-window
/// references whether or not they matched. Empty when k or NRef is zero.
std::map<std::size_t, double> fractional_weights(const Document& doc, const WindowSpec& window,
                                                 const CountMode& mode);

/// Per-journal citation totals over the census-year documents of the corpus
/// (documents published in other years are not citing documents).
///
/// Accumulation runs per journal in doc_id order with compensated summation,
/// so the result is bit-identical for any thread count.
CountTable count_citations(const Corpus& corpus, const JournalTable& journals, const WindowSpec& window,
                           const CountMode& mode, unsigned threads = 1);

/// TSV: journal_id, window, mode, value.
void write_count_table(std::ostream& out, const CountTable& table);

} // namespace citenorm
