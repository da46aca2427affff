#pragma once

#include "citenorm/journals.hpp"
#include "citenorm/reference.hpp"

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace citenorm {

enum class DocType : std::uint8_t { article, review, letter, other };
enum class SourceFormat : std::uint8_t { jsonl, tsv };

const char* to_string(DocType type);
/// Maps unknown strings to std::nullopt; callers decide whether to fall back
/// to DocType::other.
std::optional<DocType> parse_doc_type(std::string_view text);

struct RawReference {
    std::string raw;
    std::optional<CitedRef> parsed;

    bool operator==(const RawReference&) const = default;
};

struct Document {
    std::string doc_id;
    std::string journal_id;
    int pub_year = 0;
    DocType doc_type = DocType::article;
    std::vector<RawReference> refs;
    /// Declared total reference count (NRef). Larger than refs.size() only
    /// when the input lists a truncated reference list.
    std::int64_t ref_count = 0;

    bool truncated() const { return ref_count > static_cast<std::int64_t>(refs.size()); }
    bool operator==(const Document&) const = default;
};

struct LoadIssue {
    std::size_t line = 0;
    std::string message;

    bool operator==(const LoadIssue&) const = default;
};

struct Corpus {
    int census_year = 0;
    std::vector<Document> documents;
    SourceFormat source_format = SourceFormat::jsonl;
    /// Records that were skipped.
    std::vector<LoadIssue> errors;
    /// Records that were kept with a substitution (e.g. unknown doc type).
    std::vector<LoadIssue> warnings;
};

SourceFormat format_from_path(const std::filesystem::path& path);

/// Reads a documents file. A malformed TSV header or unreadable file throws
/// InputError; malformed records are collected in Corpus::errors and skipped.
Corpus read_corpus(std::istream& in, SourceFormat format, int census_year);
Corpus load_corpus(const std::filesystem::path& path, SourceFormat format, int census_year);

/// Writes the documents in the given format. Only raw reference strings are
/// written; parse results are recomputed on load.
void write_corpus(std::ostream& out, const Corpus& corpus, SourceFormat format);

struct MergedData {
    Corpus corpus;
    JournalTable journals;
};

/// Collapses journals sharing a merge_group into one journal whose id is the
/// group id. Citing documents and already-matched references are reassigned.
/// Throws InputError when a group spans several field codes or when a group
/// id collides with an unrelated journal id.
MergedData merge_journal_parts(Corpus corpus, const JournalTable& journals);

struct ValidationReport {
    std::int64_t total_docs = 0;
    std::int64_t total_refs = 0;
    /// invalid_format + pre1900.
    std::int64_t invalid_year_refs = 0;
    std::int64_t invalid_format_refs = 0;
    std::int64_t pre1900_refs = 0;
    /// Counted among matched/unmatched; excluded from every citation window.
    std::int64_t future_year_refs = 0;
    std::int64_t unmatched_venue_refs = 0;
    std::int64_t matched_refs = 0;
    std::int64_t unparsed_refs = 0;
    std::int64_t unknown_citing_journal_docs = 0;

    double fraction(std::int64_t count) const
    {
        return total_refs == 0 ? 0.0 : static_cast<double>(count) / static_cast<double>(total_refs);
    }
    bool operator==(const ValidationReport&) const = default;
};

/// Tallies the reference partition matched + unmatched + invalid = total.
/// References that were never parsed count as invalid_format.
ValidationReport validate_corpus(const Corpus& corpus, const JournalTable& journals);

void write_validation_report(std::ostream& out, const ValidationReport& report);

} // namespace citenorm
