#include "citenorm/refmatch.hpp"

#include "citenorm/detail/parallel.hpp"
#include "citenorm/tsv.hpp"

#include <algorithm>
#include <stdexcept>

namespace citenorm {

namespace {

bool is_space(char c)
{
    return c == ' ' || c == '\t' || c == '\n' || c == '\r' || c == '\v' || c == '\f';
}

bool is_trailing_punct(char c)
{
    return c == '.' || c == ',' || c == ';' || c == ':' || c == '!' || c == '?';
}

bool is_year_token(std::string_view token)
{
    return token.size() == 4
        && std::all_of(token.begin(), token.end(), [](char c) { return c >= '0' && c <= '9'; });
}

int to_year(std::string_view token)
{
    int year = 0;
    for (char c : token) {
        year = year * 10 + (c - '0');
    }
    return year;
}

} // namespace

std::string normalize_venue(std::string_view venue)
{
    std::string out;
    out.reserve(venue.size());
    bool pending_space = false;
    for (char c : venue) {
        if (is_space(c)) {
            pending_space = !out.empty();
            continue;
        }
        if (pending_space) {
            out.push_back(' ');
            pending_space = false;
        }
        out.push_back(c >= 'a' && c <= 'z' ? static_cast<char>(c - 'a' + 'A') : c);
    }
    while (!out.empty() && (is_trailing_punct(out.back()) || out.back() == ' ')) {
        out.pop_back();
    }
    return out;
}

const char* to_string(YearStatus status)
{
    switch (status) {
    case YearStatus::valid: return "valid";
    case YearStatus::invalid_format: return "invalid_format";
    case YearStatus::pre1900: return "pre1900";
    case YearStatus::future: return "future";
    }
    return "?";
}

YearStatus classify_year(int year, int census_year)
{
    if (year < 1900) {
        return YearStatus::pre1900;
    }
    if (year > census_year) {
        return YearStatus::future;
    }
    return YearStatus::valid;
}

CitedRef parse_reference(std::string_view raw, int census_year)
{
    if (tsv::trim(raw).empty()) {
        throw std::invalid_argument("empty reference string");
    }
    std::string_view venue;
    std::string_view year_token;

    const bool structured = raw.find(',') == std::string_view::npos
        && std::count(raw.begin(), raw.end(), '|') == 1;
    if (structured) {
        const auto bar = raw.find('|');
        venue = raw.substr(0, bar);
        year_token = tsv::trim(raw.substr(bar + 1));
    } else {
        const auto fields = tsv::split(raw, ',');
        if (fields.size() >= 2 && is_year_token(tsv::trim(fields[1]))) {
            year_token = tsv::trim(fields[1]);
            venue = fields.size() >= 3 ? fields[2] : std::string_view{};
        } else if (is_year_token(tsv::trim(fields[0]))) {
            year_token = tsv::trim(fields[0]);
            venue = fields.size() >= 2 ? fields[1] : std::string_view{};
        } else {
            venue = fields.size() >= 3 ? fields[2] : std::string_view{};
        }
    }

    CitedRef ref;
    ref.venue_abbrev = normalize_venue(venue);
    if (is_year_token(year_token)) {
        ref.year = to_year(year_token);
        ref.year_status = classify_year(*ref.year, census_year);
    } else {
        ref.year_status = YearStatus::invalid_format;
    }
    return ref;
}

std::optional<JournalIndex> match_venue(std::string_view venue_abbrev, const JournalTable& journals)
{
    const std::string key = normalize_venue(venue_abbrev);
    if (key.empty()) {
        return std::nullopt;
    }
    return journals.find_abbreviation(key);
}

void resolve_references(Corpus& corpus, const JournalTable& journals, unsigned threads)
{
    const int census = corpus.census_year;
    detail::parallel_for(corpus.documents.size(), threads, [&](std::size_t begin, std::size_t end) {
        for (std::size_t d = begin; d < end; ++d) {
            for (auto& ref : corpus.documents[d].refs) {
                CitedRef parsed = parse_reference(ref.raw, census);
                // venue_abbrev is already normalized
                if (!parsed.venue_abbrev.empty()) {
                    parsed.matched_journal = journals.find_abbreviation(parsed.venue_abbrev);
                }
                ref.parsed = std::move(parsed);
            }
        }
    });
}

} // namespace citenorm
