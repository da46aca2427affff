#include "citenorm/corpus.hpp"

#include "citenorm/error.hpp"
#include "citenorm/tsv.hpp"

#include <json.hpp>

#include <algorithm>
#include <fstream>
#include <istream>
#include <map>
#include <ostream>
#include <stdexcept>
#include <unordered_set>

namespace citenorm {

const char* to_string(DocType type)
{
    switch (type) {
    case DocType::article: return "article";
    case DocType::review: return "review";
    case DocType::letter: return "letter";
    case DocType::other: return "other";
    }
    return "other";
}

std::optional<DocType> parse_doc_type(std::string_view text)
{
    text = tsv::trim(text);
    if (text == "article") return DocType::article;
    if (text == "review") return DocType::review;
    if (text == "letter") return DocType::letter;
    if (text == "other") return DocType::other;
    return std::nullopt;
}

SourceFormat format_from_path(const std::filesystem::path& path)
{
    const auto ext = path.extension().string();
    if (ext == ".tsv" || ext == ".tab") {
        return SourceFormat::tsv;
    }
    return SourceFormat::jsonl;
}

namespace {

// Shared record checks. Returns an error message, empty when the document is
// acceptable.
std::string check_document(const Document& doc, int census_year, const std::unordered_set<std::string>& seen)
{
    if (doc.doc_id.empty()) {
        return "empty doc_id";
    }
    if (seen.contains(doc.doc_id)) {
        return "duplicate doc_id '" + doc.doc_id + "'";
    }
    if (doc.journal_id.empty()) {
        return "empty journal";
    }
    if (doc.pub_year < 1900 || doc.pub_year > census_year) {
        return "publication year " + std::to_string(doc.pub_year) + " outside [1900, "
            + std::to_string(census_year) + "]";
    }
    if (doc.ref_count < static_cast<std::int64_t>(doc.refs.size())) {
        return "nref " + std::to_string(doc.ref_count) + " smaller than the " + std::to_string(doc.refs.size())
            + " listed references";
    }
    for (const auto& ref : doc.refs) {
        if (tsv::trim(ref.raw).empty()) {
            return "empty reference string";
        }
    }
    return {};
}

class RecordSink {
public:
    RecordSink(Corpus& corpus)
        : corpus_(corpus)
    {
    }

    void add(Document doc, std::size_t line_no)
    {
        auto problem = check_document(doc, corpus_.census_year, seen_);
        if (!problem.empty()) {
            error(line_no, std::move(problem));
            return;
        }
        seen_.insert(doc.doc_id);
        corpus_.documents.push_back(std::move(doc));
    }

    void set_type(Document& doc, std::string_view text, std::size_t line_no)
    {
        if (auto type = parse_doc_type(text)) {
            doc.doc_type = *type;
        } else {
            doc.doc_type = DocType::other;
            corpus_.warnings.push_back({line_no, "unknown document type '" + std::string(text) + "', using other"});
        }
    }

    void error(std::size_t line_no, std::string message) { corpus_.errors.push_back({line_no, std::move(message)}); }

private:
    Corpus& corpus_;
    std::unordered_set<std::string> seen_;
};

void read_jsonl(std::istream& in, Corpus& corpus)
{
    using nlohmann::json;
    RecordSink sink(corpus);
    std::string line;
    std::size_t line_no = 0;
    while (tsv::next_record(in, line, line_no)) {
        json record;
        try {
            record = json::parse(line);
        } catch (const json::parse_error&) {
            sink.error(line_no, "malformed JSON");
            continue;
        }
        if (!record.is_object()) {
            sink.error(line_no, "record is not a JSON object");
            continue;
        }
        const auto str = [&](const char* key) -> const std::string* {
            const auto it = record.find(key);
            return it != record.end() && it->is_string() ? it->get_ptr<const std::string*>() : nullptr;
        };
        const auto* doc_id = str("doc_id");
        const auto* journal = str("journal");
        const auto* type = str("type");
        const auto year = record.find("year");
        const auto refs = record.find("refs");
        if (!doc_id || !journal || !type || year == record.end() || !year->is_number_integer()
            || refs == record.end() || !refs->is_array()) {
            sink.error(line_no, "missing or mistyped key (need doc_id, journal, year, type, refs)");
            continue;
        }
        Document doc;
        doc.doc_id = *doc_id;
        doc.journal_id = *journal;
        doc.pub_year = year->get<int>();
        bool refs_ok = true;
        doc.refs.reserve(refs->size());
        for (const auto& r : *refs) {
            if (!r.is_string()) {
                refs_ok = false;
                break;
            }
            doc.refs.push_back({r.get<std::string>(), std::nullopt});
        }
        if (!refs_ok) {
            sink.error(line_no, "refs must be an array of strings");
            continue;
        }
        doc.ref_count = static_cast<std::int64_t>(doc.refs.size());
        if (const auto nref = record.find("nref"); nref != record.end() && !nref->is_null()) {
            if (!nref->is_number_integer() || nref->get<std::int64_t>() < 0) {
                sink.error(line_no, "nref must be a non-negative integer");
                continue;
            }
            doc.ref_count = nref->get<std::int64_t>();
        }
        sink.set_type(doc, *type, line_no);
        sink.add(std::move(doc), line_no);
    }
}

constexpr std::string_view tsv_columns[] = {"doc_id", "journal", "year", "type", "nref", "refs"};

void read_tsv(std::istream& in, Corpus& corpus)
{
    std::string line;
    std::size_t line_no = 0;
    if (!tsv::next_record(in, line, line_no)) {
        throw InputError("documents file: missing header");
    }
    const auto header = tsv::split(line, '\t');
    if (header.size() != std::size(tsv_columns)) {
        throw InputError("documents file: header must have columns doc_id, journal, year, type, nref, refs");
    }
    for (std::size_t i = 0; i < header.size(); ++i) {
        if (tsv::trim(header[i]) != tsv_columns[i]) {
            throw InputError("documents file: header column " + std::to_string(i + 1) + " must be '"
                             + std::string(tsv_columns[i]) + "'");
        }
    }

    RecordSink sink(corpus);
    while (tsv::next_record(in, line, line_no)) {
        const auto cells = tsv::split(line, '\t');
        if (cells.size() != std::size(tsv_columns)) {
            sink.error(line_no, "expected 6 tab-separated columns");
            continue;
        }
        Document doc;
        doc.doc_id = std::string(tsv::trim(cells[0]));
        doc.journal_id = std::string(tsv::trim(cells[1]));
        const auto year = tsv::parse_int(cells[2]);
        if (!year) {
            sink.error(line_no, "non-numeric year");
            continue;
        }
        doc.pub_year = static_cast<int>(*year);
        if (!tsv::trim(cells[5]).empty()) {
            for (auto raw : tsv::split(cells[5], ';')) {
                doc.refs.push_back({std::string(tsv::trim(raw)), std::nullopt});
            }
        }
        doc.ref_count = static_cast<std::int64_t>(doc.refs.size());
        if (!tsv::trim(cells[4]).empty()) {
            const auto nref = tsv::parse_int(cells[4]);
            if (!nref || *nref < 0) {
                sink.error(line_no, "nref must be a non-negative integer");
                continue;
            }
            doc.ref_count = *nref;
        }
        sink.set_type(doc, cells[3], line_no);
        sink.add(std::move(doc), line_no);
    }
}

} // namespace

Corpus read_corpus(std::istream& in, SourceFormat format, int census_year)
{
    Corpus corpus;
    corpus.census_year = census_year;
    corpus.source_format = format;
    if (format == SourceFormat::jsonl) {
        read_jsonl(in, corpus);
    } else {
        read_tsv(in, corpus);
    }
    return corpus;
}

Corpus load_corpus(const std::filesystem::path& path, SourceFormat format, int census_year)
{
    std::ifstream in(path);
    if (!in) {
        throw InputError("cannot open documents file " + path.string());
    }
    return read_corpus(in, format, census_year);
}

void write_corpus(std::ostream& out, const Corpus& corpus, SourceFormat format)
{
    if (format == SourceFormat::jsonl) {
        for (const auto& doc : corpus.documents) {
            nlohmann::ordered_json record;
            record["doc_id"] = doc.doc_id;
            record["journal"] = doc.journal_id;
            record["year"] = doc.pub_year;
            record["type"] = to_string(doc.doc_type);
            record["nref"] = doc.ref_count;
            auto& refs = record["refs"] = nlohmann::ordered_json::array();
            for (const auto& ref : doc.refs) {
                refs.push_back(ref.raw);
            }
            out << record.dump() << '\n';
        }
        return;
    }
    out << "doc_id\tjournal\tyear\ttype\tnref\trefs\n";
    for (const auto& doc : corpus.documents) {
        out << doc.doc_id << '\t' << doc.journal_id << '\t' << doc.pub_year << '\t' << to_string(doc.doc_type)
            << '\t' << doc.ref_count << '\t';
        for (std::size_t i = 0; i < doc.refs.size(); ++i) {
            const auto& raw = doc.refs[i].raw;
            if (raw.find_first_of(";\t\n") != std::string::npos) {
                throw std::invalid_argument("reference of '" + doc.doc_id + "' cannot be written as TSV: " + raw);
            }
            out << (i > 0 ? ";" : "") << raw;
        }
        out << '\n';
    }
}

MergedData merge_journal_parts(Corpus corpus, const JournalTable& journals)
{
    const auto all = journals.journals();
    std::map<std::string, std::vector<std::uint32_t>> groups;
    for (std::uint32_t i = 0; i < all.size(); ++i) {
        if (all[i].merge_group) {
            groups[*all[i].merge_group].push_back(i);
        }
    }
    if (groups.empty()) {
        return {std::move(corpus), journals};
    }

    for (const auto& [group, members] : groups) {
        for (auto m : members) {
            if (all[m].field_code != all[members.front()].field_code) {
                throw InputError("merge group '" + group + "' spans fields '" + all[members.front()].field_code
                                 + "' and '" + all[m].field_code + "'");
            }
        }
        if (const auto clash = journals.find_id(group)) {
            if (all[clash->value].merge_group != group) {
                throw InputError("merge group id '" + group + "' collides with journal '" + group + "'");
            }
        }
    }

    std::vector<Journal> merged;
    std::vector<std::uint32_t> remap(all.size());
    std::map<std::string, std::uint32_t> group_position;
    std::map<std::string, std::string> id_remap;
    for (std::uint32_t i = 0; i < all.size(); ++i) {
        const Journal& j = all[i];
        if (!j.merge_group) {
            remap[i] = static_cast<std::uint32_t>(merged.size());
            merged.push_back(j);
            continue;
        }
        const std::string& group = *j.merge_group;
        id_remap[j.journal_id] = group;
        auto [pos, first] = group_position.try_emplace(group, static_cast<std::uint32_t>(merged.size()));
        if (first) {
            Journal combined;
            combined.journal_id = group;
            combined.full_name = j.full_name;
            combined.field_code = j.field_code;
            merged.push_back(std::move(combined));
        }
        Journal& target = merged[pos->second];
        for (const auto& abbrev : j.abbreviations) {
            if (std::find(target.abbreviations.begin(), target.abbreviations.end(), abbrev)
                == target.abbreviations.end()) {
                target.abbreviations.push_back(abbrev);
            }
        }
        for (const auto& [year, count] : j.items_by_year) {
            target.items_by_year[year] += count;
        }
        remap[i] = pos->second;
    }

    for (auto& doc : corpus.documents) {
        if (const auto it = id_remap.find(doc.journal_id); it != id_remap.end()) {
            doc.journal_id = it->second;
        }
        for (auto& ref : doc.refs) {
            if (ref.parsed && ref.parsed->matched_journal) {
                ref.parsed->matched_journal = JournalIndex{remap.at(ref.parsed->matched_journal->value)};
            }
        }
    }
    return {std::move(corpus), JournalTable(std::move(merged))};
}

ValidationReport validate_corpus(const Corpus& corpus, const JournalTable& journals)
{
    ValidationReport report;
    report.total_docs = static_cast<std::int64_t>(corpus.documents.size());
    for (const auto& doc : corpus.documents) {
        if (!journals.find_id(doc.journal_id)) {
            ++report.unknown_citing_journal_docs;
        }
        for (const auto& ref : doc.refs) {
            ++report.total_refs;
            if (!ref.parsed) {
                ++report.unparsed_refs;
                ++report.invalid_format_refs;
                ++report.invalid_year_refs;
                continue;
            }
            switch (ref.parsed->year_status) {
            case YearStatus::invalid_format:
                ++report.invalid_format_refs;
                ++report.invalid_year_refs;
                continue;
            case YearStatus::pre1900:
                ++report.pre1900_refs;
                ++report.invalid_year_refs;
                continue;
            case YearStatus::future:
                ++report.future_year_refs;
                break;
            case YearStatus::valid:
                break;
            }
            if (ref.parsed->matched_journal) {
                ++report.matched_refs;
            } else {
                ++report.unmatched_venue_refs;
            }
        }
    }
    return report;
}

void write_validation_report(std::ostream& out, const ValidationReport& r)
{
    out << "metric\tcount\tfraction\n";
    const auto doc_row = [&](const char* name, std::int64_t count) {
        out << name << '\t' << count << "\tNA\n";
    };
    const auto ref_row = [&](const char* name, std::int64_t count) {
        out << name << '\t' << count << '\t' << tsv::fixed(r.fraction(count), 6) << '\n';
    };
    doc_row("total_docs", r.total_docs);
    doc_row("unknown_citing_journal_docs", r.unknown_citing_journal_docs);
    ref_row("total_refs", r.total_refs);
    ref_row("matched_refs", r.matched_refs);
    ref_row("unmatched_venue_refs", r.unmatched_venue_refs);
    ref_row("invalid_year_refs", r.invalid_year_refs);
    ref_row("invalid_format_refs", r.invalid_format_refs);
    ref_row("pre1900_refs", r.pre1900_refs);
    ref_row("future_year_refs", r.future_year_refs);
}

} // namespace citenorm
