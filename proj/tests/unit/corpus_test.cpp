#include "citenorm/corpus.hpp"
#include "citenorm/counts.hpp"
#include "citenorm/error.hpp"
#include "citenorm/pipeline.hpp"

#include "helpers.hpp"
#include "oracle/brute_force.hpp"

#include <doctest.h>

#include <sstream>

using namespace citenorm;

namespace {

const char* three_docs =
    "{\"doc_id\":\"a\",\"journal\":\"J1\",\"year\":2010,\"type\":\"article\",\"nref\":2,\"refs\":[\"X, 2009, J1\",\"Y, 2008, J2\"]}\n"
    "{\"doc_id\":\"b\",\"journal\":\"J2\",\"year\":2009,\"type\":\"review\",\"refs\":[]}\n"
    "{\"doc_id\":\"c\",\"journal\":\"J1\",\"year\":2010,\"type\":\"editorial\",\"nref\":1,\"refs\":[\"Z, 1850, J1\"]}\n";

} // namespace

TEST_CASE("well-formed JSONL loads every document")
{
    std::istringstream in(three_docs);
    const auto c = read_corpus(in, SourceFormat::jsonl, 2010);
    CHECK(c.documents.size() == 3);
    CHECK(c.errors.empty());
    CHECK(c.documents[0].ref_count == 2);
    CHECK(c.documents[1].ref_count == 0);
    CHECK(c.documents[1].doc_type == DocType::review);
    // unknown type is kept as other with a warning
    CHECK(c.documents[2].doc_type == DocType::other);
    CHECK(c.warnings.size() == 1);
}

TEST_CASE("malformed records are skipped and reported")
{
    std::string text = three_docs;
    text += "{\"doc_id\":\"d\",\"journal\":\"J1\",\"year\":\n";
    std::istringstream in(text);
    const auto c = read_corpus(in, SourceFormat::jsonl, 2010);
    CHECK(c.documents.size() == 3);
    REQUIRE(c.errors.size() == 1);
    CHECK(c.errors[0].line == 4);
}

TEST_CASE("record-level checks")
{
    const char* text =
        "{\"doc_id\":\"a\",\"journal\":\"J1\",\"year\":2010,\"type\":\"article\",\"refs\":[\"X, 2009, J1\"]}\n"
        "{\"doc_id\":\"a\",\"journal\":\"J1\",\"year\":2010,\"type\":\"article\",\"refs\":[]}\n"
        "{\"doc_id\":\"b\",\"journal\":\"J1\",\"year\":2011,\"type\":\"article\",\"refs\":[]}\n"
        "{\"doc_id\":\"c\",\"journal\":\"J1\",\"year\":2010,\"type\":\"article\",\"nref\":0,\"refs\":[\"X, 2009, J1\"]}\n"
        "{\"doc_id\":\"d\",\"journal\":\"J1\",\"year\":2010,\"type\":\"article\",\"refs\":[\" \"]}\n"
        "{\"doc_id\":\"e\",\"journal\":\"J1\",\"year\":2010,\"type\":\"article\",\"nref\":30,\"refs\":[\"X, 2009, J1\"]}\n";
    std::istringstream in(text);
    const auto c = read_corpus(in, SourceFormat::jsonl, 2010);
    CHECK(c.errors.size() == 4);
    REQUIRE(c.documents.size() == 2);
    CHECK(c.documents[1].truncated());
}

TEST_CASE("TSV layout and header checks")
{
    std::istringstream good("doc_id\tjournal\tyear\ttype\tnref\trefs\n"
                            "a\tJ1\t2010\tarticle\t3\tX, 2009, J1;Y, 2008, J2\n"
                            "b\tJ1\t2010\tletter\t\t\n"
                            "c\tJ1\tabc\tarticle\t\t\n");
    const auto c = read_corpus(good, SourceFormat::tsv, 2010);
    REQUIRE(c.documents.size() == 2);
    CHECK(c.documents[0].refs.size() == 2);
    CHECK(c.documents[0].ref_count == 3);
    CHECK(c.documents[1].refs.empty());
    CHECK(c.errors.size() == 1);

    std::istringstream bad("doc\tjournal\tyear\ttype\tnref\trefs\n");
    CHECK_THROWS_AS(read_corpus(bad, SourceFormat::tsv, 2010), InputError);
    CHECK_THROWS_AS(load_corpus("/nonexistent/x.jsonl", SourceFormat::jsonl, 2010), InputError);
    CHECK(format_from_path("a/b.tsv") == SourceFormat::tsv);
    CHECK(format_from_path("a/b.jsonl") == SourceFormat::jsonl);
}

TEST_CASE("corpus round trip in both formats")
{
    std::istringstream in(three_docs);
    const auto c = read_corpus(in, SourceFormat::jsonl, 2010);
    for (const auto format : {SourceFormat::jsonl, SourceFormat::tsv}) {
        std::ostringstream out;
        write_corpus(out, c, format);
        std::istringstream back(out.str());
        const auto again = read_corpus(back, format, 2010);
        CHECK(again.documents == c.documents);
        std::ostringstream out2;
        write_corpus(out2, again, format);
        CHECK(out2.str() == out.str());
    }
}

TEST_CASE("journal master round trip")
{
    const auto t = load_journals(std::string(CITENORM_TEST_DATA) + "/fixture_journals.tsv");
    CHECK(t.size() == 10);
    CHECK(t.has_merge_groups());
    std::ostringstream out;
    write_journals(out, t);
    std::istringstream in(out.str());
    const auto again = read_journals(in);
    REQUIRE(again.size() == t.size());
    for (std::size_t i = 0; i < t.size(); ++i) {
        CHECK(again.journals()[i] == t.journals()[i]);
    }
}

TEST_CASE("merge groups collapse into one journal")
{
    auto a = testing::journal("J-A", {"JGR A"}, "GEO", {{2008, 10}, {2009, 12}});
    auto b = testing::journal("J-B", {"JGR B"}, "GEO", {{2008, 5}, {2010, 1}});
    auto c = testing::journal("J-C", {"JGR C"}, "GEO", {{2009, 3}});
    a.merge_group = b.merge_group = c.merge_group = "g1";
    const JournalTable t({a, b, c, testing::journal("K", {"K J"}, "PHYS")});

    Corpus corpus;
    corpus.census_year = 2010;
    corpus.documents.push_back(testing::doc("d1", "J-B", 2010, {"X, 2009, JGR A", "X, 2009, JGR C", "X, 2009, K J"}));
    const auto merged = merge_journal_parts(corpus, t);
    REQUIRE(merged.journals.size() == 2);
    const auto g = merged.journals.find_id("g1");
    REQUIRE(g);
    const auto& j = merged.journals[*g];
    CHECK(j.items_by_year == std::map<int, std::int64_t>{{2008, 15}, {2009, 15}, {2010, 1}});
    CHECK(j.abbreviations.size() == 3);
    CHECK(merged.corpus.documents[0].journal_id == "g1");

    auto resolved = merged.corpus;
    resolve_references(resolved, merged.journals);
    const auto counts = count_citations(resolved, merged.journals, {WindowKind::two_year, 2010}, integer_counting);
    CHECK(counts.values.at("g1") == 2.0);
    CHECK(counts.values.at("K") == 1.0);
}

TEST_CASE("no merge groups leaves the corpus unchanged")
{
    const JournalTable t({testing::journal("A", {"A J"}), testing::journal("B", {"B J"})});
    Corpus corpus;
    corpus.census_year = 2010;
    corpus.documents.push_back(testing::doc("d1", "A", 2010, {"X, 2009, B J"}));
    const auto merged = merge_journal_parts(corpus, t);
    CHECK(merged.corpus.documents == corpus.documents);
    CHECK(merged.journals.size() == 2);
}

TEST_CASE("merge group errors")
{
    auto a = testing::journal("J-A", {"A"}, "GEO");
    auto b = testing::journal("J-B", {"B"}, "PHYS");
    a.merge_group = b.merge_group = "g";
    CHECK_THROWS_AS(merge_journal_parts({}, JournalTable({a, b})), InputError);
    auto c = testing::journal("J-C", {"C"}, "GEO");
    c.merge_group = "J-X";
    CHECK_THROWS_AS(merge_journal_parts({}, JournalTable({c, testing::journal("J-X", {"X"}, "GEO")})), InputError);
}

TEST_CASE("seven-part group: total equals the sum of the part totals")
{
    std::vector<Journal> parts;
    for (int p = 0; p < 7; ++p) {
        auto j = testing::journal("P" + std::to_string(p), {"PART " + std::to_string(p)}, "GEO", {{2009, 5 + p}});
        j.merge_group = "WHOLE";
        parts.push_back(j);
    }
    parts.push_back(testing::journal("OTHER", {"OTHER J"}, "GEO", {{2009, 4}}));
    std::vector<Journal> unmerged = parts;
    for (auto& j : unmerged) {
        j.merge_group.reset();
    }
    std::vector<Document> docs;
    for (int i = 0; i < 40; ++i) {
        std::vector<std::string> refs;
        for (int r = 0; r <= i % 5; ++r) {
            refs.push_back("X, " + std::to_string(2004 + (i + r) % 6) + ", PART " + std::to_string((i * 3 + r) % 7));
        }
        refs.push_back("X, 2009, OTHER J");
        docs.push_back(testing::doc("d" + std::to_string(i), "OTHER", 2010, refs));
    }
    Corpus corpus;
    corpus.census_year = 2010;
    corpus.documents = docs;

    const JournalTable split_table(unmerged);
    auto split = testing::resolved(docs, split_table);
    const auto data = prepare_corpus(corpus, JournalTable(parts), {});
    for (const auto& mode : {integer_counting, fractional_in_window, fractional_all_refs}) {
        for (const auto kind : {WindowKind::two_year, WindowKind::five_year}) {
            const auto by_part = count_citations(split, split_table, {kind, 2010}, mode);
            const auto merged = count_citations(data.corpus, data.journals, {kind, 2010}, mode);
            double sum = 0.0;
            for (int p = 0; p < 7; ++p) {
                sum += by_part.values.at("P" + std::to_string(p));
            }
            CHECK(merged.values.at("WHOLE") == doctest::Approx(sum).epsilon(1e-12));
            CHECK(merged.values.at("OTHER") == by_part.values.at("OTHER"));
        }
    }
}

TEST_CASE("validation fractions")
{
    const JournalTable t({testing::journal("A", {"A J"})});
    std::vector<Document> docs;
    std::vector<std::string> refs;
    for (int i = 0; i < 99; ++i) {
        refs.push_back("X, 2005, A J");
    }
    docs.push_back(testing::doc("d1", "A", 2010, refs));
    auto clean = testing::resolved(docs, t);
    auto r = validate_corpus(clean, t);
    CHECK(r.fraction(r.invalid_year_refs) == 0.0);
    CHECK(r.fraction(r.matched_refs) == 1.0);

    docs[0].refs.push_back({"OLD, 1850, A J", std::nullopt});
    auto one_old = testing::resolved(docs, t);
    r = validate_corpus(one_old, t);
    CHECK(r.total_refs == 100);
    CHECK(r.fraction(r.pre1900_refs) == doctest::Approx(0.01));
    CHECK(r.matched_refs + r.unmatched_venue_refs + r.invalid_year_refs == r.total_refs);

    // references that were never parsed count as format failures
    Corpus raw;
    raw.census_year = 2010;
    raw.documents = docs;
    r = validate_corpus(raw, t);
    CHECK(r.unparsed_refs == 100);
}

TEST_CASE("fixture tally matches an independent pass over the file")
{
    const std::string dir = CITENORM_TEST_DATA;
    const auto truth = oracle::brute_force(dir + "/fixture_docs.jsonl", dir + "/fixture_journals.tsv", 2010);
    const auto data = prepare_corpus(load_corpus(dir + "/fixture_docs.jsonl", SourceFormat::jsonl, 2010),
                                     load_journals(dir + "/fixture_journals.tsv"), {});
    const auto& r = data.report;
    CHECK(r.total_refs == truth.tally.total);
    CHECK(r.matched_refs == truth.tally.matched);
    CHECK(r.unmatched_venue_refs == truth.tally.unmatched);
    CHECK(r.invalid_format_refs == truth.tally.invalid_format);
    CHECK(r.pre1900_refs == truth.tally.pre1900);
    CHECK(r.future_year_refs == truth.tally.future);
    CHECK(r.matched_refs + r.unmatched_venue_refs + r.invalid_year_refs == r.total_refs);

    std::ostringstream out;
    write_validation_report(out, r);
    CHECK(out.str().rfind("metric\tcount\tfraction\n", 0) == 0);
}
