#include "citenorm/counts.hpp"

#include "citenorm/detail/parallel.hpp"
#include "citenorm/tsv.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <ostream>
#include <stdexcept>

namespace citenorm {

int WindowSpec::first_year() const
{
    switch (kind) {
    case WindowKind::two_year: return census_year - 2;
    case WindowKind::five_year: return census_year - 5;
    case WindowKind::all_years: return 1900;
    }
    return census_year;
}

int WindowSpec::last_year() const
{
    return kind == WindowKind::all_years ? census_year : census_year - 1;
}

bool in_window(int year, const WindowSpec& window)
{
    return year >= window.first_year() && year <= window.last_year();
}

const char* to_string(WindowKind kind)
{
    switch (kind) {
    case WindowKind::two_year: return "two_year";
    case WindowKind::five_year: return "five_year";
    case WindowKind::all_years: return "all_years";
    }
    return "?";
}

std::string to_string(const CountMode& mode)
{
    if (mode.counting == Counting::integer) {
        return "integer";
    }
    return mode.fraction_base == FractionBase::in_window ? "fractional:in_window" : "fractional:all_refs";
}

std::string count_variable_name(WindowKind kind, const CountMode& mode)
{
    std::string name = mode.counting == Counting::integer ? "TC-IC" : "TC-FC";
    if (kind == WindowKind::two_year) {
        name += '2';
    } else if (kind == WindowKind::five_year) {
        name += '5';
    }
    if (mode.counting == Counting::fractional && mode.fraction_base == FractionBase::all_refs) {
        name += '+';
    }
    return name;
}

namespace {

bool counts_toward_window(const RawReference& ref, const WindowSpec& window)
{
    return ref.parsed && ref.parsed->year_status == YearStatus::valid && in_window(*ref.parsed->year, window);
}

/// Weight every credited reference of the document receives; 0 when the
/// document credits nothing.
double document_weight(const Document& doc, const WindowSpec& window, const CountMode& mode)
{
    std::int64_t k = 0;
    bool any_matched = false;
    for (const auto& ref : doc.refs) {
        if (counts_toward_window(ref, window)) {
            ++k;
            any_matched = any_matched || ref.parsed->matched_journal.has_value();
        }
    }
    if (k == 0 || !any_matched) {
        return 0.0;
    }
    if (mode.counting == Counting::integer) {
        return 1.0;
    }
    if (mode.fraction_base == FractionBase::in_window) {
        return 1.0 / static_cast<double>(k);
    }
    if (doc.ref_count < k) {
        throw std::logic_error("document '" + doc.doc_id + "' declares fewer references than it lists in window");
    }
    return 1.0 / static_cast<double>(doc.ref_count);
}

struct CompensatedSum {
    double sum = 0.0;
    double compensation = 0.0;

    void add(double x)
    {
        const double t = sum + x;
        if (std::abs(sum) >= std::abs(x)) {
            compensation += (sum - t) + x;
        } else {
            compensation += (x - t) + sum;
        }
        sum = t;
    }
    double value() const { return sum + compensation; }
};

} // namespace

std::map<std::size_t, double> fractional_weights(const Document& doc, const WindowSpec& window,
                                                 const CountMode& mode)
{
    std::map<std::size_t, double> weights;
    const double w = document_weight(doc, window, mode);
    if (w == 0.0) {
        return weights;
    }
    for (std::size_t i = 0; i < doc.refs.size(); ++i) {
        if (counts_toward_window(doc.refs[i], window) && doc.refs[i].parsed->matched_journal) {
            weights.emplace(i, w);
        }
    }
    return weights;
}

CountTable count_citations(const Corpus& corpus, const JournalTable& journals, const WindowSpec& window,
                           const CountMode& mode, unsigned threads)
{
    std::vector<std::size_t> order;
    order.reserve(corpus.documents.size());
    for (std::size_t d = 0; d < corpus.documents.size(); ++d) {
        if (corpus.documents[d].pub_year == corpus.census_year) {
            order.push_back(d);
        }
    }
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        return corpus.documents[a].doc_id < corpus.documents[b].doc_id;
    });

    std::vector<double> weights(order.size(), 0.0);
    detail::parallel_for(order.size(), threads, [&](std::size_t begin, std::size_t end) {
        for (std::size_t p = begin; p < end; ++p) {
            weights[p] = document_weight(corpus.documents[order[p]], window, mode);
        }
    });

    std::vector<CompensatedSum> sums(journals.size());
    CountTable table{window, mode, {}, 0};
    for (std::size_t p = 0; p < order.size(); ++p) {
        if (weights[p] == 0.0) {
            continue;
        }
        ++table.contributing_docs;
        for (const auto& ref : corpus.documents[order[p]].refs) {
            if (counts_toward_window(ref, window) && ref.parsed->matched_journal) {
                sums.at(ref.parsed->matched_journal->value).add(weights[p]);
            }
        }
    }
    const auto all = journals.journals();
    for (std::size_t j = 0; j < all.size(); ++j) {
        table.values.emplace(all[j].journal_id, sums[j].value());
    }
    return table;
}

void write_count_table(std::ostream& out, const CountTable& table)
{
    out << "journal_id\twindow\tmode\tvalue\n";
    const bool integer = table.mode.counting == Counting::integer;
    const std::string window = to_string(table.window.kind);
    const std::string mode = to_string(table.mode);
    for (const auto& [journal, value] : table.values) {
        out << journal << '\t' << window << '\t' << mode << '\t' << tsv::fixed(value, integer ? 0 : 9) << '\n';
    }
}

} // namespace citenorm
