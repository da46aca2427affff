#include "citenorm/pipeline.hpp"

#include "citenorm/refmatch.hpp"
#include "citenorm/tsv.hpp"

#include <ostream>
#include <set>
#include <stdexcept>

namespace citenorm {

PreparedData prepare_corpus(Corpus corpus, const JournalTable& journals, const PipelineOptions& options)
{
    auto merged = merge_journal_parts(std::move(corpus), journals);
    resolve_references(merged.corpus, merged.journals, options.threads);
    PreparedData data{std::move(merged.corpus), std::move(merged.journals), {}};
    data.report = validate_corpus(data.corpus, data.journals);
    return data;
}

const IndicatorTable& IndicatorSet::variable(const std::string& indicator_id) const
{
    for (const auto& v : variables) {
        if (v.indicator_id == indicator_id) {
            return v;
        }
    }
    throw std::out_of_range("no indicator '" + indicator_id + "'");
}

const CountTable& IndicatorSet::count(const std::string& variable_name) const
{
    for (const auto& c : counts) {
        if (c.variable_name() == variable_name) {
            return c;
        }
    }
    throw std::out_of_range("no count table '" + variable_name + "'");
}

IndicatorSet compute_indicators(const PreparedData& data, const PipelineOptions& options)
{
    const int census = data.corpus.census_year;
    const auto journals = with_items_from_corpus(data.journals, data.corpus, options.citable_types);

    IndicatorSet set;
    const auto count = [&](WindowKind kind, const CountMode& mode) {
        return count_citations(data.corpus, journals, WindowSpec{kind, census}, mode, options.threads);
    };
    // TC-IC, TC-IC2, TC-IC5, TC-FC, TC-FC2, TC-FC5, TC-FC2+, TC-FC5+
    set.counts.push_back(count(WindowKind::all_years, integer_counting));
    set.counts.push_back(count(WindowKind::two_year, integer_counting));
    set.counts.push_back(count(WindowKind::five_year, integer_counting));
    set.counts.push_back(count(WindowKind::all_years, fractional_in_window));
    set.counts.push_back(count(WindowKind::two_year, fractional_in_window));
    set.counts.push_back(count(WindowKind::five_year, fractional_in_window));
    set.counts.push_back(count(WindowKind::two_year, fractional_all_refs));
    set.counts.push_back(count(WindowKind::five_year, fractional_all_refs));

    set.denominators.push_back(compute_denominator(journals, DenomWindow::two_year, census));
    set.denominators.push_back(compute_denominator(journals, DenomWindow::five_year, census));
    set.denominators.push_back(compute_denominator(journals, DenomWindow::census_only, census));
    const auto& denom2 = set.denominators[0];
    const auto& denom5 = set.denominators[1];
    const auto& items = set.denominators[2];

    set.variables.push_back(quasi_if(set.count("TC-IC2"), denom2));
    set.variables.push_back(quasi_if(set.count("TC-IC5"), denom5));
    set.variables.push_back(quasi_if(set.count("TC-FC2"), denom2));
    set.variables.push_back(quasi_if(set.count("TC-FC5"), denom5));
    set.variables.push_back(quasi_if(set.count("TC-FC2+"), denom2));
    set.variables.push_back(quasi_if(set.count("TC-FC5+"), denom5));
    set.variables.push_back(fc_over_p(set.count("TC-FC"), items));
    for (const auto& c : set.counts) {
        set.variables.push_back(as_indicator(c));
    }
    for (const auto& d : set.denominators) {
        set.variables.push_back(as_indicator(d));
    }
    return set;
}

void write_wide_table(std::ostream& out, const std::vector<IndicatorTable>& variables)
{
    std::set<std::string> journals;
    out << "journal_id";
    for (const auto& v : variables) {
        out << '\t' << v.indicator_id;
        for (const auto& [journal, value] : v.values) {
            journals.insert(journal);
        }
        journals.insert(v.undefined_journals.begin(), v.undefined_journals.end());
    }
    out << '\n';
    for (const auto& journal : journals) {
        out << journal;
        for (const auto& v : variables) {
            const auto it = v.values.find(journal);
            out << '\t' << (it == v.values.end() ? std::string("NA") : tsv::fixed(it->second, 6));
        }
        out << '\n';
    }
}

} // namespace citenorm
