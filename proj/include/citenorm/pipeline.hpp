#pragma once

#include "citenorm/corpus.hpp"
#include "citenorm/counts.hpp"
#include "citenorm/indicators.hpp"
#include "citenorm/journals.hpp"

#include <set>
#include <vector>

namespace citenorm {

struct PipelineOptions {
    std::set<DocType> citable_types = default_citable_types;
    unsigned threads = 1;
};

struct PreparedData {
    Corpus corpus;
    JournalTable journals;
    ValidationReport report;
};

/// Merge journal parts, parse and match references, validate.
PreparedData prepare_corpus(Corpus corpus, const JournalTable& journals, const PipelineOptions& options);

/// All indicator variables computable from a prepared corpus, in the order
/// quasi-IFs, FC/P, TC-* totals, denominators.
struct IndicatorSet {
    std::vector<CountTable> counts;
    std::vector<DenominatorTable> denominators;
    std::vector<IndicatorTable> variables;

    const IndicatorTable& variable(const std::string& indicator_id) const;
    const CountTable& count(const std::string& variable_name) const;
};

IndicatorSet compute_indicators(const PreparedData& data, const PipelineOptions& options);

/// journal_id plus one column per variable; "NA" marks undefined values.
void write_wide_table(std::ostream& out, const std::vector<IndicatorTable>& variables);

} // namespace citenorm
