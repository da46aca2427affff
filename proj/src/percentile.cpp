#include "citenorm/percentile.hpp"

#include "citenorm/tsv.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>
#include <stdexcept>

namespace citenorm {

std::vector<double> percentile_rank(std::span<const double> values)
{
    if (values.empty()) {
        throw std::invalid_argument("percentile_rank: empty population");
    }
    std::vector<double> sorted(values.begin(), values.end());
    for (double v : sorted) {
        if (!std::isfinite(v)) {
            throw std::invalid_argument("percentile_rank: non-finite value");
        }
    }
    std::sort(sorted.begin(), sorted.end());
    const double n = static_cast<double>(sorted.size());
    std::vector<double> out;
    out.reserve(values.size());
    for (double v : values) {
        const auto below = std::lower_bound(sorted.begin(), sorted.end(), v) - sorted.begin();
        out.push_back(100.0 * static_cast<double>(below) / n);
    }
    return out;
}

std::map<std::string, double> percentile_rank(const std::map<std::string, double>& values)
{
    std::vector<double> flat;
    flat.reserve(values.size());
    for (const auto& [journal, value] : values) {
        flat.push_back(value);
    }
    const auto ranks = percentile_rank(flat);
    std::map<std::string, double> out;
    std::size_t i = 0;
    for (const auto& [journal, value] : values) {
        out.emplace_hint(out.end(), journal, ranks[i++]);
    }
    return out;
}

int pr6_class(double percentile)
{
    if (percentile >= 99.0) return 6;
    if (percentile >= 95.0) return 5;
    if (percentile >= 90.0) return 4;
    if (percentile >= 75.0) return 3;
    if (percentile >= 50.0) return 2;
    return 1;
}

std::set<std::string> top_share(const std::map<std::string, double>& pr100, double threshold)
{
    std::set<std::string> out;
    for (const auto& [journal, pr] : pr100) {
        if (pr >= threshold) {
            out.insert(journal);
        }
    }
    return out;
}

PercentileTable percentile_table(const IndicatorTable& table)
{
    PercentileTable out;
    out.source_indicator = table.indicator_id;
    out.n = table.values.size();
    if (table.values.empty()) {
        return out;
    }
    out.pr100 = percentile_rank(table.values);
    for (const auto& [journal, pr] : out.pr100) {
        out.pr6.emplace_hint(out.pr6.end(), journal, pr6_class(pr));
    }
    return out;
}

void write_percentile_table(std::ostream& out, const PercentileTable& table)
{
    out << "journal_id\tindicator_id\tpr100\tpr6\n";
    for (const auto& [journal, pr] : table.pr100) {
        out << journal << '\t' << table.source_indicator << '\t' << tsv::fixed(pr, 4) << '\t' << table.pr6.at(journal)
            << '\n';
    }
}

} // namespace citenorm
