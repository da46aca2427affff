#pragma once

#include "citenorm/indicators.hpp"

#include <cstddef>
#include <iosfwd>
#include <map>
#include <set>
#include <span>
#include <string>
#include <vector>

namespace citenorm {

/// 100 * (number of values strictly below) / n. Ties share a percentile.
/// Throws std::invalid_argument on empty or non-finite input.
std::vector<double> percentile_rank(std::span<const double> values);
std::map<std::string, double> percentile_rank(const std::map<std::string, double>& values);

/// Six classes: >=99 -> 6, >=95 -> 5, >=90 -> 4, >=75 -> 3, >=50 -> 2, else 1.
int pr6_class(double percentile);

/// Journals with pr100 >= threshold.
std::set<std::string> top_share(const std::map<std::string, double>& pr100, double threshold);

struct PercentileTable {
    std::string source_indicator;
    std::map<std::string, double> pr100;
    std::map<std::string, int> pr6;
    std::size_t n = 0;
};

/// Ranks the defined journals of an indicator; undefined journals are not
/// part of the population.
PercentileTable percentile_table(const IndicatorTable& table);

/// TSV: journal_id, indicator_id, pr100 (4 decimals), pr6.
void write_percentile_table(std::ostream& out, const PercentileTable& table);

} // namespace citenorm
