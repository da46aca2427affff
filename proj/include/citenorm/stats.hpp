#pragma once

#include "citenorm/indicators.hpp"
#include "citenorm/journals.hpp"

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <functional>
#include <iosfwd>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace citenorm {

// ---------------------------------------------------------------------------
// Correlation

/// Product-moment correlation. Throws std::invalid_argument when the lengths
/// differ or are below 3; returns nullopt when either side has zero variance.
std::optional<double> pearson(std::span<const double> x, std::span<const double> y);

/// Pearson correlation of average ranks (ties share the mean of their ranks).
std::optional<double> spearman(std::span<const double> x, std::span<const double> y);

/// 1-based ranks, ties averaged.
std::vector<double> average_ranks(std::span<const double> values);

/// Spearman in the upper triangle (row < column), Pearson in the lower
/// triangle, empty diagonal. Computed over the journals defined in every table.
struct CorrelationMatrix {
    std::vector<std::string> indicator_ids;
    std::size_t population = 0;
    std::vector<std::vector<std::optional<double>>> cells;

    bool has_undefined() const;
};

/// Throws std::invalid_argument when fewer than 3 journals are common to all
/// tables.
CorrelationMatrix correlation_matrix(std::span<const IndicatorTable> tables);

/// Header row "indicator" + ids; 6 decimals; "NA" for undefined; diagonal empty.
void write_correlation_matrix(std::ostream& out, const CorrelationMatrix& matrix);

// ---------------------------------------------------------------------------
// Between-field effects

struct FieldScheme {
    std::string name;
    std::map<std::string, std::string> assignment;
    std::size_t min_group_size = 10;
};

FieldScheme field_scheme_from_journals(const JournalTable& journals, std::string name = "journals");
/// TSV with header journal_id, field. A journal listed twice throws InputError.
FieldScheme load_field_scheme(const std::filesystem::path& path);

/// Values split into retained field groups. Fields are in code order and each
/// group lists its journals in id order.
struct GroupedValues {
    std::vector<std::string> fields;
    std::vector<std::vector<double>> groups;
    std::vector<std::string> excluded_fields;

    std::size_t total() const;
};

/// Throws std::invalid_argument when a journal has no field assignment.
GroupedValues group_by_field(const std::map<std::string, double>& values, const FieldScheme& scheme);

struct SumsOfSquares {
    double between = 0.0;
    double within = 0.0;
    double total = 0.0;
};

SumsOfSquares sums_of_squares(const GroupedValues& grouped);

/// SS_between / SS_total over retained groups; nullopt when SS_total is 0.
/// Throws std::invalid_argument when fewer than 2 groups are retained.
std::optional<double> eta_squared(const GroupedValues& grouped);
std::optional<double> eta_squared(const std::map<std::string, double>& values, const FieldScheme& scheme);

struct VarCompResult {
    std::string indicator_id;
    double sigma2_between = 0.0;
    double sigma2_within = 0.0;
    /// 0 when SS_total is 0.
    double eta2 = 0.0;
    std::optional<double> perm_p;
    std::size_t groups_used = 0;
    /// Sample variance over mean per retained field; fields with zero mean
    /// are omitted.
    std::map<std::string, double> dispersion_by_field;
};

/// One-way random-effects method-of-moments estimates:
///   sigma2_within  = MS_within
///   sigma2_between = max(0, (MS_between - MS_within) / n0),
///   n0 = (N - sum n_i^2 / N) / (k - 1).
VarCompResult varcomp_moments(const GroupedValues& grouped, std::string indicator_id = {});
VarCompResult varcomp_moments(const std::map<std::string, double>& values, const FieldScheme& scheme,
                              std::string indicator_id = {});

enum class PermStatistic : std::uint8_t { eta2, sigma2_between };

/// Add-one permutation p-value, (1 + #{stat* >= stat}) / (n_perm + 1), with
/// field labels shuffled over the retained journals. Permutation i draws from
/// its own generator seeded from (seed, i), so the result is independent of
/// the thread count. Throws std::invalid_argument when n_perm < 999.
double permutation_test(const GroupedValues& grouped, PermStatistic statistic, std::size_t n_perm,
                        std::uint64_t seed, unsigned threads = 1);
double permutation_test(const std::map<std::string, double>& values, const FieldScheme& scheme,
                        PermStatistic statistic, std::size_t n_perm, std::uint64_t seed, unsigned threads = 1);

/// (reference - alternative) / reference; nullopt when reference is 0.
std::optional<double> variance_reduction(double reference_sigma2, double alternative_sigma2);
std::optional<double> variance_reduction(const VarCompResult& reference, const VarCompResult& alternative);

/// One-sample Kolmogorov-Smirnov D = sup |F_n - cdf| for any continuous
/// reference cdf. Throws std::invalid_argument on empty input.
double ks_statistic(std::span<const double> values, const std::function<double(double)>& cdf);

/// One-sample Kolmogorov-Smirnov D against a normal with the sample mean and
/// (n-1) standard deviation. Throws std::invalid_argument for n < 5 or zero
/// variance.
double ks_normality(std::span<const double> values);

/// TSV: indicator_id, sigma2_between, sigma2_within, eta2, perm_p, groups_used.
void write_varcomp_table(std::ostream& out, std::span<const VarCompResult> results);

} // namespace citenorm
