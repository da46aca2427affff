#include "citenorm/stats.hpp"

#include "citenorm/detail/parallel.hpp"
#include "citenorm/detail/random.hpp"
#include "citenorm/error.hpp"
#include "citenorm/tsv.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numeric>
#include <ostream>
#include <stdexcept>

namespace citenorm {

namespace {

void check_pair(std::span<const double> x, std::span<const double> y)
{
    if (x.size() != y.size()) {
        throw std::invalid_argument("correlation: samples differ in length");
    }
    if (x.size() < 3) {
        throw std::invalid_argument("correlation: need at least 3 observations");
    }
}

double mean_of(std::span<const double> v)
{
    return std::accumulate(v.begin(), v.end(), 0.0) / static_cast<double>(v.size());
}

} // namespace

std::optional<double> pearson(std::span<const double> x, std::span<const double> y)
{
    check_pair(x, y);
    const double mx = mean_of(x);
    const double my = mean_of(y);
    double sxx = 0.0;
    double syy = 0.0;
    double sxy = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        const double dx = x[i] - mx;
        const double dy = y[i] - my;
        sxx += dx * dx;
        syy += dy * dy;
        sxy += dx * dy;
    }
    if (sxx == 0.0 || syy == 0.0) {
        return std::nullopt;
    }
    return std::clamp(sxy / std::sqrt(sxx * syy), -1.0, 1.0);
}

std::vector<double> average_ranks(std::span<const double> values)
{
    std::vector<std::size_t> order(values.size());
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return values[a] < values[b]; });
    std::vector<double> ranks(values.size());
    std::size_t i = 0;
    while (i < order.size()) {
        std::size_t j = i;
        while (j + 1 < order.size() && values[order[j + 1]] == values[order[i]]) {
            ++j;
        }
        // positions i..j are tied; 1-based mean rank
        const double rank = (static_cast<double>(i) + static_cast<double>(j)) / 2.0 + 1.0;
        for (std::size_t t = i; t <= j; ++t) {
            ranks[order[t]] = rank;
        }
        i = j + 1;
    }
    return ranks;
}

std::optional<double> spearman(std::span<const double> x, std::span<const double> y)
{
    check_pair(x, y);
    const auto rx = average_ranks(x);
    const auto ry = average_ranks(y);
    return pearson(rx, ry);
}

bool CorrelationMatrix::has_undefined() const
{
    for (std::size_t i = 0; i < cells.size(); ++i) {
        for (std::size_t j = 0; j < cells[i].size(); ++j) {
            if (i != j && !cells[i][j]) {
                return true;
            }
        }
    }
    return false;
}

CorrelationMatrix correlation_matrix(std::span<const IndicatorTable> tables)
{
    CorrelationMatrix matrix;
    std::vector<std::string> common;
    if (!tables.empty()) {
        for (const auto& [journal, value] : tables.front().values) {
            const bool everywhere = std::all_of(tables.begin(), tables.end(),
                                                [&](const IndicatorTable& t) { return t.values.contains(journal); });
            if (everywhere) {
                common.push_back(journal);
            }
        }
    }
    if (common.size() < 3) {
        throw std::invalid_argument("correlation_matrix: fewer than 3 journals common to all indicators");
    }
    matrix.population = common.size();

    std::vector<std::vector<double>> columns;
    for (const auto& t : tables) {
        matrix.indicator_ids.push_back(t.indicator_id);
        auto& column = columns.emplace_back();
        column.reserve(common.size());
        for (const auto& journal : common) {
            column.push_back(t.values.at(journal));
        }
    }
    const std::size_t m = tables.size();
    matrix.cells.assign(m, std::vector<std::optional<double>>(m));
    for (std::size_t i = 0; i < m; ++i) {
        for (std::size_t j = i + 1; j < m; ++j) {
            matrix.cells[i][j] = spearman(columns[i], columns[j]);
            matrix.cells[j][i] = pearson(columns[i], columns[j]);
        }
    }
    return matrix;
}

void write_correlation_matrix(std::ostream& out, const CorrelationMatrix& matrix)
{
    out << "indicator";
    for (const auto& id : matrix.indicator_ids) {
        out << '\t' << id;
    }
    out << '\n';
    for (std::size_t i = 0; i < matrix.indicator_ids.size(); ++i) {
        out << matrix.indicator_ids[i];
        for (std::size_t j = 0; j < matrix.indicator_ids.size(); ++j) {
            out << '\t';
            if (i == j) {
                continue;
            }
            out << (matrix.cells[i][j] ? tsv::fixed(*matrix.cells[i][j], 6) : "NA");
        }
        out << '\n';
    }
}

FieldScheme field_scheme_from_journals(const JournalTable& journals, std::string name)
{
    FieldScheme scheme;
    scheme.name = std::move(name);
    for (const auto& j : journals.journals()) {
        scheme.assignment.emplace(j.journal_id, j.field_code);
    }
    return scheme;
}

FieldScheme load_field_scheme(const std::filesystem::path& path)
{
    std::ifstream in(path);
    if (!in) {
        throw InputError("cannot open field scheme " + path.string());
    }
    std::string line;
    std::size_t line_no = 0;
    if (!tsv::next_record(in, line, line_no)) {
        throw InputError("field scheme: missing header");
    }
    const auto header = tsv::split(line, '\t');
    if (header.size() != 2 || tsv::trim(header[0]) != "journal_id" || tsv::trim(header[1]) != "field") {
        throw InputError("field scheme: header must be 'journal_id, field'");
    }
    FieldScheme scheme;
    scheme.name = path.stem().string();
    while (tsv::next_record(in, line, line_no)) {
        const auto cells = tsv::split(line, '\t');
        if (cells.size() != 2 || tsv::trim(cells[0]).empty() || tsv::trim(cells[1]).empty()) {
            throw InputError("field scheme line " + std::to_string(line_no) + ": expected journal_id and field");
        }
        if (!scheme.assignment.emplace(std::string(tsv::trim(cells[0])), std::string(tsv::trim(cells[1]))).second) {
            throw InputError("field scheme line " + std::to_string(line_no) + ": journal assigned twice");
        }
    }
    return scheme;
}

std::size_t GroupedValues::total() const
{
    std::size_t n = 0;
    for (const auto& g : groups) {
        n += g.size();
    }
    return n;
}

GroupedValues group_by_field(const std::map<std::string, double>& values, const FieldScheme& scheme)
{
    std::map<std::string, std::vector<double>> by_field;
    for (const auto& [journal, value] : values) {
        const auto it = scheme.assignment.find(journal);
        if (it == scheme.assignment.end()) {
            throw std::invalid_argument("journal '" + journal + "' has no field in scheme '" + scheme.name + "'");
        }
        by_field[it->second].push_back(value);
    }
    GroupedValues grouped;
    for (auto& [field, group] : by_field) {
        if (group.size() < scheme.min_group_size) {
            grouped.excluded_fields.push_back(field);
            continue;
        }
        grouped.fields.push_back(field);
        grouped.groups.push_back(std::move(group));
    }
    return grouped;
}

namespace {

void require_groups(const GroupedValues& grouped)
{
    if (grouped.groups.size() < 2) {
        throw std::invalid_argument("need at least 2 field groups after the minimum-size filter, have "
                                    + std::to_string(grouped.groups.size()));
    }
}

} // namespace

SumsOfSquares sums_of_squares(const GroupedValues& grouped)
{
    double sum = 0.0;
    for (const auto& g : grouped.groups) {
        sum = std::accumulate(g.begin(), g.end(), sum);
    }
    const double grand = sum / static_cast<double>(grouped.total());
    SumsOfSquares ss;
    for (const auto& g : grouped.groups) {
        const double mean = std::accumulate(g.begin(), g.end(), 0.0) / static_cast<double>(g.size());
        ss.between += static_cast<double>(g.size()) * (mean - grand) * (mean - grand);
        for (double v : g) {
            ss.within += (v - mean) * (v - mean);
            ss.total += (v - grand) * (v - grand);
        }
    }
    return ss;
}

std::optional<double> eta_squared(const GroupedValues& grouped)
{
    require_groups(grouped);
    const auto ss = sums_of_squares(grouped);
    if (ss.total == 0.0) {
        return std::nullopt;
    }
    return std::clamp(ss.between / (ss.between + ss.within), 0.0, 1.0);
}

std::optional<double> eta_squared(const std::map<std::string, double>& values, const FieldScheme& scheme)
{
    return eta_squared(group_by_field(values, scheme));
}

namespace {

struct Design {
    double n = 0.0;
    double k = 0.0;
    double n0 = 0.0;
};

Design design_of(const GroupedValues& grouped)
{
    Design d;
    d.k = static_cast<double>(grouped.groups.size());
    double sum_sq = 0.0;
    for (const auto& g : grouped.groups) {
        d.n += static_cast<double>(g.size());
        sum_sq += static_cast<double>(g.size()) * static_cast<double>(g.size());
    }
    d.n0 = (d.n - sum_sq / d.n) / (d.k - 1.0);
    return d;
}

double between_component(double ss_between, double ss_within, const Design& d)
{
    const double ms_between = ss_between / (d.k - 1.0);
    const double ms_within = d.n > d.k ? ss_within / (d.n - d.k) : 0.0;
    return std::max(0.0, (ms_between - ms_within) / d.n0);
}

} // namespace

VarCompResult varcomp_moments(const GroupedValues& grouped, std::string indicator_id)
{
    require_groups(grouped);
    const auto ss = sums_of_squares(grouped);
    const auto d = design_of(grouped);

    VarCompResult r;
    r.indicator_id = std::move(indicator_id);
    r.groups_used = grouped.groups.size();
    r.sigma2_within = d.n > d.k ? ss.within / (d.n - d.k) : 0.0;
    r.sigma2_between = between_component(ss.between, ss.within, d);
    r.eta2 = ss.total == 0.0 ? 0.0 : std::clamp(ss.between / (ss.between + ss.within), 0.0, 1.0);
    for (std::size_t f = 0; f < grouped.fields.size(); ++f) {
        const auto& g = grouped.groups[f];
        const double mean = std::accumulate(g.begin(), g.end(), 0.0) / static_cast<double>(g.size());
        if (mean == 0.0) {
            continue;
        }
        double ss_group = 0.0;
        for (double v : g) {
            ss_group += (v - mean) * (v - mean);
        }
        const double var = g.size() > 1 ? ss_group / static_cast<double>(g.size() - 1) : 0.0;
        r.dispersion_by_field.emplace(grouped.fields[f], var / mean);
    }
    return r;
}

VarCompResult varcomp_moments(const std::map<std::string, double>& values, const FieldScheme& scheme,
                              std::string indicator_id)
{
    return varcomp_moments(group_by_field(values, scheme), std::move(indicator_id));
}

double permutation_test(const GroupedValues& grouped, PermStatistic statistic, std::size_t n_perm,
                        std::uint64_t seed, unsigned threads)
{
    require_groups(grouped);
    if (n_perm < 999) {
        throw std::invalid_argument("permutation_test: need at least 999 permutations");
    }
    const auto d = design_of(grouped);

    // Centered values make SS_between = sum_g (sum of centered values in g)^2 / n_g
    // exact up to rounding regardless of the data's offset.
    std::vector<double> centered;
    std::vector<std::uint32_t> labels;
    centered.reserve(grouped.total());
    for (std::uint32_t g = 0; g < grouped.groups.size(); ++g) {
        for (double v : grouped.groups[g]) {
            centered.push_back(v);
            labels.push_back(g);
        }
    }
    const double grand = std::accumulate(centered.begin(), centered.end(), 0.0) / d.n;
    double ss_total = 0.0;
    for (double& v : centered) {
        v -= grand;
        ss_total += v * v;
    }
    if (ss_total == 0.0) {
        return 1.0;
    }
    std::vector<double> group_sizes;
    for (const auto& g : grouped.groups) {
        group_sizes.push_back(static_cast<double>(g.size()));
    }

    const auto evaluate = [&](const std::vector<std::uint32_t>& assignment) {
        std::vector<double> sums(group_sizes.size(), 0.0);
        for (std::size_t i = 0; i < centered.size(); ++i) {
            sums[assignment[i]] += centered[i];
        }
        double ss_between = 0.0;
        for (std::size_t g = 0; g < sums.size(); ++g) {
            ss_between += sums[g] * sums[g] / group_sizes[g];
        }
        if (statistic == PermStatistic::eta2) {
            return ss_between / ss_total;
        }
        return between_component(ss_between, std::max(0.0, ss_total - ss_between), d);
    };

    const double observed = evaluate(labels);
    const double tolerance = 1e-10 * std::abs(observed);
    std::vector<std::size_t> exceed(n_perm, 0);
    detail::parallel_for(n_perm, threads, [&](std::size_t begin, std::size_t end) {
        std::vector<std::uint32_t> shuffled;
        for (std::size_t p = begin; p < end; ++p) {
            shuffled = labels;
            auto rng = detail::substream(seed, p);
            for (std::size_t i = shuffled.size() - 1; i > 0; --i) {
                std::swap(shuffled[i], shuffled[detail::uniform_below(rng, i + 1)]);
            }
            exceed[p] = evaluate(shuffled) >= observed - tolerance ? 1 : 0;
        }
    });
    const auto count = std::accumulate(exceed.begin(), exceed.end(), std::size_t{0});
    return static_cast<double>(1 + count) / static_cast<double>(n_perm + 1);
}

double permutation_test(const std::map<std::string, double>& values, const FieldScheme& scheme,
                        PermStatistic statistic, std::size_t n_perm, std::uint64_t seed, unsigned threads)
{
    return permutation_test(group_by_field(values, scheme), statistic, n_perm, seed, threads);
}

std::optional<double> variance_reduction(double reference_sigma2, double alternative_sigma2)
{
    if (reference_sigma2 == 0.0) {
        return std::nullopt;
    }
    return (reference_sigma2 - alternative_sigma2) / reference_sigma2;
}

std::optional<double> variance_reduction(const VarCompResult& reference, const VarCompResult& alternative)
{
    return variance_reduction(reference.sigma2_between, alternative.sigma2_between);
}

double ks_statistic(std::span<const double> values, const std::function<double(double)>& cdf)
{
    if (values.empty()) {
        throw std::invalid_argument("ks_statistic: empty sample");
    }
    std::vector<double> sorted(values.begin(), values.end());
    std::sort(sorted.begin(), sorted.end());
    const double n = static_cast<double>(sorted.size());
    double d = 0.0;
    for (std::size_t i = 0; i < sorted.size(); ++i) {
        const double f = cdf(sorted[i]);
        d = std::max({d, static_cast<double>(i + 1) / n - f, f - static_cast<double>(i) / n});
    }
    return d;
}

double ks_normality(std::span<const double> values)
{
    if (values.size() < 5) {
        throw std::invalid_argument("ks_normality: need at least 5 observations");
    }
    const double n = static_cast<double>(values.size());
    const double mean = mean_of(values);
    double ss = 0.0;
    for (double v : values) {
        ss += (v - mean) * (v - mean);
    }
    if (ss == 0.0) {
        throw std::invalid_argument("ks_normality: zero variance");
    }
    const double sd = std::sqrt(ss / (n - 1.0));
    return ks_statistic(values, [&](double x) { return 0.5 * std::erfc(-(x - mean) / (sd * std::sqrt(2.0))); });
}

void write_varcomp_table(std::ostream& out, std::span<const VarCompResult> results)
{
    out << "indicator_id\tsigma2_between\tsigma2_within\teta2\tperm_p\tgroups_used\n";
    for (const auto& r : results) {
        out << r.indicator_id << '\t' << tsv::general(r.sigma2_between, 10) << '\t'
            << tsv::general(r.sigma2_within, 10) << '\t' << tsv::fixed(r.eta2, 6) << '\t'
            << (r.perm_p ? tsv::general(*r.perm_p, 6) : "NA") << '\t' << r.groups_used << '\n';
    }
}

} // namespace citenorm
