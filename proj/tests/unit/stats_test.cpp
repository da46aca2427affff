#include "citenorm/error.hpp"
#include "citenorm/stats.hpp"

#include "helpers.hpp"
#include "oracle/stats_formulas.hpp"

#include <doctest.h>

#include <cmath>
#include <fstream>
#include <random>
#include <sstream>

using namespace citenorm;

namespace {

GroupedValues grouped(std::vector<std::vector<double>> groups)
{
    GroupedValues g;
    for (std::size_t i = 0; i < groups.size(); ++i) {
        g.fields.push_back("G" + std::to_string(i));
    }
    g.groups = std::move(groups);
    return g;
}

} // namespace

TEST_CASE("pearson basics")
{
    const std::vector<double> x{1, 2, 3, 4, 5};
    std::vector<double> y;
    std::vector<double> neg;
    for (double v : x) {
        y.push_back(2 * v + 1);
        neg.push_back(-v);
    }
    CHECK(*pearson(x, y) == doctest::Approx(1.0));
    CHECK(*pearson(x, neg) == doctest::Approx(-1.0));
    CHECK_FALSE(pearson(x, std::vector<double>(5, 2.0)));
    CHECK_THROWS_AS(pearson(x, std::vector<double>{1, 2}), std::invalid_argument);
    CHECK_THROWS_AS(pearson(std::vector<double>{1, 2}, std::vector<double>{1, 2}), std::invalid_argument);
}

TEST_CASE("pearson matches the direct formula")
{
    std::mt19937_64 rng(100);
    std::normal_distribution<double> z;
    std::vector<double> x(100);
    std::vector<double> y(100);
    for (int trial = 0; trial < 20; ++trial) {
        for (std::size_t i = 0; i < x.size(); ++i) {
            x[i] = z(rng) * 10 + 3;
            y[i] = x[i] * 0.3 + z(rng);
        }
        CHECK(std::abs(*pearson(x, y) - *oracle::naive_pearson(x, y)) < 1e-12);
    }
}

TEST_CASE("spearman and average ranks")
{
    const std::vector<double> x{1, 2, 3, 4, 5, 6};
    std::vector<double> cube;
    for (double v : x) {
        cube.push_back(v * v * v - 40);
    }
    CHECK(*spearman(x, cube) == doctest::Approx(1.0));
    const std::vector<double> reversed{6, 5, 4, 3, 2, 1};
    CHECK(*spearman(x, reversed) == doctest::Approx(-1.0));

    const std::vector<double> tx{1, 2, 2, 3};
    const std::vector<double> ty{1, 3, 2, 4};
    CHECK(average_ranks(tx) == std::vector<double>{1, 2.5, 2.5, 4});
    // ranks (1, 2.5, 2.5, 4) vs (1, 3, 2, 4): sxy = 4.5, sxx = 4.5, syy = 5
    CHECK(*spearman(tx, ty) == doctest::Approx(4.5 / std::sqrt(4.5 * 5.0)).epsilon(1e-14));
    CHECK(average_ranks(tx) == oracle::naive_ranks(tx));
}

TEST_CASE("correlation matrix layout")
{
    IndicatorTable a{"A", {{"j1", 1}, {"j2", 2}, {"j3", 3}, {"j4", 10}}, {}};
    IndicatorTable b{"B", {{"j1", 1}, {"j2", 4}, {"j3", 9}, {"j4", 100}, {"j5", 7}}, {}};
    IndicatorTable c{"C", {{"j1", 5}, {"j2", 5}, {"j3", 5}, {"j4", 5}}, {}};
    const std::vector<IndicatorTable> same{a, a};
    const auto m_same = correlation_matrix(same);
    CHECK(*m_same.cells[0][1] == doctest::Approx(1.0));
    CHECK(*m_same.cells[1][0] == doctest::Approx(1.0));
    CHECK_FALSE(m_same.cells[0][0]);

    const std::vector<IndicatorTable> tables{a, b, c};
    const auto m = correlation_matrix(tables);
    CHECK(m.population == 4);
    const std::vector<double> av{1, 2, 3, 10};
    const std::vector<double> bv{1, 4, 9, 100};
    CHECK(*m.cells[0][1] == *spearman(av, bv));
    CHECK(*m.cells[1][0] == *pearson(av, bv));
    CHECK(*m.cells[0][1] == doctest::Approx(1.0));
    CHECK(*m.cells[1][0] < 1.0);
    CHECK(m.has_undefined());
    std::ostringstream out;
    write_correlation_matrix(out, m);
    CHECK(out.str().rfind("indicator\tA\tB\tC\n", 0) == 0);
    CHECK(out.str().find("NA") != std::string::npos);
}

TEST_CASE("eta squared edge cases")
{
    CHECK(*eta_squared(grouped({{1, 2, 3}, {3, 2, 1}})) == doctest::Approx(0.0));
    CHECK(*eta_squared(grouped({{1, 1, 1}, {5, 5}})) == doctest::Approx(1.0));
    CHECK_FALSE(eta_squared(grouped({{2, 2}, {2, 2}})));
    CHECK_THROWS_AS(eta_squared(grouped({{1, 2, 3}})), std::invalid_argument);

    const auto g = grouped({{1, 2, 4, 7}, {3, 3, 8}, {10, 12, 9, 11, 15}});
    const auto naive = oracle::naive_anova(g.groups);
    const auto ss = sums_of_squares(g);
    CHECK(ss.between == doctest::Approx(static_cast<double>(naive.ss_between)).epsilon(1e-13));
    CHECK(ss.within == doctest::Approx(static_cast<double>(naive.ss_within)).epsilon(1e-13));
    CHECK(*eta_squared(g) == doctest::Approx(static_cast<double>(naive.eta2)).epsilon(1e-13));
}

TEST_CASE("variance components")
{
    const auto flat = varcomp_moments(grouped({{4, 4, 4}, {4, 4}}));
    CHECK(flat.sigma2_between == 0.0);
    CHECK(flat.sigma2_within == 0.0);
    CHECK(flat.eta2 == 0.0);

    // group means equal, large spread: MS_between < MS_within
    const auto clamped = varcomp_moments(grouped({{0, 10, 5}, {1, 9, 5}, {5, 0, 10}}));
    CHECK(clamped.sigma2_between == 0.0);
    CHECK(clamped.sigma2_within > 0.0);

    const auto g = grouped({{1, 2, 4, 7}, {3, 3, 8}, {10, 12, 9, 11, 15}});
    const auto r = varcomp_moments(g, "X");
    const auto naive = oracle::naive_anova(g.groups);
    CHECK(r.indicator_id == "X");
    CHECK(r.groups_used == 3);
    CHECK(r.sigma2_between == doctest::Approx(static_cast<double>(naive.sigma2_between)).epsilon(1e-13));
    CHECK(r.sigma2_within == doctest::Approx(static_cast<double>(naive.sigma2_within)).epsilon(1e-13));
    CHECK(r.dispersion_by_field.size() == 3);
}

TEST_CASE("planted between-field variance")
{
    // raw draws, averaged over seeds: the estimator is unbiased for the
    // population component
    double mean_est = 0.0;
    const int reps = 40;
    for (int rep = 0; rep < reps; ++rep) {
        std::mt19937_64 rng(500 + rep);
        std::normal_distribution<double> z;
        std::vector<std::vector<double>> groups(11);
        for (auto& g : groups) {
            const double effect = z(rng);
            for (int i = 0; i < 300; ++i) {
                g.push_back(effect + z(rng));
            }
        }
        mean_est += varcomp_moments(grouped(groups)).sigma2_between / reps;
    }
    CHECK(mean_est == doctest::Approx(1.0).epsilon(0.15));
}

TEST_CASE("field schemes and grouping")
{
    FieldScheme scheme;
    scheme.min_group_size = 2;
    scheme.assignment = {{"a", "X"}, {"b", "X"}, {"c", "Y"}, {"d", "Y"}, {"e", "Z"}};
    const auto g = group_by_field({{"a", 1}, {"b", 2}, {"c", 3}, {"d", 4}, {"e", 5}}, scheme);
    CHECK(g.fields == std::vector<std::string>{"X", "Y"});
    CHECK(g.excluded_fields == std::vector<std::string>{"Z"});
    CHECK(g.total() == 4);
    CHECK_THROWS_AS(group_by_field({{"q", 1}}, scheme), std::invalid_argument);

    testing::TempDir dir("fields");
    std::ofstream(dir / "f.tsv") << "journal_id\tfield\na\tX\nb\tY\n";
    CHECK(load_field_scheme(dir / "f.tsv").assignment.size() == 2);
    std::ofstream(dir / "dup.tsv") << "journal_id\tfield\na\tX\na\tY\n";
    CHECK_THROWS_AS(load_field_scheme(dir / "dup.tsv"), InputError);
}

TEST_CASE("permutation test")
{
    std::vector<std::vector<double>> separated(3);
    for (int f = 0; f < 3; ++f) {
        for (int i = 0; i < 10; ++i) {
            separated[f].push_back(100.0 * f + i);
        }
    }
    const auto g = grouped(separated);
    CHECK(permutation_test(g, PermStatistic::eta2, 999, 1) == doctest::Approx(1.0 / 1000.0));
    CHECK(permutation_test(g, PermStatistic::sigma2_between, 999, 1) == doctest::Approx(1.0 / 1000.0));
    CHECK_THROWS_AS(permutation_test(g, PermStatistic::eta2, 998, 1), std::invalid_argument);

    std::mt19937_64 rng(7);
    std::normal_distribution<double> z;
    std::vector<std::vector<double>> noise(4);
    for (auto& grp : noise) {
        for (int i = 0; i < 50; ++i) {
            grp.push_back(z(rng));
        }
    }
    const auto n = grouped(noise);
    const double p = permutation_test(n, PermStatistic::eta2, 1999, 11);
    CHECK(p > 0.05);
    CHECK(permutation_test(n, PermStatistic::eta2, 1999, 11) == p);
    CHECK(permutation_test(n, PermStatistic::eta2, 1999, 11, 4) == p);
    CHECK(permutation_test(grouped({{3, 3}, {3, 3}}), PermStatistic::eta2, 999, 1) == 1.0);
}

TEST_CASE("variance reduction")
{
    CHECK(*variance_reduction(0.24, 0.02) == doctest::Approx(0.9167).epsilon(1e-4));
    CHECK(*variance_reduction(0.24, 0.05) == doctest::Approx(0.7917).epsilon(1e-4));
    CHECK(*variance_reduction(0.3, 0.3) == 0.0);
    CHECK(*variance_reduction(0.1, 0.2) < 0.0);
    CHECK_FALSE(variance_reduction(0.0, 0.1));
}

TEST_CASE("Kolmogorov-Smirnov screen")
{
    // sample at the fitted normal's quantiles i/(n+1)
    std::vector<double> q;
    const int n = 200;
    for (int i = 1; i <= n; ++i) {
        const double p = static_cast<double>(i) / (n + 1);
        // inverse normal by bisection on erfc
        double lo = -10;
        double hi = 10;
        for (int it = 0; it < 200; ++it) {
            const double mid = (lo + hi) / 2;
            (0.5 * std::erfc(-mid / std::sqrt(2.0)) < p ? lo : hi) = mid;
        }
        q.push_back(lo);
    }
    CHECK(ks_normality(q) < 2.0 / std::sqrt(static_cast<double>(n)));

    std::mt19937_64 rng(5);
    std::normal_distribution<double> z;
    std::vector<double> skewed;
    for (int i = 0; i < 1000; ++i) {
        skewed.push_back(std::exp(1.5 * z(rng)));
    }
    CHECK(ks_normality(skewed) > 2.0 / std::sqrt(1000.0));

    // three points on a uniform reference: F = (0.2, 0.5, 0.9); gaps
    // max(1/3-0.2, 0.2, 2/3-0.5, 0.5-1/3, 1-0.9, 0.9-2/3) = 0.2333...
    const std::vector<double> three{0.2, 0.5, 0.9};
    CHECK(ks_statistic(three, [](double x) { return x; }) == doctest::Approx(0.9 - 2.0 / 3.0));
    CHECK_THROWS_AS(ks_normality(std::vector<double>{1, 2, 3}), std::invalid_argument);
    CHECK_THROWS_AS(ks_normality(std::vector<double>(6, 1.0)), std::invalid_argument);
}

TEST_CASE("varcomp table output")
{
    VarCompResult r;
    r.indicator_id = "IF2-IC";
    r.sigma2_between = 0.24;
    r.sigma2_within = 1.5;
    r.eta2 = 0.125;
    r.perm_p = 0.0001;
    r.groups_used = 11;
    std::ostringstream out;
    write_varcomp_table(out, std::vector<VarCompResult>{r});
    CHECK(out.str() == "indicator_id\tsigma2_between\tsigma2_within\teta2\tperm_p\tgroups_used\n"
                       "IF2-IC\t0.24\t1.5\t0.125000\t0.0001\t11\n");
}
