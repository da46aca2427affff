#pragma once

// Textbook statistics in long double, written straight from the definitions.

#include <cmath>
#include <cstddef>
#include <optional>
#include <vector>

namespace oracle {

inline std::optional<double> naive_pearson(const std::vector<double>& x, const std::vector<double>& y)
{
    const std::size_t n = x.size();
    long double sx = 0, sy = 0;
    for (std::size_t i = 0; i < n; ++i) {
        sx += x[i];
        sy += y[i];
    }
    const long double mx = sx / n, my = sy / n;
    long double cxy = 0, cxx = 0, cyy = 0;
    for (std::size_t i = 0; i < n; ++i) {
        cxy += (x[i] - mx) * (y[i] - my);
        cxx += (x[i] - mx) * (x[i] - mx);
        cyy += (y[i] - my) * (y[i] - my);
    }
    if (cxx == 0 || cyy == 0) {
        return std::nullopt;
    }
    return static_cast<double>(cxy / std::sqrt(cxx * cyy));
}

/// O(n^2): rank = 1 + #below + (#equal - 1) / 2.
inline std::vector<double> naive_ranks(const std::vector<double>& v)
{
    std::vector<double> r(v.size());
    for (std::size_t i = 0; i < v.size(); ++i) {
        std::size_t below = 0, equal = 0;
        for (double w : v) {
            below += w < v[i];
            equal += w == v[i];
        }
        r[i] = 1.0 + static_cast<double>(below) + (static_cast<double>(equal) - 1.0) / 2.0;
    }
    return r;
}

inline std::optional<double> naive_spearman(const std::vector<double>& x, const std::vector<double>& y)
{
    return naive_pearson(naive_ranks(x), naive_ranks(y));
}

struct NaiveAnova {
    long double ss_between = 0;
    long double ss_within = 0;
    long double eta2 = 0;
    long double sigma2_between = 0;
    long double sigma2_within = 0;
};

inline NaiveAnova naive_anova(const std::vector<std::vector<double>>& groups)
{
    long double grand = 0;
    std::size_t N = 0;
    for (const auto& g : groups) {
        for (double v : g) {
            grand += v;
        }
        N += g.size();
    }
    grand /= N;
    NaiveAnova a;
    long double sum_n2 = 0;
    for (const auto& g : groups) {
        long double m = 0;
        for (double v : g) {
            m += v;
        }
        m /= g.size();
        a.ss_between += g.size() * (m - grand) * (m - grand);
        for (double v : g) {
            a.ss_within += (v - m) * (v - m);
        }
        sum_n2 += static_cast<long double>(g.size()) * g.size();
    }
    const long double k = groups.size();
    const long double total = a.ss_between + a.ss_within;
    a.eta2 = total == 0 ? 0 : a.ss_between / total;
    const long double ms_b = a.ss_between / (k - 1);
    const long double ms_w = a.ss_within / (N - k);
    const long double n0 = (N - sum_n2 / N) / (k - 1);
    a.sigma2_within = ms_w;
    a.sigma2_between = std::max<long double>(0, (ms_b - ms_w) / n0);
    return a;
}

} // namespace oracle
