#ifndef CPNS_METRICS_HPP
#define CPNS_METRICS_HPP

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "cpns/contagion.hpp"
#include "cpns/errors.hpp"

namespace cpns {

enum class MetricTag { hamming, mi, fraction };

inline std::string metric_name(MetricTag t) {
    switch (t) {
        case MetricTag::hamming: return "hamming";
        case MetricTag::mi: return "mi";
        case MetricTag::fraction: return "fraction";
    }
    return "?";
}

inline MetricTag parse_metric(const std::string& s) {
    if (s == "hamming") return MetricTag::hamming;
    if (s == "mi") return MetricTag::mi;
    if (s == "fraction") return MetricTag::fraction;
    throw validation_error("unknown metric: " + s);
}

using StateVector = std::vector<std::uint8_t>;

inline long long hamming(const StateVector& a, const StateVector& b) {
    if (a.size() != b.size()) throw validation_error("hamming: length mismatch");
    long long d = 0;
    for (std::size_t i = 0; i < a.size(); ++i) d += a[i] != b[i];
    return d;
}

// Mutual information in bits of the 2x2 contingency table of paired bits.
inline double mutual_information(const StateVector& a, const StateVector& b) {
    if (a.size() != b.size())
        throw validation_error("mutual_information: length mismatch");
    if (a.empty()) throw validation_error("mutual_information: empty vectors");
    double n = static_cast<double>(a.size());
    double cell[2][2] = {{0, 0}, {0, 0}};
    for (std::size_t i = 0; i < a.size(); ++i)
        cell[a[i] ? 1 : 0][b[i] ? 1 : 0] += 1.0;
    double ra[2] = {cell[0][0] + cell[0][1], cell[1][0] + cell[1][1]};
    double cb[2] = {cell[0][0] + cell[1][0], cell[0][1] + cell[1][1]};
    // a degenerate marginal carries no information; returning early keeps
    // the constant-vector case exactly zero
    if (ra[0] == 0.0 || ra[1] == 0.0 || cb[0] == 0.0 || cb[1] == 0.0) return 0.0;
    double mi = 0.0;
    for (int x = 0; x < 2; ++x) {
        for (int y = 0; y < 2; ++y) {
            if (cell[x][y] <= 0.0) continue;
            double pxy = cell[x][y] / n;
            mi += pxy * std::log2(pxy * n * n / (ra[x] * cb[y]));
        }
    }
    return std::max(mi, 0.0);
}

inline double binary_entropy(const StateVector& a) {
    if (a.empty()) throw validation_error("entropy: empty vector");
    double n = static_cast<double>(a.size());
    double ones = 0;
    for (auto x : a) ones += x ? 1.0 : 0.0;
    double h = 0.0;
    for (double c : {ones, n - ones})
        if (c > 0) h -= (c / n) * std::log2(c / n);
    return h;
}

inline double fraction_infected(const StateVector& a) {
    if (a.empty()) throw validation_error("fraction_infected: empty vector");
    double ones = 0;
    for (auto x : a) ones += x ? 1.0 : 0.0;
    return ones / static_cast<double>(a.size());
}

// Per-timestep mean and 95% confidence half-width (normal approximation).
struct MetricSeries {
    MetricTag tag;
    std::vector<double> mean;
    std::vector<double> ci_half;
    long long samples_per_step = 0;
};

namespace detail {

inline MetricSeries summarize(MetricTag tag, const std::vector<std::vector<double>>& per_step) {
    MetricSeries s;
    s.tag = tag;
    s.mean.reserve(per_step.size());
    s.ci_half.reserve(per_step.size());
    for (const auto& vals : per_step) {
        double n = static_cast<double>(vals.size());
        double mean = 0.0;
        for (double v : vals) mean += v;
        mean /= n;
        double var = 0.0;
        if (vals.size() > 1) {
            for (double v : vals) var += (v - mean) * (v - mean);
            var /= (n - 1.0);
        }
        s.mean.push_back(mean);
        s.ci_half.push_back(1.96 * std::sqrt(var / n));
        s.samples_per_step = static_cast<long long>(vals.size());
    }
    return s;
}

inline void check_aligned(const std::vector<Trajectory>& runs) {
    if (runs.size() < 2) throw validation_error("need at least 2 runs");
    for (const auto& r : runs) {
        if (r.states.size() != runs.front().states.size())
            throw validation_error("trajectories have mismatched lengths");
        if (r.patient_zero != runs.front().patient_zero)
            throw validation_error("trajectories have mismatched patient zero");
    }
}

inline double pair_metric(MetricTag tag, const StateVector& a, const StateVector& b) {
    return tag == MetricTag::hamming ? static_cast<double>(hamming(a, b))
                                     : mutual_information(a, b);
}

} // namespace detail

// Per-timestep average over independent runs on one network. Hamming and MI
// average over all unordered run pairs; fraction averages over runs.
inline MetricSeries baseline(const std::vector<Trajectory>& runs, MetricTag tag) {
    detail::check_aligned(runs);
    const std::size_t T = runs.front().states.size();
    std::vector<std::vector<double>> per_step(T);
    for (std::size_t t = 0; t < T; ++t) {
        if (tag == MetricTag::fraction) {
            for (const auto& r : runs)
                per_step[t].push_back(fraction_infected(r.states[t]));
        } else {
            for (std::size_t i = 0; i < runs.size(); ++i)
                for (std::size_t j = i + 1; j < runs.size(); ++j)
                    per_step[t].push_back(
                        detail::pair_metric(tag, runs[i].states[t], runs[j].states[t]));
        }
    }
    return detail::summarize(tag, per_step);
}

// Original-vs-sparsifier comparison: hamming/MI over all cross pairs;
// fraction is the sparsifier-side mean series.
inline MetricSeries compare_series(const std::vector<Trajectory>& original,
                                   const std::vector<Trajectory>& cpns, MetricTag tag) {
    if (original.empty() || cpns.empty())
        throw validation_error("need runs on both networks");
    const std::size_t T = original.front().states.size();
    for (const auto& r : cpns) {
        if (r.states.size() != T)
            throw validation_error("trajectories have mismatched lengths");
        if (r.patient_zero != original.front().patient_zero)
            throw validation_error("trajectories have mismatched patient zero");
    }
    std::vector<std::vector<double>> per_step(T);
    for (std::size_t t = 0; t < T; ++t) {
        if (tag == MetricTag::fraction) {
            for (const auto& r : cpns)
                per_step[t].push_back(fraction_infected(r.states[t]));
        } else {
            for (const auto& a : original)
                for (const auto& b : cpns)
                    per_step[t].push_back(
                        detail::pair_metric(tag, a.states[t], b.states[t]));
        }
    }
    return detail::summarize(tag, per_step);
}

// nullopt when either side has zero variance.
inline std::optional<double> pearson_r(const std::vector<double>& x,
                                       const std::vector<double>& y) {
    if (x.size() != y.size()) throw validation_error("pearson_r: length mismatch");
    if (x.size() < 2) throw validation_error("pearson_r: need at least 2 points");
    double n = static_cast<double>(x.size());
    double mx = 0, my = 0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        mx += x[i];
        my += y[i];
    }
    mx /= n;
    my /= n;
    double sxx = 0, syy = 0, sxy = 0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        sxx += (x[i] - mx) * (x[i] - mx);
        syy += (y[i] - my) * (y[i] - my);
        sxy += (x[i] - mx) * (y[i] - my);
    }
    if (sxx <= 0.0 || syy <= 0.0) return std::nullopt;
    return sxy / std::sqrt(sxx * syy);
}

// (normalized EEI, normalized leverage) per edge. sorted_quantile pairs the
// sorted columns instead of matching edges.
inline std::vector<std::pair<double, double>> importance_pairs(
    const ImportanceTable& table, bool sorted_quantile = false) {
    if (table.eei.empty()) throw validation_error("empty importance table");
    std::vector<double> a = table.eei_norm, b = table.leverage_norm;
    bool any_a = false, any_b = false;
    for (double x : a) any_a = any_a || x > 0;
    for (double x : b) any_b = any_b || x > 0;
    if (!any_a || !any_b) throw validation_error("importance column is all zero");
    if (sorted_quantile) {
        std::sort(a.begin(), a.end());
        std::sort(b.begin(), b.end());
    }
    std::vector<std::pair<double, double>> out;
    out.reserve(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) out.emplace_back(a[i], b[i]);
    return out;
}

inline std::optional<double> importance_correlation(const ImportanceTable& table,
                                                    bool sorted_quantile = false) {
    auto pairs = importance_pairs(table, sorted_quantile);
    std::vector<double> x, y;
    x.reserve(pairs.size());
    y.reserve(pairs.size());
    for (auto [a, b] : pairs) {
        x.push_back(a);
        y.push_back(b);
    }
    return pearson_r(x, y);
}

} // namespace cpns

#endif
