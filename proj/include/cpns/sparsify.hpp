#ifndef CPNS_SPARSIFY_HPP
#define CPNS_SPARSIFY_HPP

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <string>
#include <vector>

#include "cpns/errors.hpp"
#include "cpns/graph.hpp"
#include "cpns/resistance.hpp"
#include "cpns/rng.hpp"

namespace cpns {

enum class SamplingStrategy { ss, uniform };

inline std::string strategy_name(SamplingStrategy s) {
    return s == SamplingStrategy::ss ? "ss" : "uniform";
}

inline SamplingStrategy parse_strategy(const std::string& s) {
    if (s == "ss") return SamplingStrategy::ss;
    if (s == "uniform") return SamplingStrategy::uniform;
    throw validation_error("unknown sampling strategy: " + s);
}

// Reweighted subgraph with provenance. source_edge[i] is the index in the
// original graph of edge i of the sparsifier.
struct Sparsifier {
    WeightedGraph graph;
    SamplingStrategy strategy;
    long long q;
    double target_fraction; // 0 when q was given directly
    std::uint64_t seed;
    std::vector<int> source_edge;
};

namespace detail {

// q draws with replacement from p, reweighting count_e * w_e / (p_e q).
// Inversion over the prefix-sum table; identical p and seed give identical
// output regardless of how p was produced.
inline Sparsifier sample_edges(const WeightedGraph& g, const std::vector<double>& p,
                               long long q, std::uint64_t seed, SamplingStrategy tag,
                               double target_fraction) {
    if (q < 1) throw validation_error("sample count q must be >= 1");
    const int m = g.m();
    if (static_cast<int>(p.size()) != m)
        throw validation_error("sampling distribution size does not match edge count");
    std::vector<double> cum(p.size());
    double acc = 0.0;
    for (int e = 0; e < m; ++e) {
        if (!(p[static_cast<std::size_t>(e)] >= 0.0))
            throw validation_error("sampling probabilities must be non-negative");
        acc += p[static_cast<std::size_t>(e)];
        cum[static_cast<std::size_t>(e)] = acc;
    }
    if (!(acc > 0.0)) throw validation_error("sampling distribution sums to zero");

    Rng rng(seed);
    std::vector<long long> count(static_cast<std::size_t>(m), 0);
    for (long long d = 0; d < q; ++d) {
        double u = rng.uniform() * acc;
        auto it = std::upper_bound(cum.begin(), cum.end(), u);
        int e = static_cast<int>(std::min<std::ptrdiff_t>(it - cum.begin(), m - 1));
        count[static_cast<std::size_t>(e)]++;
    }

    std::vector<Edge> edges;
    std::vector<int> source;
    for (int e = 0; e < m; ++e) {
        if (count[static_cast<std::size_t>(e)] == 0) continue;
        double pe = p[static_cast<std::size_t>(e)] / acc;
        const Edge& orig = g.edge(e);
        edges.push_back({orig.u, orig.v,
                         static_cast<double>(count[static_cast<std::size_t>(e)]) * orig.w /
                             (pe * static_cast<double>(q))});
        source.push_back(e);
    }
    return Sparsifier{WeightedGraph(g.n(), std::move(edges)), tag, q, target_fraction,
                      seed, std::move(source)};
}

} // namespace detail

// Effective-resistance sampling: p_e proportional to the leverage w_e R_e.
inline Sparsifier ss_sample(const WeightedGraph& g, const ResistanceSketch& sketch,
                            long long q, std::uint64_t seed, double target_fraction = 0.0) {
    if (sketch.m != g.m() || sketch.n != g.n())
        throw validation_error("resistance sketch does not match graph");
    return detail::sample_edges(g, sketch.leverage, q, seed, SamplingStrategy::ss,
                                target_fraction);
}

inline Sparsifier uniform_sample(const WeightedGraph& g, long long q, std::uint64_t seed,
                                 double target_fraction = 0.0) {
    std::vector<double> p(static_cast<std::size_t>(g.m()), 1.0);
    return detail::sample_edges(g, p, q, seed, SamplingStrategy::uniform, target_fraction);
}

// Expected number of distinct edges after q draws from p (p normalized here).
inline double expected_distinct_edges(const std::vector<double>& p, long long q) {
    double total = 0.0;
    for (double x : p) total += x;
    double e = 0.0;
    for (double x : p) {
        double pe = x / total;
        e += 1.0 - std::pow(1.0 - pe, static_cast<double>(q));
    }
    return e;
}

// Smallest q whose expected distinct-edge count reaches fraction * m.
// fraction = 1 is only reached in the limit; the search stops once the
// expectation is within half an edge of m.
inline long long q_for_fraction(const std::vector<double>& p, double fraction) {
    if (!(fraction > 0.0 && fraction <= 1.0))
        throw validation_error("fraction must be in (0, 1]");
    const double m = static_cast<double>(p.size());
    if (p.empty()) throw validation_error("empty distribution");
    const double target = std::min(fraction * m, m - 0.5);
    if (expected_distinct_edges(p, 1) >= target) return 1;
    long long lo = 1, hi = 2;
    while (expected_distinct_edges(p, hi) < target) {
        lo = hi;
        hi *= 2;
        if (hi > (1LL << 50))
            throw validation_error("q search exceeded bounds");
    }
    while (lo + 1 < hi) {
        long long mid = lo + (hi - lo) / 2;
        if (expected_distinct_edges(p, mid) >= target)
            hi = mid;
        else
            lo = mid;
    }
    return hi;
}

// 1 - w_e R_e. Zero for bridges, approaches one for well-embedded edges.
inline double embeddedness(const ResistanceSketch& sketch, int edge_index) {
    if (edge_index < 0 || edge_index >= static_cast<int>(sketch.leverage.size()))
        throw validation_error("edge index out of range");
    return 1.0 - sketch.leverage[static_cast<std::size_t>(edge_index)];
}

} // namespace cpns

#endif
