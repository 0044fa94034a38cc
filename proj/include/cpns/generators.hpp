#ifndef CPNS_GENERATORS_HPP
#define CPNS_GENERATORS_HPP

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <string>
#include <unordered_map>
#include <unordered_set>
#include <vector>

#include "cpns/errors.hpp"
#include "cpns/graph.hpp"
#include "cpns/rng.hpp"

namespace cpns {

enum class GraphFamily { configuration_explog, sbm4, complete_normal, complete_powerlaw };

inline GraphFamily parse_family(const std::string& s) {
    if (s == "configuration-explog") return GraphFamily::configuration_explog;
    if (s == "sbm4") return GraphFamily::sbm4;
    if (s == "complete-normal") return GraphFamily::complete_normal;
    if (s == "complete-powerlaw") return GraphFamily::complete_powerlaw;
    throw validation_error("unknown graph family: " + s);
}

inline std::string family_name(GraphFamily f) {
    switch (f) {
        case GraphFamily::configuration_explog: return "configuration-explog";
        case GraphFamily::sbm4: return "sbm4";
        case GraphFamily::complete_normal: return "complete-normal";
        case GraphFamily::complete_powerlaw: return "complete-powerlaw";
    }
    return "?";
}

struct GeneratorSpec {
    GraphFamily family = GraphFamily::sbm4;
    int n = 500;
    std::uint64_t seed = 0;
    // configuration-explog
    double explog_shape = 0.5;  // p in (0,1)
    double explog_scale = 0.05; // beta > 0
    // sbm4
    double sbm_intra = 0.05;
    double sbm_inter = 0.005;
    // complete-normal
    double normal_mean = 1.0;
    double normal_sd = 0.25;
    double weight_floor = 1e-6;
    // complete-powerlaw
    double pareto_alpha = 2.5;
    double pareto_min = 1.0;
};

namespace detail {

// Inverse-CDF draw from the exponential-logarithmic distribution.
inline double explog_sample(Rng& rng, double p, double beta) {
    double u;
    do {
        u = rng.uniform();
    } while (u <= 0.0 || u >= 1.0);
    const double num = 1.0 - std::pow(p, 1.0 - u);
    return -std::log(num / (1.0 - p)) / beta;
}

// Stub-matching realization. Self-loops and multi-edges are repaired by
// double edge swaps against uniformly chosen pairs, tracked with a
// multiplicity map so duplicate bookkeeping stays exact.
inline std::vector<Edge> configuration_realize(const std::vector<int>& degrees, Rng& rng) {
    std::vector<int> stubs;
    for (std::size_t v = 0; v < degrees.size(); ++v)
        stubs.insert(stubs.end(), static_cast<std::size_t>(degrees[v]), static_cast<int>(v));
    if (stubs.size() % 2 != 0)
        throw validation_error("degree sum must be even");

    auto key = [](int a, int b) {
        if (a > b) std::swap(a, b);
        return (static_cast<std::uint64_t>(a) << 32) | static_cast<std::uint32_t>(b);
    };

    for (int attempt = 0; attempt < 50; ++attempt) {
        for (std::size_t i = stubs.size(); i > 1; --i) {
            std::size_t j = static_cast<std::size_t>(rng.uniform_int(i));
            std::swap(stubs[i - 1], stubs[j]);
        }
        std::vector<std::pair<int, int>> pairs;
        pairs.reserve(stubs.size() / 2);
        std::unordered_map<std::uint64_t, int> mult;
        for (std::size_t i = 0; i + 1 < stubs.size(); i += 2) {
            pairs.emplace_back(stubs[i], stubs[i + 1]);
            if (stubs[i] != stubs[i + 1]) mult[key(stubs[i], stubs[i + 1])]++;
        }
        auto is_bad = [&](std::size_t i) {
            auto [a, b] = pairs[i];
            return a == b || mult[key(a, b)] > 1;
        };

        bool stuck = false;
        for (int sweep = 0; sweep < 200 && !stuck; ++sweep) {
            std::vector<std::size_t> bad;
            for (std::size_t i = 0; i < pairs.size(); ++i)
                if (is_bad(i)) bad.push_back(i);
            if (bad.empty()) {
                std::vector<Edge> edges;
                edges.reserve(pairs.size());
                for (auto [a, b] : pairs)
                    edges.push_back({std::min(a, b), std::max(a, b), 1.0});
                return edges;
            }
            bool progress = false;
            for (std::size_t bi : bad) {
                if (!is_bad(bi)) continue;
                for (int t = 0; t < 500; ++t) {
                    std::size_t oi = static_cast<std::size_t>(rng.uniform_int(pairs.size()));
                    if (oi == bi) continue;
                    auto [a, b] = pairs[bi];
                    auto [c, d] = pairs[oi];
                    if (rng.bernoulli(0.5)) std::swap(c, d);
                    // candidate swap: (a,b),(c,d) -> (a,d),(c,b)
                    if (a == d || c == b) continue;
                    std::uint64_t k1 = key(a, d), k2 = key(c, b);
                    if (k1 == k2) continue;
                    // remove old contributions before testing the new keys
                    if (a != b) mult[key(a, b)]--;
                    if (c != d) mult[key(c, d)]--;
                    if (mult[k1] == 0 && mult[k2] == 0) {
                        mult[k1]++;
                        mult[k2]++;
                        pairs[bi] = {a, d};
                        pairs[oi] = {c, b};
                        progress = true;
                        break;
                    }
                    if (a != b) mult[key(a, b)]++;
                    if (c != d) mult[key(c, d)]++;
                }
            }
            if (!progress) stuck = true;
        }
    }
    throw validation_error("configuration model: could not realize a simple graph");
}

} // namespace detail

// Deterministic in spec (including seed).
inline WeightedGraph generate(const GeneratorSpec& spec) {
    if (spec.n < 1) throw validation_error("generator: n must be >= 1");
    Rng rng(spec.seed);
    switch (spec.family) {
        case GraphFamily::configuration_explog: {
            if (spec.explog_shape <= 0.0 || spec.explog_shape >= 1.0)
                throw validation_error("explog shape must be in (0,1)");
            if (spec.explog_scale <= 0.0)
                throw validation_error("explog scale must be > 0");
            if (spec.n < 2)
                throw validation_error("configuration model needs n >= 2");
            std::vector<int> degrees(static_cast<std::size_t>(spec.n));
            // an ungraphical draw (possible once degrees are clamped) is
            // discarded and the whole sequence resampled
            for (int attempt = 0; attempt < 200; ++attempt) {
                long long sum = 0;
                for (auto& d : degrees) {
                    double x = detail::explog_sample(rng, spec.explog_shape, spec.explog_scale);
                    d = std::clamp(static_cast<int>(std::lround(x)), 1, spec.n - 1);
                    sum += d;
                }
                if (sum % 2 != 0) continue;
                try {
                    return WeightedGraph(spec.n, detail::configuration_realize(degrees, rng));
                } catch (const validation_error&) {
                    continue;
                }
            }
            throw validation_error("could not realize a configuration-model graph");
        }
        case GraphFamily::sbm4: {
            if (spec.n < 4) throw validation_error("sbm4 needs n >= 4");
            if (spec.sbm_intra < 0 || spec.sbm_intra > 1 || spec.sbm_inter < 0 ||
                spec.sbm_inter > 1)
                throw validation_error("sbm probabilities must be in [0,1]");
            std::vector<int> block(static_cast<std::size_t>(spec.n));
            int base = spec.n / 4, rem = spec.n % 4;
            int v = 0;
            for (int b = 0; b < 4; ++b) {
                int size = base + (b < rem ? 1 : 0);
                for (int i = 0; i < size; ++i) block[static_cast<std::size_t>(v++)] = b;
            }
            std::vector<Edge> edges;
            for (int i = 0; i < spec.n; ++i) {
                for (int j = i + 1; j < spec.n; ++j) {
                    double p = block[static_cast<std::size_t>(i)] ==
                                       block[static_cast<std::size_t>(j)]
                                   ? spec.sbm_intra
                                   : spec.sbm_inter;
                    if (rng.bernoulli(p)) edges.push_back({i, j, 1.0});
                }
            }
            return WeightedGraph(spec.n, std::move(edges));
        }
        case GraphFamily::complete_normal: {
            if (spec.normal_sd <= 0) throw validation_error("normal sd must be > 0");
            std::vector<Edge> edges;
            edges.reserve(static_cast<std::size_t>(spec.n) * (spec.n - 1) / 2);
            for (int i = 0; i < spec.n; ++i) {
                for (int j = i + 1; j < spec.n; ++j) {
                    double w;
                    do {
                        w = spec.normal_mean + spec.normal_sd * rng.normal();
                    } while (w < spec.weight_floor);
                    edges.push_back({i, j, w});
                }
            }
            return WeightedGraph(spec.n, std::move(edges));
        }
        case GraphFamily::complete_powerlaw: {
            if (spec.pareto_alpha <= 0 || spec.pareto_min <= 0)
                throw validation_error("pareto parameters must be > 0");
            std::vector<Edge> edges;
            edges.reserve(static_cast<std::size_t>(spec.n) * (spec.n - 1) / 2);
            for (int i = 0; i < spec.n; ++i) {
                for (int j = i + 1; j < spec.n; ++j) {
                    double u;
                    do {
                        u = rng.uniform();
                    } while (u <= 0.0);
                    edges.push_back({i, j, spec.pareto_min * std::pow(u, -1.0 / spec.pareto_alpha)});
                }
            }
            return WeightedGraph(spec.n, std::move(edges));
        }
    }
    throw validation_error("unknown family");
}

} // namespace cpns

#endif
