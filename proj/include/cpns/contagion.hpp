#ifndef CPNS_CONTAGION_HPP
#define CPNS_CONTAGION_HPP

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <queue>
#include <thread>
#include <vector>

#include "cpns/errors.hpp"
#include "cpns/graph.hpp"
#include "cpns/rng.hpp"

namespace cpns {

// Probability that an edge of weight w transmits in one step: 1 - (1-gamma)^w.
inline double transmission_prob(double w, double gamma) {
    if (!(w > 0.0)) throw validation_error("edge weight must be > 0");
    if (!(gamma > 0.0 && gamma < 1.0))
        throw validation_error("gamma must be in (0,1)");
    return -std::expm1(w * std::log1p(-gamma));
}

struct SIConfig {
    double gamma;
    int timesteps;
    int patient_zero;
    std::uint64_t seed;
};

// One SI run: states[t] is the infection vector after timestep t+1;
// states[0] has exactly the patient zero infected.
struct Trajectory {
    std::vector<std::vector<std::uint8_t>> states;
    int patient_zero;
    std::uint64_t seed;
};

namespace detail {

struct StepScratch {
    std::vector<int> frontier;       // infected vertices with susceptible neighbors
    std::vector<int> newly_infected;
    std::vector<int> credit_edge;    // per newly infected vertex
    std::vector<int> success_count;  // per vertex, this step
    std::vector<int> chosen;         // per vertex, reservoir pick
};

// Synchronous step. Every infected-susceptible edge fires independently with
// its transmission probability; a vertex hit this step picks its crediting
// edge uniformly among the successful ones (reservoir sampling).
inline void si_step(const WeightedGraph& g,
                    const std::vector<std::vector<std::pair<int, int>>>& adj,
                    const std::vector<double>& pi, std::vector<std::uint8_t>& infected,
                    Rng& rng, StepScratch& sc) {
    sc.newly_infected.clear();
    sc.credit_edge.clear();
    for (int u : sc.frontier) {
        for (auto [v, e] : adj[static_cast<std::size_t>(u)]) {
            if (infected[static_cast<std::size_t>(v)]) continue;
            if (!rng.bernoulli(pi[static_cast<std::size_t>(e)])) continue;
            int c = ++sc.success_count[static_cast<std::size_t>(v)];
            if (c == 1) {
                sc.chosen[static_cast<std::size_t>(v)] = e;
                sc.newly_infected.push_back(v);
            } else if (rng.uniform_int(static_cast<std::uint64_t>(c)) == 0) {
                sc.chosen[static_cast<std::size_t>(v)] = e;
            }
        }
    }
    for (int v : sc.newly_infected) {
        infected[static_cast<std::size_t>(v)] = 1;
        sc.credit_edge.push_back(sc.chosen[static_cast<std::size_t>(v)]);
        sc.success_count[static_cast<std::size_t>(v)] = 0;
    }
    // frontier update: add the new vertices, drop saturated ones
    sc.frontier.insert(sc.frontier.end(), sc.newly_infected.begin(),
                       sc.newly_infected.end());
    std::sort(sc.frontier.begin(), sc.frontier.end());
    sc.frontier.erase(
        std::remove_if(sc.frontier.begin(), sc.frontier.end(),
                       [&](int u) {
                           for (auto [v, e] : adj[static_cast<std::size_t>(u)]) {
                               (void)e;
                               if (!infected[static_cast<std::size_t>(v)]) return false;
                           }
                           return true;
                       }),
        sc.frontier.end());
}

} // namespace detail

inline Trajectory si_run(const WeightedGraph& g, const SIConfig& cfg) {
    if (cfg.timesteps < 1) throw validation_error("timesteps must be >= 1");
    if (cfg.patient_zero < 0 || cfg.patient_zero >= g.n())
        throw validation_error("patient zero out of range");
    const auto adj = g.adjacency();
    std::vector<double> pi(static_cast<std::size_t>(g.m()));
    for (int e = 0; e < g.m(); ++e)
        pi[static_cast<std::size_t>(e)] = transmission_prob(g.edge(e).w, cfg.gamma);

    Rng rng(cfg.seed);
    std::vector<std::uint8_t> infected(static_cast<std::size_t>(g.n()), 0);
    infected[static_cast<std::size_t>(cfg.patient_zero)] = 1;

    detail::StepScratch sc;
    sc.success_count.assign(static_cast<std::size_t>(g.n()), 0);
    sc.chosen.assign(static_cast<std::size_t>(g.n()), -1);
    sc.frontier.push_back(cfg.patient_zero);

    Trajectory tr;
    tr.patient_zero = cfg.patient_zero;
    tr.seed = cfg.seed;
    tr.states.reserve(static_cast<std::size_t>(cfg.timesteps));
    tr.states.push_back(infected);
    for (int t = 1; t < cfg.timesteps; ++t) {
        detail::si_step(g, adj, pi, infected, rng, sc);
        tr.states.push_back(infected);
    }
    return tr;
}

// Edges that transmitted during a run continued until the patient zero's
// component is saturated. Always a spanning tree of that component.
struct InfectionTree {
    std::vector<int> edges;
    int patient_zero;
};

// Event-driven simulation of the same process: per active edge the step of
// first success is geometric in its transmission probability, and ties at a
// vertex's infection step are broken uniformly, exactly as in si_run.
inline InfectionTree infection_tree(const WeightedGraph& g, double gamma,
                                    int patient_zero, std::uint64_t seed) {
    if (patient_zero < 0 || patient_zero >= g.n())
        throw validation_error("patient zero out of range");
    const auto adj = g.adjacency();
    std::vector<double> pi(static_cast<std::size_t>(g.m()));
    for (int e = 0; e < g.m(); ++e)
        pi[static_cast<std::size_t>(e)] = transmission_prob(g.edge(e).w, gamma);

    Rng rng(seed);
    const std::uint64_t kNever = std::numeric_limits<std::uint64_t>::max();
    std::vector<std::uint8_t> infected(static_cast<std::size_t>(g.n()), 0);
    std::vector<std::uint64_t> best_time(static_cast<std::size_t>(g.n()), kNever);
    std::vector<int> best_edge(static_cast<std::size_t>(g.n()), -1);
    std::vector<int> tie_count(static_cast<std::size_t>(g.n()), 0);

    using Event = std::pair<std::uint64_t, int>; // (step, vertex), min-heap
    std::priority_queue<Event, std::vector<Event>, std::greater<Event>> heap;

    auto expose = [&](int u, std::uint64_t t_u) {
        for (auto [v, e] : adj[static_cast<std::size_t>(u)]) {
            if (infected[static_cast<std::size_t>(v)]) continue;
            std::uint64_t d = rng.geometric(pi[static_cast<std::size_t>(e)]);
            if (d == kNever || t_u > kNever - d) continue;
            std::uint64_t t = t_u + d;
            auto vi = static_cast<std::size_t>(v);
            if (t < best_time[vi]) {
                best_time[vi] = t;
                best_edge[vi] = e;
                tie_count[vi] = 1;
                heap.emplace(t, v);
            } else if (t == best_time[vi]) {
                ++tie_count[vi];
                if (rng.uniform_int(static_cast<std::uint64_t>(tie_count[vi])) == 0)
                    best_edge[vi] = e;
            }
        }
    };

    InfectionTree tree;
    tree.patient_zero = patient_zero;
    infected[static_cast<std::size_t>(patient_zero)] = 1;
    expose(patient_zero, 0);

    const std::uint64_t step_guard = 1000000000ULL;
    while (!heap.empty()) {
        auto [t, v] = heap.top();
        heap.pop();
        auto vi = static_cast<std::size_t>(v);
        if (infected[vi] || t != best_time[vi]) continue;
        if (t > step_guard)
            throw convergence_error("SI saturation exceeded the step guard",
                                    static_cast<double>(t));
        infected[vi] = 1;
        tree.edges.push_back(best_edge[vi]);
        expose(v, t);
    }
    std::sort(tree.edges.begin(), tree.edges.end());
    return tree;
}

// Per-edge probability of appearing in an infection spanning tree, over all
// sources and runs, paired with leverage scores for correlation.
struct ImportanceTable {
    std::vector<double> eei;
    std::vector<double> leverage;
    std::vector<double> eei_norm;
    std::vector<double> leverage_norm;
};

inline ImportanceTable epidemic_edge_importance(const WeightedGraph& g, double gamma,
                                                int runs_per_source, std::uint64_t seed,
                                                const std::vector<double>& leverage,
                                                int workers = 1) {
    if (runs_per_source < 1) throw validation_error("runs_per_source must be >= 1");
    if (static_cast<int>(leverage.size()) != g.m())
        throw validation_error("leverage vector does not match edge count");
    const int n = g.n();
    const long long total = static_cast<long long>(n) * runs_per_source;

    workers = std::max(1, workers);
    std::vector<std::vector<long long>> counts(
        static_cast<std::size_t>(workers),
        std::vector<long long>(static_cast<std::size_t>(g.m()), 0));

    auto run_sources = [&](int w, int src_begin, int src_end) {
        auto& c = counts[static_cast<std::size_t>(w)];
        for (int src = src_begin; src < src_end; ++src) {
            for (int r = 0; r < runs_per_source; ++r) {
                InfectionTree tree = infection_tree(
                    g, gamma, src,
                    derive_seed(seed, static_cast<std::uint64_t>(src),
                                static_cast<std::uint64_t>(r)));
                for (int e : tree.edges) c[static_cast<std::size_t>(e)]++;
            }
        }
    };

    if (workers == 1) {
        run_sources(0, 0, n);
    } else {
        std::vector<std::thread> pool;
        int chunk = (n + workers - 1) / workers;
        for (int w = 0; w < workers; ++w) {
            int b = w * chunk, e = std::min(n, b + chunk);
            if (b >= e) break;
            pool.emplace_back(run_sources, w, b, e);
        }
        for (auto& t : pool) t.join();
    }

    ImportanceTable table;
    table.leverage = leverage;
    table.eei.assign(static_cast<std::size_t>(g.m()), 0.0);
    for (int e = 0; e < g.m(); ++e) {
        long long c = 0;
        for (const auto& vec : counts) c += vec[static_cast<std::size_t>(e)];
        table.eei[static_cast<std::size_t>(e)] =
            static_cast<double>(c) / static_cast<double>(total);
    }
    auto normalize = [](const std::vector<double>& in) {
        double mx = 0.0;
        for (double x : in) mx = std::max(mx, x);
        std::vector<double> out(in.size(), 0.0);
        if (mx > 0)
            for (std::size_t i = 0; i < in.size(); ++i) out[i] = in[i] / mx;
        return out;
    };
    table.eei_norm = normalize(table.eei);
    table.leverage_norm = normalize(table.leverage);
    return table;
}

} // namespace cpns

#endif
