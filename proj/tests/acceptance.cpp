// Acceptance suite: one pass/fail line per criterion, nonzero exit on any
// failure. Criteria run against fixed seeds so results are stable.

#include <chrono>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <numeric>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "cpns/contagion.hpp"
#include "cpns/generators.hpp"
#include "cpns/graph.hpp"
#include "cpns/metrics.hpp"
#include "cpns/resistance.hpp"
#include "cpns/sparsify.hpp"
#include "test_support.hpp"

namespace fs = std::filesystem;
using Clock = std::chrono::steady_clock;

namespace {

int g_failures = 0;

void report(int id, const std::string& name, bool pass, const std::string& detail) {
    std::cout << (pass ? "PASS" : "FAIL") << "  criterion " << id << ": " << name;
    if (!detail.empty()) std::cout << " (" << detail << ")";
    std::cout << std::endl;
    if (!pass) ++g_failures;
}

double seconds_since(Clock::time_point t0) {
    return std::chrono::duration<double>(Clock::now() - t0).count();
}

// 1. approx resistance within (1 +- 0.1) of the exact pseudoinverse
void criterion_1() {
    auto t0 = Clock::now();
    double worst = 0.0;
    for (std::uint64_t i = 0; i < 20; ++i) {
        int n = 10 + static_cast<int>((i * 2) % 41);
        auto g = cpns_test::random_connected_graph(n, 0.12, 100 + i);
        auto exact = cpns::exact_resistance(g);
        auto approx = cpns::approx_resistance(g, 0.1, 500 + i, 4);
        for (int e = 0; e < g.m(); ++e)
            worst = std::max(worst, std::abs(approx.edge_resistance[e] /
                                                 exact.edge_resistance[e] -
                                             1.0));
    }
    double secs = seconds_since(t0);
    std::ostringstream d;
    d << "max rel err " << worst << ", " << secs << "s";
    report(1, "resistance oracle equivalence", worst <= 0.1 && secs < 30.0, d.str());
}

// 2. leverage sums equal n - c
void criterion_2() {
    auto t0 = Clock::now();
    bool ok = true;
    double worst = 0.0;
    for (std::uint64_t i = 0; i < 50; ++i) {
        int n = 5 + static_cast<int>(i % 30);
        double p = i % 3 == 0 ? 0.05 : 0.3; // sparse cases are often disconnected
        auto g = cpns_test::random_graph(n, p, 200 + i);
        if (g.m() == 0) continue;
        auto sk = cpns::exact_resistance(g);
        double expect = g.n() - sk.components.count;
        double rel = std::abs(sk.leverage_sum() - expect) / std::max(1.0, expect);
        worst = std::max(worst, rel);
        ok = ok && rel <= 1e-8;
    }
    double secs = seconds_since(t0);
    std::ostringstream d;
    d << "worst rel dev " << worst << ", " << secs << "s";
    report(2, "foster identity", ok && secs < 10.0, d.str());
}

// 3. spanning tree probability equals leverage
void criterion_3() {
    auto t0 = Clock::now();
    double worst = 0.0;
    for (std::uint64_t i = 0; i < 100; ++i) {
        int n = 3 + static_cast<int>(i % 6);
        auto g = cpns_test::random_connected_graph(n, 0.4, 300 + i);
        auto p = cpns::spanning_tree_edge_probability(g);
        auto sk = cpns::exact_resistance(g);
        for (int e = 0; e < g.m(); ++e)
            worst = std::max(worst, std::abs(p[e] - sk.leverage[e]));
    }
    double secs = seconds_since(t0);
    std::ostringstream d;
    d << "worst abs dev " << worst << ", " << secs << "s";
    report(3, "matrix-tree equivalence", worst <= 1e-8 && secs < 10.0, d.str());
}

// 4. mean sparsifier weight and laplacian match the original
void criterion_4() {
    auto t0 = Clock::now();
    auto g = cpns_test::random_connected_graph(20, 0.25, 42);
    auto sk = cpns::exact_resistance(g);
    const int draws = 10000;
    const long long q = 60;
    bool ok = true;
    double worst_z = 0.0;
    for (int strategy = 0; strategy < 2; ++strategy) {
        std::vector<double> sum(g.m(), 0.0), sumsq(g.m(), 0.0);
        std::vector<double> dsum(g.n(), 0.0), dsumsq(g.n(), 0.0);
        std::vector<double> deg(g.n());
        for (int d = 0; d < draws; ++d) {
            auto sp = strategy == 0 ? cpns::ss_sample(g, sk, q, 7000 + d)
                                    : cpns::uniform_sample(g, q, 7000 + d);
            std::vector<double> w(g.m(), 0.0);
            for (int i = 0; i < sp.graph.m(); ++i)
                w[sp.source_edge[i]] = sp.graph.edge(i).w;
            std::fill(deg.begin(), deg.end(), 0.0);
            for (int e = 0; e < g.m(); ++e) {
                sum[e] += w[e];
                sumsq[e] += w[e] * w[e];
                deg[g.edge(e).u] += w[e];
                deg[g.edge(e).v] += w[e];
            }
            for (int v = 0; v < g.n(); ++v) {
                dsum[v] += deg[v];
                dsumsq[v] += deg[v] * deg[v];
            }
        }
        auto zscore = [&](double s, double ss, double target) {
            double mean = s / draws;
            double var = (ss / draws - mean * mean) * draws / (draws - 1.0);
            double se = std::sqrt(var / draws);
            return se > 0 ? std::abs(mean - target) / se : std::abs(mean - target);
        };
        // off-diagonal laplacian entries are -w~_e, so the per-edge check
        // covers them; diagonals need the realized weighted degrees
        for (int e = 0; e < g.m(); ++e)
            worst_z = std::max(worst_z, zscore(sum[e], sumsq[e], g.edge(e).w));
        auto degrees = g.weighted_degrees();
        for (int v = 0; v < g.n(); ++v)
            worst_z = std::max(worst_z, zscore(dsum[v], dsumsq[v], degrees[v]));
    }
    ok = worst_z <= 3.0;
    double secs = seconds_since(t0);
    std::ostringstream d;
    d << "worst z " << worst_z << ", " << secs << "s";
    report(4, "sparsifier unbiasedness", ok && secs < 60.0, d.str());
}

// 5. two-vertex infection time
void criterion_5() {
    auto t0 = Clock::now();
    cpns::WeightedGraph g(2, {{0, 1, 1.0}});
    const double gamma = 0.1;
    const int runs = 10000;
    double total = 0.0;
    for (int r = 0; r < runs; ++r) {
        auto tr = cpns::si_run(g, cpns::SIConfig{gamma, 300, 0,
                                                 static_cast<std::uint64_t>(40000 + r)});
        int t = 300;
        for (std::size_t i = 0; i < tr.states.size(); ++i)
            if (tr.states[i][1]) {
                t = static_cast<int>(i);
                break;
            }
        total += t;
    }
    double mean = total / runs;
    double secs = seconds_since(t0);
    std::ostringstream d;
    d << "mean " << mean << " vs 10, " << secs << "s";
    report(5, "SI geometric check", std::abs(mean - 10.0) <= 0.5 && secs < 10.0, d.str());
}

bool is_spanning_tree(const cpns::WeightedGraph& g, const cpns::InfectionTree& tree) {
    auto comps = cpns::connected_components(g);
    int comp = comps.label[tree.patient_zero];
    int comp_size = 0;
    for (int v = 0; v < g.n(); ++v)
        if (comps.label[v] == comp) ++comp_size;
    if (static_cast<int>(tree.edges.size()) != comp_size - 1) return false;
    std::vector<int> parent(g.n());
    std::iota(parent.begin(), parent.end(), 0);
    std::function<int(int)> find = [&](int x) {
        return parent[x] == x ? x : parent[x] = find(parent[x]);
    };
    for (int e : tree.edges) {
        const auto& ed = g.edge(e);
        if (comps.label[ed.u] != comp || comps.label[ed.v] != comp) return false;
        int a = find(ed.u), b = find(ed.v);
        if (a == b) return false;
        parent[a] = b;
    }
    return true;
}

// 6. infection trees are spanning trees
void criterion_6() {
    auto t0 = Clock::now();
    int violations = 0;
    for (std::uint64_t i = 0; i < 1000; ++i) {
        auto g = cpns_test::random_graph(20, 0.12, 600 + i % 50);
        int p0 = static_cast<int>(i % g.n());
        auto tree = cpns::infection_tree(g, 0.15, p0, 9000 + i);
        if (!is_spanning_tree(g, tree)) ++violations;
    }
    double secs = seconds_since(t0);
    std::ostringstream d;
    d << violations << " violations, " << secs << "s";
    report(6, "infection-tree validity", violations == 0, d.str());
}

// 7. EEI vs leverage correlation rises as gamma falls (K100 power law)
void criterion_7() {
    auto t0 = Clock::now();
    cpns::GeneratorSpec spec;
    spec.family = cpns::GraphFamily::complete_powerlaw;
    spec.n = 100;
    spec.seed = 7;
    // traffic-scale weights: at the higher gamma the per-step transmission
    // probabilities saturate and simultaneous infections become common, which
    // is the regime where the correlation is expected to break down
    spec.pareto_min = 1000.0;
    auto g = cpns::generate(spec);
    auto sk = cpns::exact_resistance(g);
    int workers = std::max(2u, std::thread::hardware_concurrency());
    auto corr = [&](double gamma) {
        auto table = cpns::epidemic_edge_importance(g, gamma, 100, 77, sk.leverage, workers);
        auto r = cpns::importance_correlation(table);
        return r ? *r : 0.0;
    };
    double r_low = corr(3e-5);
    double r_high = corr(3e-3);
    double secs = seconds_since(t0);
    std::ostringstream d;
    d << "r(3e-5)=" << r_low << ", r(3e-3)=" << r_high << ", " << secs << "s";
    report(7, "gamma-dependent correlation drop",
           r_low >= 0.9 && r_low - r_high >= 0.2 && secs < 600.0, d.str());
}

// 8. SS-sampling CPNS fraction series stays inside the baseline CI band
void criterion_8() {
    auto t0 = Clock::now();
    cpns::GeneratorSpec spec;
    spec.family = cpns::GraphFamily::sbm4;
    spec.n = 500;
    spec.seed = 11;
    // dense enough that a 50% sparsifier keeps the blocks well connected;
    // at the sparse defaults halving the edge count pushes the subgraph
    // toward its percolation threshold and the dynamics change shape
    spec.sbm_intra = 0.3;
    spec.sbm_inter = 0.03;
    auto g = cpns::generate(spec);
    auto comps = cpns::connected_components(g);
    // patient zero inside the largest component
    std::vector<int> size(comps.count, 0);
    for (int v = 0; v < g.n(); ++v) size[comps.label[v]]++;
    int big = static_cast<int>(std::max_element(size.begin(), size.end()) - size.begin());
    int p0 = 0;
    while (comps.label[p0] != big) ++p0;

    const double gamma = 0.015;
    const int T = 100;
    const int baseline_runs = 50;
    std::vector<cpns::Trajectory> original;
    for (int r = 0; r < baseline_runs; ++r)
        original.push_back(cpns::si_run(
            g, cpns::SIConfig{gamma, T, p0, cpns::derive_seed(381, 0, r)}));
    auto bl = cpns::baseline(original, cpns::MetricTag::fraction);

    auto sk = cpns::exact_resistance(g);
    bool all_ok = true;
    std::ostringstream d;
    for (double fraction : {0.5, 0.75}) {
        long long q = cpns::q_for_fraction(sk.leverage, fraction);
        std::vector<cpns::Trajectory> cpns_runs;
        for (int draw = 0; draw < 10; ++draw) {
            auto sp = cpns::ss_sample(g, sk, q, cpns::derive_seed(382, 1, draw), fraction);
            for (int r = 0; r < 10; ++r)
                cpns_runs.push_back(cpns::si_run(
                    sp.graph,
                    cpns::SIConfig{gamma, T, p0, cpns::derive_seed(383, draw, r)}));
        }
        auto cmp = cpns::compare_series(original, cpns_runs, cpns::MetricTag::fraction);
        int inside = 0;
        for (int t = 0; t < T; ++t) {
            if (cmp.mean[t] >= bl.mean[t] - bl.ci_half[t] - 1e-12 &&
                cmp.mean[t] <= bl.mean[t] + bl.ci_half[t] + 1e-12)
                ++inside;
        }
        double frac_inside = static_cast<double>(inside) / T;
        d << "fraction " << fraction << ": " << frac_inside * 100 << "% inside; ";
        all_ok = all_ok && frac_inside >= 0.7;
    }
    double secs = seconds_since(t0);
    d << secs << "s";
    report(8, "CPNS qualitative reproduction", all_ok && secs < 600.0, d.str());
}

// 9. metric unit identities
void criterion_9() {
    auto t0 = Clock::now();
    bool ok = true;
    cpns::Rng rng(13);
    auto rand_bits = [&](std::size_t n) {
        cpns::StateVector v(n);
        for (auto& b : v) b = rng.bernoulli(0.5) ? 1 : 0;
        return v;
    };
    for (int trial = 0; trial < 200; ++trial) {
        auto a = rand_bits(25), b = rand_bits(25), c = rand_bits(25);
        ok = ok && cpns::hamming(a, b) >= 0;
        ok = ok && cpns::hamming(a, b) == cpns::hamming(b, a);
        ok = ok && cpns::hamming(a, c) <= cpns::hamming(a, b) + cpns::hamming(b, c);
        ok = ok && std::abs(cpns::mutual_information(a, a) - cpns::binary_entropy(a)) < 1e-12;
        ok = ok && cpns::mutual_information(a, b) >= 0.0;
    }
    cpns::StateVector constant(25, 1);
    ok = ok && cpns::mutual_information(constant, rand_bits(25)) == 0.0;
    // fraction-infected series of SI trajectories never decreases
    for (std::uint64_t seed = 1; seed <= 20; ++seed) {
        auto g = cpns_test::random_graph(30, 0.1, seed);
        auto tr = cpns::si_run(g, cpns::SIConfig{0.2, 30, static_cast<int>(seed) % g.n(), seed});
        double prev = 0.0;
        for (const auto& s : tr.states) {
            double f = cpns::fraction_infected(s);
            ok = ok && f >= prev;
            prev = f;
        }
    }
    double secs = seconds_since(t0);
    report(9, "metric unit suite", ok && secs < 5.0, "");
}

// 10. CLI runs repeated from their manifests are byte-identical
std::string slurp(const fs::path& p) {
    std::ifstream f(p, std::ios::binary);
    std::stringstream ss;
    ss << f.rdbuf();
    return ss.str();
}

void criterion_10() {
    const std::string cli = CPNS_CLI_PATH;
    fs::path dir = fs::temp_directory_path() / "cpns_acceptance_cli";
    fs::remove_all(dir);
    fs::create_directories(dir);
    auto sh = [&](const std::string& args) {
        std::string cmd = cli + " " + args + " >/dev/null 2>/dev/null";
        return WEXITSTATUS(std::system(cmd.c_str())) == 0;
    };
    std::string d = dir.string();
    bool ok = sh("generate --family sbm4 --n 150 --seed 3 --out-dir " + d);
    ok = ok && sh("resist --input " + d + "/graph.tsv --mode jl-approx --epsilon 0.2 "
                  "--seed 4 --workers 2 --out-dir " + d);
    ok = ok && sh("sparsify --input " + d + "/graph.tsv --strategy ss --fraction 0.5 "
                  "--seed 5 --out-dir " + d);
    ok = ok && sh("compare --input " + d + "/graph.tsv --sparsifier " + d +
                  "/sparsifier.tsv --gamma 0.08 --timesteps 25 --runs 15 --cpns-runs 15 "
                  "--seed 6 --workers 2 --out-dir " + d);
    ok = ok && sh("importance --input " + d + "/graph.tsv --gamma 0.02 "
                  "--runs-per-source 5 --seed 7 --workers 2 --out-dir " + d);

    // replay each command from its manifest and compare every declared output
    int replayed = 0;
    if (ok) {
        for (const auto& entry : fs::directory_iterator(dir)) {
            auto name = entry.path().filename().string();
            if (name.size() < 14 || name.substr(name.size() - 14) != "_manifest.json")
                continue;
            nlohmann::json man = nlohmann::json::parse(slurp(entry.path()));
            std::vector<std::string> outputs =
                man["outputs"].get<std::vector<std::string>>();
            std::vector<std::string> before;
            for (const auto& o : outputs) before.push_back(slurp(o));
            std::string args = man["command"].get<std::string>();
            for (auto& [key, value] : man["args"].items()) {
                if (key == "resolved-patient-zero") continue;
                if (key == "sparsifiers") {
                    for (const auto& s : value)
                        args += " --sparsifier " + s.get<std::string>();
                } else if (value.is_string()) {
                    args += " --" + key + " " + value.get<std::string>();
                } else if (value.is_boolean()) {
                    if (value.get<bool>()) args += " --" + key;
                } else {
                    args += " --" + key + " " + value.dump();
                }
            }
            ok = ok && sh(args);
            for (std::size_t i = 0; i < outputs.size(); ++i)
                ok = ok && slurp(outputs[i]) == before[i];
            ++replayed;
        }
    }
    ok = ok && replayed == 5;
    fs::remove_all(dir);
    report(10, "manifest reproducibility", ok,
           std::to_string(replayed) + " commands replayed");
}

} // namespace

int main() {
    criterion_1();
    criterion_2();
    criterion_3();
    criterion_4();
    criterion_5();
    criterion_6();
    criterion_7();
    criterion_8();
    criterion_9();
    criterion_10();
    if (g_failures > 0) {
        std::cout << g_failures << " criterion(s) failed" << std::endl;
        return 1;
    }
    std::cout << "all criteria passed" << std::endl;
    return 0;
}
