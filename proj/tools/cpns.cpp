// Command-line front end: generate | resist | sparsify | compare | importance.
// Every command writes a manifest.json with all resolved parameters so that a
// run can be repeated bit-for-bit.

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>
#include <thread>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "cpns/contagion.hpp"
#include "cpns/generators.hpp"
#include "cpns/graph.hpp"
#include "cpns/io.hpp"
#include "cpns/metrics.hpp"
#include "cpns/resistance.hpp"
#include "cpns/sparsify.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

constexpr const char* kVersion = "cpns 0.1.0";

// exit codes: 2 parse, 3 validation, 4 convergence, 5 io
constexpr int kExitParse = 2;
constexpr int kExitValidation = 3;
constexpr int kExitConvergence = 4;
constexpr int kExitIo = 5;

void write_manifest(const fs::path& out_dir, const std::string& command, json args,
                    std::vector<std::string> outputs) {
    json man;
    man["tool"] = "cpns";
    man["version"] = kVersion;
    man["command"] = command;
    man["args"] = std::move(args);
    man["outputs"] = std::move(outputs);
    std::ofstream f(out_dir / (command + "_manifest.json"), std::ios::binary);
    if (!f) throw cpns::io_error("cannot write manifest in " + out_dir.string());
    f << man.dump(2) << "\n";
}

void ensure_out_dir(const fs::path& p) {
    std::error_code ec;
    fs::create_directories(p, ec);
    if (ec) throw cpns::io_error("cannot create output directory " + p.string());
}

cpns::ResistanceSketch make_sketch(const cpns::WeightedGraph& g, const std::string& mode,
                                   double epsilon, std::uint64_t seed, int workers) {
    if (mode == "exact") return cpns::exact_resistance(g);
    if (mode == "jl-approx") return cpns::approx_resistance(g, epsilon, seed, workers);
    throw cpns::validation_error("unknown resistance mode: " + mode);
}

std::vector<cpns::Trajectory> run_si_many(const cpns::WeightedGraph& g, double gamma,
                                          int timesteps, int patient_zero,
                                          std::uint64_t seed, std::uint64_t stream,
                                          int count, int workers) {
    std::vector<cpns::Trajectory> runs(static_cast<std::size_t>(count));
    auto work = [&](int begin, int end) {
        for (int r = begin; r < end; ++r) {
            cpns::SIConfig cfg{gamma, timesteps, patient_zero,
                               cpns::derive_seed(seed, stream, static_cast<std::uint64_t>(r))};
            runs[static_cast<std::size_t>(r)] = cpns::si_run(g, cfg);
        }
    };
    workers = std::max(1, workers);
    if (workers == 1 || count < 2 * workers) {
        work(0, count);
    } else {
        std::vector<std::thread> pool;
        int chunk = (count + workers - 1) / workers;
        for (int w = 0; w < workers; ++w) {
            int b = w * chunk, e = std::min(count, b + chunk);
            if (b >= e) break;
            pool.emplace_back(work, b, e);
        }
        for (auto& t : pool) t.join();
    }
    return runs;
}

int run(int argc, char** argv) {
    CLI::App app{"Contagion-preserving network sparsification toolkit"};
    app.require_subcommand(1);
    app.set_version_flag("--version", kVersion);

    std::string out_dir = ".";
    std::uint64_t seed = 0;
    int workers = 1;

    // ---- generate ----
    auto* gen = app.add_subcommand("generate", "Generate a network from a family");
    std::string gen_family = "sbm4";
    std::string gen_name = "graph";
    cpns::GeneratorSpec spec;
    gen->add_option("--family", gen_family,
                    "configuration-explog | sbm4 | complete-normal | complete-powerlaw")
        ->required();
    gen->add_option("--n", spec.n, "vertex count")->required();
    gen->add_option("--seed", seed, "random seed");
    gen->add_option("--out-dir", out_dir, "output directory");
    gen->add_option("--name", gen_name, "output file stem");
    gen->add_option("--explog-shape", spec.explog_shape, "explog shape p in (0,1)");
    gen->add_option("--explog-scale", spec.explog_scale, "explog scale beta");
    gen->add_option("--sbm-intra", spec.sbm_intra, "SBM intra-block edge probability");
    gen->add_option("--sbm-inter", spec.sbm_inter, "SBM inter-block edge probability");
    gen->add_option("--normal-mean", spec.normal_mean, "normal weight mean");
    gen->add_option("--normal-sd", spec.normal_sd, "normal weight sd");
    gen->add_option("--pareto-alpha", spec.pareto_alpha, "power-law exponent");
    gen->add_option("--pareto-min", spec.pareto_min, "power-law minimum weight");

    // ---- resist ----
    auto* res = app.add_subcommand("resist", "Per-edge effective resistance and leverage");
    std::string res_input, res_mode = "exact";
    double res_eps = 0.1;
    res->add_option("--input", res_input, "edge-list TSV")->required();
    res->add_option("--mode", res_mode, "exact | jl-approx");
    res->add_option("--epsilon", res_eps, "relative error for jl-approx");
    res->add_option("--seed", seed, "random seed");
    res->add_option("--workers", workers, "worker threads");
    res->add_option("--out-dir", out_dir, "output directory");

    // ---- sparsify ----
    auto* spa = app.add_subcommand("sparsify", "Draw a reweighted sparsifier");
    std::string spa_input, spa_strategy = "ss", spa_mode = "exact", spa_name = "sparsifier";
    double spa_fraction = 0.5, spa_eps = 0.1;
    long long spa_q = 0;
    spa->add_option("--input", spa_input, "edge-list TSV")->required();
    spa->add_option("--strategy", spa_strategy, "ss | uniform");
    spa->add_option("--fraction", spa_fraction, "target fraction of distinct edges");
    spa->add_option("--q", spa_q, "sample count (overrides --fraction)");
    spa->add_option("--mode", spa_mode, "resistance mode for ss: exact | jl-approx");
    spa->add_option("--epsilon", spa_eps, "relative error for jl-approx");
    spa->add_option("--seed", seed, "random seed");
    spa->add_option("--workers", workers, "worker threads");
    spa->add_option("--out-dir", out_dir, "output directory");
    spa->add_option("--name", spa_name, "output file stem");

    // ---- compare ----
    auto* cmp = app.add_subcommand("compare",
                                   "Baseline vs sparsifier fidelity metric series");
    std::string cmp_input;
    std::vector<std::string> cmp_sparsifiers;
    double cmp_gamma = 0.05;
    int cmp_timesteps = 50, cmp_runs = 100, cmp_cpns_runs = 100, cmp_p0 = -1;
    cmp->add_option("--input", cmp_input, "original edge-list TSV")->required();
    cmp->add_option("--sparsifier", cmp_sparsifiers, "sparsifier edge-list TSV (repeatable)")
        ->required();
    cmp->add_option("--gamma", cmp_gamma, "per-contact transmission probability");
    cmp->add_option("--timesteps", cmp_timesteps, "timesteps per run");
    cmp->add_option("--runs", cmp_runs, "runs on the original network");
    cmp->add_option("--cpns-runs", cmp_cpns_runs, "runs per sparsifier");
    cmp->add_option("--patient-zero", cmp_p0, "patient zero (-1 = draw from seed)");
    cmp->add_option("--seed", seed, "random seed");
    cmp->add_option("--workers", workers, "worker threads");
    cmp->add_option("--out-dir", out_dir, "output directory");

    // ---- importance ----
    auto* imp = app.add_subcommand("importance",
                                   "Epidemic edge importance vs leverage scores");
    std::string imp_input, imp_mode = "exact";
    double imp_gamma = 3e-3, imp_eps = 0.1;
    int imp_runs = 100;
    bool imp_sorted = false;
    imp->add_option("--input", imp_input, "edge-list TSV")->required();
    imp->add_option("--gamma", imp_gamma, "per-contact transmission probability");
    imp->add_option("--runs-per-source", imp_runs, "infection trees per patient zero");
    imp->add_option("--mode", imp_mode, "resistance mode: exact | jl-approx");
    imp->add_option("--epsilon", imp_eps, "relative error for jl-approx");
    imp->add_flag("--sorted-quantile", imp_sorted,
                  "pair sorted columns instead of per-edge pairing");
    imp->add_option("--seed", seed, "random seed");
    imp->add_option("--workers", workers, "worker threads");
    imp->add_option("--out-dir", out_dir, "output directory");

    CLI11_PARSE(app, argc, argv);
    fs::path dir(out_dir);
    ensure_out_dir(dir);

    if (*gen) {
        spec.family = cpns::parse_family(gen_family);
        spec.seed = seed;
        cpns::WeightedGraph g = cpns::generate(spec);
        fs::path out = dir / (gen_name + ".tsv");
        cpns::save_edge_list(g, out.string());
        json args = {{"family", gen_family},
                     {"n", spec.n},
                     {"seed", seed},
                     {"name", gen_name},
                     {"out-dir", out_dir},
                     {"explog-shape", spec.explog_shape},
                     {"explog-scale", spec.explog_scale},
                     {"sbm-intra", spec.sbm_intra},
                     {"sbm-inter", spec.sbm_inter},
                     {"normal-mean", spec.normal_mean},
                     {"normal-sd", spec.normal_sd},
                     {"pareto-alpha", spec.pareto_alpha},
                     {"pareto-min", spec.pareto_min}};
        write_manifest(dir, "generate", args, {out.string()});
        std::cerr << "generated " << cpns::family_name(spec.family) << " n=" << g.n()
                  << " m=" << g.m() << " -> " << out.string() << "\n";
    } else if (*res) {
        cpns::WeightedGraph g = cpns::load_edge_list(res_input);
        cpns::ResistanceSketch sk = make_sketch(g, res_mode, res_eps, seed, workers);
        fs::path out = dir / "resistance.tsv";
        cpns::save_resistance_tsv(g, sk, out.string());
        json args = {{"input", res_input}, {"mode", res_mode},   {"epsilon", res_eps},
                     {"seed", seed},       {"workers", workers}, {"out-dir", out_dir}};
        write_manifest(dir, "resist", args, {out.string()});
        std::cerr << "resistance for m=" << g.m() << " edges (" << res_mode << ") -> "
                  << out.string() << "\n";
    } else if (*spa) {
        cpns::WeightedGraph g = cpns::load_edge_list(spa_input);
        cpns::SamplingStrategy strat = cpns::parse_strategy(spa_strategy);
        cpns::Sparsifier sp = [&] {
            if (strat == cpns::SamplingStrategy::ss) {
                cpns::ResistanceSketch sk = make_sketch(g, spa_mode, spa_eps, seed, workers);
                long long q = spa_q > 0 ? spa_q
                                        : cpns::q_for_fraction(sk.leverage, spa_fraction);
                return cpns::ss_sample(g, sk, q, seed, spa_q > 0 ? 0.0 : spa_fraction);
            }
            std::vector<double> unif(static_cast<std::size_t>(g.m()), 1.0);
            long long q = spa_q > 0 ? spa_q : cpns::q_for_fraction(unif, spa_fraction);
            return cpns::uniform_sample(g, q, seed, spa_q > 0 ? 0.0 : spa_fraction);
        }();
        fs::path out = dir / (spa_name + ".tsv");
        cpns::save_edge_list(sp.graph, out.string());
        fs::path sidecar = dir / (spa_name + ".json");
        {
            json side = {{"strategy", cpns::strategy_name(sp.strategy)},
                         {"q", sp.q},
                         {"fraction", sp.target_fraction},
                         {"seed", sp.seed},
                         {"epsilon", spa_mode == "jl-approx" ? spa_eps : 0.0}};
            std::ofstream f(sidecar, std::ios::binary);
            if (!f) throw cpns::io_error("cannot write " + sidecar.string());
            f << side.dump(2) << "\n";
        }
        int comps = cpns::connected_components(sp.graph).count;
        json args = {{"input", spa_input},     {"strategy", spa_strategy},
                     {"fraction", spa_fraction}, {"q", spa_q},
                     {"mode", spa_mode},       {"epsilon", spa_eps},
                     {"seed", seed},           {"workers", workers},
                     {"out-dir", out_dir},     {"name", spa_name}};
        write_manifest(dir, "sparsify", args, {out.string(), sidecar.string()});
        std::cerr << "sparsifier q=" << sp.q << " kept " << sp.graph.m() << "/" << g.m()
                  << " edges, components=" << comps << " -> " << out.string() << "\n";
    } else if (*cmp) {
        cpns::WeightedGraph g = cpns::load_edge_list(cmp_input);
        int p0 = cmp_p0;
        if (p0 < 0) {
            cpns::Rng rng(cpns::derive_seed(seed, 0x5a1edULL, 0));
            p0 = static_cast<int>(rng.uniform_int(static_cast<std::uint64_t>(g.n())));
        }
        std::cerr << "patient zero = " << p0 << "\n";
        auto original =
            run_si_many(g, cmp_gamma, cmp_timesteps, p0, seed, 0, cmp_runs, workers);
        std::vector<std::pair<cpns::MetricSeries, std::string>> series;
        for (auto tag :
             {cpns::MetricTag::hamming, cpns::MetricTag::mi, cpns::MetricTag::fraction})
            series.emplace_back(cpns::baseline(original, tag), "baseline");
        std::uint64_t stream = 1;
        for (const auto& path : cmp_sparsifiers) {
            cpns::WeightedGraph sg = cpns::load_edge_list(path);
            if (sg.n() != g.n())
                throw cpns::validation_error("sparsifier vertex count differs: " + path);
            auto runs = run_si_many(sg, cmp_gamma, cmp_timesteps, p0, seed, stream++,
                                    cmp_cpns_runs, workers);
            std::string label = fs::path(path).stem().string();
            for (auto tag : {cpns::MetricTag::hamming, cpns::MetricTag::mi,
                             cpns::MetricTag::fraction})
                series.emplace_back(cpns::compare_series(original, runs, tag), label);
            std::cerr << "compared " << label << "\n";
        }
        fs::path out = dir / "metrics.csv";
        cpns::save_metric_series_csv(series, out.string());
        json args = {{"input", cmp_input},
                     {"sparsifiers", cmp_sparsifiers},
                     {"gamma", cmp_gamma},
                     {"timesteps", cmp_timesteps},
                     {"runs", cmp_runs},
                     {"cpns-runs", cmp_cpns_runs},
                     {"patient-zero", cmp_p0},
                     {"resolved-patient-zero", p0},
                     {"seed", seed},
                     {"workers", workers},
                     {"out-dir", out_dir}};
        write_manifest(dir, "compare", args, {out.string()});
        std::cerr << "metric series -> " << out.string() << "\n";
    } else if (*imp) {
        cpns::WeightedGraph g = cpns::load_edge_list(imp_input);
        cpns::ResistanceSketch sk = make_sketch(g, imp_mode, imp_eps, seed, workers);
        cpns::ImportanceTable table = cpns::epidemic_edge_importance(
            g, imp_gamma, imp_runs, seed, sk.leverage, workers);
        fs::path out = dir / "importance.tsv";
        cpns::save_importance_tsv(g, table, out.string());
        auto r = cpns::importance_correlation(table, imp_sorted);
        if (r)
            std::cout << "pearson_r=" << cpns::format_double(*r) << "\n";
        else
            std::cout << "pearson_r=degenerate\n";
        json args = {{"input", imp_input},
                     {"gamma", imp_gamma},
                     {"runs-per-source", imp_runs},
                     {"mode", imp_mode},
                     {"epsilon", imp_eps},
                     {"sorted-quantile", imp_sorted},
                     {"seed", seed},
                     {"workers", workers},
                     {"out-dir", out_dir}};
        write_manifest(dir, "importance", args, {out.string()});
        std::cerr << "importance table -> " << out.string() << "\n";
    }
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    try {
        return run(argc, argv);
    } catch (const cpns::parse_error& e) {
        std::cerr << "parse error: " << e.what() << "\n";
        return kExitParse;
    } catch (const cpns::validation_error& e) {
        std::cerr << "validation error: " << e.what() << "\n";
        return kExitValidation;
    } catch (const cpns::convergence_error& e) {
        std::cerr << "convergence error: " << e.what() << "\n";
        return kExitConvergence;
    } catch (const cpns::io_error& e) {
        std::cerr << "i/o error: " << e.what() << "\n";
        return kExitIo;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
}
