#ifndef CPNS_IO_HPP
#define CPNS_IO_HPP

#include <fstream>
#include <string>
#include <vector>

#include "cpns/contagion.hpp"
#include "cpns/errors.hpp"
#include "cpns/graph.hpp"
#include "cpns/metrics.hpp"
#include "cpns/resistance.hpp"

namespace cpns {

// "u\tv\tw\tR\tleverage", plus a component column when the graph is
// disconnected.
inline void save_resistance_tsv(const WeightedGraph& g, const ResistanceSketch& sk,
                                const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw io_error("cannot open " + path + " for writing");
    const bool with_component = sk.components.count > 1;
    out << "# u\tv\tw\tR\tleverage";
    if (with_component) out << "\tcomponent";
    out << "\n";
    for (int e = 0; e < g.m(); ++e) {
        const Edge& ed = g.edge(e);
        out << ed.u << '\t' << ed.v << '\t' << format_double(ed.w) << '\t'
            << format_double(sk.edge_resistance[static_cast<std::size_t>(e)]) << '\t'
            << format_double(sk.leverage[static_cast<std::size_t>(e)]);
        if (with_component)
            out << '\t' << sk.components.label[static_cast<std::size_t>(ed.u)];
        out << '\n';
    }
    if (!out) throw io_error("write failed: " + path);
}

// "u\tv\tw\tleverage\teei"
inline void save_importance_tsv(const WeightedGraph& g, const ImportanceTable& table,
                                const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw io_error("cannot open " + path + " for writing");
    out << "# u\tv\tw\tleverage\teei\n";
    for (int e = 0; e < g.m(); ++e) {
        const Edge& ed = g.edge(e);
        out << ed.u << '\t' << ed.v << '\t' << format_double(ed.w) << '\t'
            << format_double(table.leverage[static_cast<std::size_t>(e)]) << '\t'
            << format_double(table.eei[static_cast<std::size_t>(e)]) << '\n';
    }
    if (!out) throw io_error("write failed: " + path);
}

// "t,mean,ci_lo,ci_hi,metric,label", timesteps numbered from 1.
inline void save_metric_series_csv(const std::vector<std::pair<MetricSeries, std::string>>& series,
                                   const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw io_error("cannot open " + path + " for writing");
    out << "t,mean,ci_lo,ci_hi,metric,label\n";
    for (const auto& [s, label] : series) {
        for (std::size_t t = 0; t < s.mean.size(); ++t) {
            out << (t + 1) << ',' << format_double(s.mean[t]) << ','
                << format_double(s.mean[t] - s.ci_half[t]) << ','
                << format_double(s.mean[t] + s.ci_half[t]) << ',' << metric_name(s.tag)
                << ',' << label << '\n';
        }
    }
    if (!out) throw io_error("write failed: " + path);
}

// "t,fraction_infected"
inline void save_trajectory_csv(const Trajectory& tr, const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw io_error("cannot open " + path + " for writing");
    out << "t,fraction_infected\n";
    for (std::size_t t = 0; t < tr.states.size(); ++t)
        out << (t + 1) << ',' << format_double(fraction_infected(tr.states[t])) << '\n';
    if (!out) throw io_error("write failed: " + path);
}

} // namespace cpns

#endif
