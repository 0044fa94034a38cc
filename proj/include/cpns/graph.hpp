#ifndef CPNS_GRAPH_HPP
#define CPNS_GRAPH_HPP

#include <algorithm>
#include <charconv>
#include <cstdint>
#include <fstream>
#include <sstream>
#include <string>
#include <unordered_set>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "cpns/errors.hpp"

namespace cpns {

struct Edge {
    int u;
    int v;
    double w;
};

// Undirected weighted simple graph. Edges are canonicalized to u < v and
// sorted, giving every edge a stable index in [0, m). Immutable once built.
class WeightedGraph {
public:
    WeightedGraph(int n, std::vector<Edge> edges) : n_(n), edges_(std::move(edges)) {
        if (n_ < 1) throw validation_error("vertex count must be >= 1");
        for (auto& e : edges_) {
            if (e.u > e.v) std::swap(e.u, e.v);
        }
        std::sort(edges_.begin(), edges_.end(), [](const Edge& a, const Edge& b) {
            return a.u != b.u ? a.u < b.u : a.v < b.v;
        });
        for (std::size_t i = 0; i < edges_.size(); ++i) {
            const Edge& e = edges_[i];
            if (e.u == e.v)
                throw validation_error("self-loop at vertex " + std::to_string(e.u));
            if (e.u < 0 || e.v >= n_)
                throw validation_error("vertex id out of range: (" + std::to_string(e.u) +
                                       "," + std::to_string(e.v) + ")");
            if (!(e.w > 0.0) || !std::isfinite(e.w))
                throw validation_error("edge (" + std::to_string(e.u) + "," +
                                       std::to_string(e.v) + ") has non-positive weight");
            if (i > 0 && edges_[i - 1].u == e.u && edges_[i - 1].v == e.v)
                throw validation_error("duplicate edge (" + std::to_string(e.u) + "," +
                                       std::to_string(e.v) + ")");
        }
    }

    int n() const { return n_; }
    int m() const { return static_cast<int>(edges_.size()); }
    const std::vector<Edge>& edges() const { return edges_; }
    const Edge& edge(int e) const { return edges_[static_cast<std::size_t>(e)]; }

    // Adjacency as (neighbor, edge index) lists, neighbors in canonical order.
    std::vector<std::vector<std::pair<int, int>>> adjacency() const {
        std::vector<std::vector<std::pair<int, int>>> adj(static_cast<std::size_t>(n_));
        for (int e = 0; e < m(); ++e) {
            adj[static_cast<std::size_t>(edges_[e].u)].emplace_back(edges_[e].v, e);
            adj[static_cast<std::size_t>(edges_[e].v)].emplace_back(edges_[e].u, e);
        }
        for (auto& nb : adj)
            std::sort(nb.begin(), nb.end());
        return adj;
    }

    std::vector<double> weighted_degrees() const {
        std::vector<double> deg(static_cast<std::size_t>(n_), 0.0);
        for (const Edge& e : edges_) {
            deg[static_cast<std::size_t>(e.u)] += e.w;
            deg[static_cast<std::size_t>(e.v)] += e.w;
        }
        return deg;
    }

private:
    int n_;
    std::vector<Edge> edges_;
};

// L = D - A, dense.
inline Eigen::MatrixXd laplacian(const WeightedGraph& g) {
    Eigen::MatrixXd L = Eigen::MatrixXd::Zero(g.n(), g.n());
    for (const Edge& e : g.edges()) {
        L(e.u, e.u) += e.w;
        L(e.v, e.v) += e.w;
        L(e.u, e.v) -= e.w;
        L(e.v, e.u) -= e.w;
    }
    return L;
}

struct ComponentLabeling {
    std::vector<int> label; // component id per vertex, ids in [0, count)
    int count;
};

inline ComponentLabeling connected_components(const WeightedGraph& g) {
    const int n = g.n();
    std::vector<int> parent(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) parent[static_cast<std::size_t>(i)] = i;
    auto find = [&](int x) {
        while (parent[static_cast<std::size_t>(x)] != x) {
            parent[static_cast<std::size_t>(x)] =
                parent[static_cast<std::size_t>(parent[static_cast<std::size_t>(x)])];
            x = parent[static_cast<std::size_t>(x)];
        }
        return x;
    };
    for (const Edge& e : g.edges()) {
        int a = find(e.u), b = find(e.v);
        if (a != b) parent[static_cast<std::size_t>(a)] = b;
    }
    ComponentLabeling out;
    out.label.assign(static_cast<std::size_t>(n), -1);
    out.count = 0;
    for (int i = 0; i < n; ++i) {
        int r = find(i);
        if (out.label[static_cast<std::size_t>(r)] < 0)
            out.label[static_cast<std::size_t>(r)] = out.count++;
        out.label[static_cast<std::size_t>(i)] = out.label[static_cast<std::size_t>(r)];
    }
    return out;
}

// Shortest decimal string that round-trips through double parsing.
inline std::string format_double(double x) {
    char buf[64];
    auto res = std::to_chars(buf, buf + sizeof(buf), x);
    return std::string(buf, res.ptr);
}

// TSV edge list: "u\tv\tw" per line, '#' comments, optional "# n=<count>".
inline WeightedGraph load_edge_list(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw io_error("cannot open " + path);
    std::vector<Edge> edges;
    std::unordered_set<std::uint64_t> seen;
    int header_n = -1;
    int max_id = -1;
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        std::size_t start = line.find_first_not_of(" \t");
        if (start == std::string::npos) continue;
        if (line[start] == '#') {
            std::size_t pos = line.find("n=");
            if (pos != std::string::npos) {
                int val = 0;
                auto [p, ec] = std::from_chars(line.data() + pos + 2,
                                               line.data() + line.size(), val);
                if (ec == std::errc() && val >= 1) header_n = val;
            }
            continue;
        }
        std::istringstream ss(line);
        long long u, v;
        double w;
        if (!(ss >> u >> v >> w)) {
            throw parse_error(path + ":" + std::to_string(lineno) + ": malformed line");
        }
        std::string rest;
        if (ss >> rest)
            throw parse_error(path + ":" + std::to_string(lineno) + ": trailing tokens");
        if (u < 0 || v < 0)
            throw parse_error(path + ":" + std::to_string(lineno) + ": negative vertex id");
        if (u == v)
            throw parse_error(path + ":" + std::to_string(lineno) + ": self-loop");
        if (!(w > 0.0) || !std::isfinite(w))
            throw parse_error(path + ":" + std::to_string(lineno) +
                              ": weight must be positive and finite");
        int a = static_cast<int>(std::min(u, v));
        int b = static_cast<int>(std::max(u, v));
        std::uint64_t key = (static_cast<std::uint64_t>(a) << 32) |
                            static_cast<std::uint32_t>(b);
        if (!seen.insert(key).second)
            throw parse_error(path + ":" + std::to_string(lineno) + ": duplicate edge (" +
                              std::to_string(a) + "," + std::to_string(b) + ")");
        edges.push_back({a, b, w});
        max_id = std::max(max_id, b);
    }
    int n = header_n > 0 ? header_n : max_id + 1;
    if (n < 1) throw parse_error(path + ": no vertices (empty file without n= header)");
    if (max_id >= n)
        throw parse_error(path + ": vertex id " + std::to_string(max_id) +
                          " exceeds declared n=" + std::to_string(n));
    return WeightedGraph(n, std::move(edges));
}

inline void save_edge_list(const WeightedGraph& g, const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw io_error("cannot open " + path + " for writing");
    out << "# n=" << g.n() << "\n";
    for (const Edge& e : g.edges())
        out << e.u << '\t' << e.v << '\t' << format_double(e.w) << '\n';
    if (!out) throw io_error("write failed: " + path);
}

} // namespace cpns

#endif
