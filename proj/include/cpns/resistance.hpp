#ifndef CPNS_RESISTANCE_HPP
#define CPNS_RESISTANCE_HPP

#include <cmath>
#include <cstdint>
#include <limits>
#include <mutex>
#include <string>
#include <thread>
#include <vector>

#include <Eigen/Dense>

#include "cpns/errors.hpp"
#include "cpns/graph.hpp"
#include "cpns/rng.hpp"

namespace cpns {

enum class ResistanceMethod { exact, jl_approx };

// Per-edge effective resistances and leverage scores w_e * R_e.
// Exact mode keeps the Laplacian pseudoinverse; approximate mode keeps the
// k x n projection matrix Z, so both support arbitrary pair queries.
struct ResistanceSketch {
    ResistanceMethod method = ResistanceMethod::exact;
    double epsilon = 0.0;
    int n = 0;
    int m = 0;
    std::vector<double> edge_resistance;
    std::vector<double> leverage;
    ComponentLabeling components;
    Eigen::MatrixXd pinv;   // exact mode, n x n
    Eigen::MatrixXd sketch; // jl mode, k x n

    double pair_resistance(int i, int j) const {
        if (i == j) return 0.0;
        if (components.label[static_cast<std::size_t>(i)] !=
            components.label[static_cast<std::size_t>(j)])
            return std::numeric_limits<double>::infinity();
        if (method == ResistanceMethod::exact)
            return pinv(i, i) + pinv(j, j) - 2.0 * pinv(i, j);
        return (sketch.col(i) - sketch.col(j)).squaredNorm();
    }

    double leverage_sum() const {
        double s = 0.0;
        for (double l : leverage) s += l;
        return s;
    }
};

namespace detail {

// Pseudoinverse via eigendecomposition; eigenvalues below 1e-10 * lambda_max
// are the structural zeros (one per component) and are dropped.
inline Eigen::MatrixXd laplacian_pinv(const Eigen::MatrixXd& L) {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(L);
    const Eigen::VectorXd& ev = es.eigenvalues();
    const double lmax = ev.cwiseAbs().maxCoeff();
    const double cut = lmax > 0 ? 1e-10 * lmax : 1.0;
    Eigen::VectorXd inv = Eigen::VectorXd::Zero(ev.size());
    for (Eigen::Index i = 0; i < ev.size(); ++i)
        if (ev(i) > cut) inv(i) = 1.0 / ev(i);
    return es.eigenvectors() * inv.asDiagonal() * es.eigenvectors().transpose();
}

} // namespace detail

inline ResistanceSketch exact_resistance(const WeightedGraph& g) {
    if (g.n() > 5000)
        throw validation_error("exact resistance limited to n <= 5000; use the "
                               "jl-approx method for larger graphs");
    ResistanceSketch sk;
    sk.method = ResistanceMethod::exact;
    sk.n = g.n();
    sk.m = g.m();
    sk.components = connected_components(g);
    sk.pinv = detail::laplacian_pinv(laplacian(g));
    sk.edge_resistance.reserve(static_cast<std::size_t>(g.m()));
    sk.leverage.reserve(static_cast<std::size_t>(g.m()));
    for (const Edge& e : g.edges()) {
        double r = sk.pinv(e.u, e.u) + sk.pinv(e.v, e.v) - 2.0 * sk.pinv(e.u, e.v);
        sk.edge_resistance.push_back(r);
        sk.leverage.push_back(e.w * r);
    }
    return sk;
}

namespace detail {

// Jacobi-preconditioned CG for the (singular, consistent) Laplacian system.
// The residual is kept orthogonal to the per-component constant vectors.
class LaplacianSolver {
public:
    LaplacianSolver(const WeightedGraph& g, const ComponentLabeling& comps)
        : n_(g.n()), comps_(comps) {
        deg_ = g.weighted_degrees();
        head_.assign(static_cast<std::size_t>(n_), -1);
        const auto& edges = g.edges();
        next_.assign(edges.size() * 2, -1);
        to_.assign(edges.size() * 2, 0);
        w_.assign(edges.size() * 2, 0.0);
        int idx = 0;
        for (const Edge& e : edges) {
            to_[static_cast<std::size_t>(idx)] = e.v;
            w_[static_cast<std::size_t>(idx)] = e.w;
            next_[static_cast<std::size_t>(idx)] = head_[static_cast<std::size_t>(e.u)];
            head_[static_cast<std::size_t>(e.u)] = idx++;
            to_[static_cast<std::size_t>(idx)] = e.u;
            w_[static_cast<std::size_t>(idx)] = e.w;
            next_[static_cast<std::size_t>(idx)] = head_[static_cast<std::size_t>(e.v)];
            head_[static_cast<std::size_t>(e.v)] = idx++;
        }
        comp_size_.assign(static_cast<std::size_t>(comps_.count), 0);
        for (int v = 0; v < n_; ++v)
            comp_size_[static_cast<std::size_t>(comps_.label[static_cast<std::size_t>(v)])]++;
    }

    void apply(const std::vector<double>& x, std::vector<double>& y) const {
        for (int v = 0; v < n_; ++v) {
            double s = deg_[static_cast<std::size_t>(v)] * x[static_cast<std::size_t>(v)];
            for (int e = head_[static_cast<std::size_t>(v)]; e >= 0;
                 e = next_[static_cast<std::size_t>(e)])
                s -= w_[static_cast<std::size_t>(e)] *
                     x[static_cast<std::size_t>(to_[static_cast<std::size_t>(e)])];
            y[static_cast<std::size_t>(v)] = s;
        }
    }

    void project(std::vector<double>& x) const {
        std::vector<double> mean(static_cast<std::size_t>(comps_.count), 0.0);
        for (int v = 0; v < n_; ++v)
            mean[static_cast<std::size_t>(comps_.label[static_cast<std::size_t>(v)])] +=
                x[static_cast<std::size_t>(v)];
        for (int c = 0; c < comps_.count; ++c)
            mean[static_cast<std::size_t>(c)] /= comp_size_[static_cast<std::size_t>(c)];
        for (int v = 0; v < n_; ++v)
            x[static_cast<std::size_t>(v)] -=
                mean[static_cast<std::size_t>(comps_.label[static_cast<std::size_t>(v)])];
    }

    // Solves L x = b to ||r|| <= tol. Throws convergence_error past the cap.
    std::vector<double> solve(const std::vector<double>& b, double tol) const {
        const std::size_t n = static_cast<std::size_t>(n_);
        std::vector<double> x(n, 0.0), r = b, z(n), p(n), Ap(n);
        project(r);
        auto precond = [&](const std::vector<double>& in, std::vector<double>& out) {
            for (std::size_t v = 0; v < n; ++v)
                out[v] = deg_[v] > 0 ? in[v] / deg_[v] : in[v];
        };
        precond(r, z);
        p = z;
        double rz = dot(r, z);
        double rnorm = std::sqrt(dot(r, r));
        if (rnorm <= tol) return x;
        const int cap = 10 * n_ + 50;
        for (int it = 0; it < cap; ++it) {
            apply(p, Ap);
            double pAp = dot(p, Ap);
            if (pAp <= 0) break;
            double alpha = rz / pAp;
            for (std::size_t v = 0; v < n; ++v) {
                x[v] += alpha * p[v];
                r[v] -= alpha * Ap[v];
            }
            project(r);
            rnorm = std::sqrt(dot(r, r));
            if (rnorm <= tol) {
                project(x);
                return x;
            }
            precond(r, z);
            double rz_new = dot(r, z);
            double beta = rz_new / rz;
            rz = rz_new;
            for (std::size_t v = 0; v < n; ++v) p[v] = z[v] + beta * p[v];
        }
        throw convergence_error("Laplacian solve did not converge (residual " +
                                    std::to_string(rnorm) + ", tolerance " +
                                    std::to_string(tol) + ")",
                                rnorm);
    }

private:
    static double dot(const std::vector<double>& a, const std::vector<double>& b) {
        double s = 0.0;
        for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
        return s;
    }

    int n_;
    ComponentLabeling comps_;
    std::vector<double> deg_;
    std::vector<int> head_, next_, to_;
    std::vector<double> w_;
    std::vector<int> comp_size_;
};

} // namespace detail

// (1 +- eps) effective resistances for all edges via random projection:
// Z = Q W^{1/2} B L^+ with Q a k x m sign matrix, k = ceil(24 ln n / eps^2),
// each row obtained from one preconditioned Laplacian solve. Pair estimates
// are ||Z(e_i - e_j)||^2.
inline ResistanceSketch approx_resistance(const WeightedGraph& g, double epsilon,
                                          std::uint64_t seed, int workers = 1) {
    if (!(epsilon > 0.0 && epsilon < 1.0))
        throw validation_error("epsilon must be in (0,1)");
    const int n = g.n();
    const int m = g.m();
    ResistanceSketch sk;
    sk.method = ResistanceMethod::jl_approx;
    sk.epsilon = epsilon;
    sk.n = n;
    sk.m = m;
    sk.components = connected_components(g);

    const int k = std::max(1, static_cast<int>(std::ceil(
                                  24.0 * std::log(std::max(n, 2)) / (epsilon * epsilon))));
    sk.sketch = Eigen::MatrixXd::Zero(k, n);

    detail::LaplacianSolver solver(g, sk.components);
    const double scale = 1.0 / std::sqrt(static_cast<double>(k));
    const auto& edges = g.edges();

    // Signs for the whole Q are drawn up front so the result does not depend
    // on the worker count.
    std::vector<std::uint8_t> signs(static_cast<std::size_t>(k) * static_cast<std::size_t>(m));
    {
        Rng rng(seed);
        std::uint64_t buf = 0;
        int bits = 0;
        for (auto& s : signs) {
            if (bits == 0) {
                buf = rng.next_u64();
                bits = 64;
            }
            s = buf & 1;
            buf >>= 1;
            --bits;
        }
    }

    auto run_rows = [&](int row_begin, int row_end) {
        std::vector<double> y(static_cast<std::size_t>(n));
        for (int row = row_begin; row < row_end; ++row) {
            std::fill(y.begin(), y.end(), 0.0);
            const std::size_t base =
                static_cast<std::size_t>(row) * static_cast<std::size_t>(m);
            for (int e = 0; e < m; ++e) {
                double c = (signs[base + static_cast<std::size_t>(e)] ? scale : -scale) *
                           std::sqrt(edges[static_cast<std::size_t>(e)].w);
                y[static_cast<std::size_t>(edges[static_cast<std::size_t>(e)].u)] += c;
                y[static_cast<std::size_t>(edges[static_cast<std::size_t>(e)].v)] -= c;
            }
            double ynorm = 0.0;
            for (double v : y) ynorm += v * v;
            ynorm = std::sqrt(ynorm);
            const double tol = epsilon * 1e-2 * std::max(ynorm, 1e-300);
            std::vector<double> z = solver.solve(y, tol);
            for (int v = 0; v < n; ++v) sk.sketch(row, v) = z[static_cast<std::size_t>(v)];
        }
    };

    workers = std::max(1, workers);
    if (workers == 1 || k < 2 * workers) {
        run_rows(0, k);
    } else {
        std::vector<std::thread> pool;
        int chunk = (k + workers - 1) / workers;
        std::exception_ptr err;
        std::mutex err_mu;
        for (int w = 0; w < workers; ++w) {
            int b = w * chunk, e = std::min(k, b + chunk);
            if (b >= e) break;
            pool.emplace_back([&, b, e] {
                try {
                    run_rows(b, e);
                } catch (...) {
                    std::lock_guard<std::mutex> lk(err_mu);
                    if (!err) err = std::current_exception();
                }
            });
        }
        for (auto& t : pool) t.join();
        if (err) std::rethrow_exception(err);
    }

    sk.edge_resistance.reserve(static_cast<std::size_t>(m));
    sk.leverage.reserve(static_cast<std::size_t>(m));
    for (const Edge& e : edges) {
        double r = (sk.sketch.col(e.u) - sk.sketch.col(e.v)).squaredNorm();
        sk.edge_resistance.push_back(r);
        sk.leverage.push_back(e.w * r);
    }
    return sk;
}

// Weighted matrix-tree oracle: P(e in T) for a random spanning tree drawn
// with probability proportional to the product of edge weights. Independent
// route against leverage scores; enumeration-scale graphs only.
inline std::vector<double> spanning_tree_edge_probability(const WeightedGraph& g) {
    if (g.n() > 12)
        throw validation_error("spanning tree oracle limited to n <= 12");
    if (connected_components(g).count != 1)
        throw validation_error("spanning tree oracle requires a connected graph");

    auto tree_weight = [](int n, const std::vector<Edge>& edges) {
        if (n == 1) return 1.0;
        Eigen::MatrixXd L = Eigen::MatrixXd::Zero(n, n);
        for (const Edge& e : edges) {
            L(e.u, e.u) += e.w;
            L(e.v, e.v) += e.w;
            L(e.u, e.v) -= e.w;
            L(e.v, e.u) -= e.w;
        }
        return L.block(1, 1, n - 1, n - 1).determinant();
    };

    const double total = tree_weight(g.n(), g.edges());
    std::vector<double> prob;
    prob.reserve(static_cast<std::size_t>(g.m()));
    for (int ei = 0; ei < g.m(); ++ei) {
        const Edge& e = g.edge(ei);
        // contract e: merge v into u, relabel the last vertex into v's slot
        std::vector<int> remap(static_cast<std::size_t>(g.n()));
        for (int v = 0; v < g.n(); ++v) remap[static_cast<std::size_t>(v)] = v;
        remap[static_cast<std::size_t>(e.v)] = e.u;
        int next = 0;
        std::vector<int> compact(static_cast<std::size_t>(g.n()), -1);
        for (int v = 0; v < g.n(); ++v) {
            int r = remap[static_cast<std::size_t>(v)];
            if (compact[static_cast<std::size_t>(r)] < 0)
                compact[static_cast<std::size_t>(r)] = next++;
        }
        std::vector<Edge> contracted;
        for (int ej = 0; ej < g.m(); ++ej) {
            if (ej == ei) continue;
            const Edge& f = g.edge(ej);
            int a = compact[static_cast<std::size_t>(remap[static_cast<std::size_t>(f.u)])];
            int b = compact[static_cast<std::size_t>(remap[static_cast<std::size_t>(f.v)])];
            if (a == b) continue; // became a loop
            contracted.push_back({std::min(a, b), std::max(a, b), f.w});
        }
        prob.push_back(e.w * tree_weight(next, contracted) / total);
    }
    return prob;
}

} // namespace cpns

#endif
