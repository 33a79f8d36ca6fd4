#include "netstat/spectral.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <numeric>
#include <ostream>
#include <string>

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>

#include "krylov.hpp"
#include "netstat/error.hpp"
#include "netstat/numeric_text.hpp"
#include "netstat/transforms.hpp"

namespace netstat {

namespace {

using cd = std::complex<double>;
using Triplet = Eigen::Triplet<double>;

constexpr std::array<MatrixKind, 10> kKinds = {
    MatrixKind::A, MatrixKind::B, MatrixKind::D, MatrixKind::N, MatrixKind::L,
    MatrixKind::Z, MatrixKind::P, MatrixKind::Pt, MatrixKind::S, MatrixKind::K,
};

bool needs_positive_weight(MatrixKind kind) {
    switch (kind) {
        case MatrixKind::N:
        case MatrixKind::Z:
        case MatrixKind::P:
        case MatrixKind::Pt:
        case MatrixKind::S:
        case MatrixKind::K:
            return true;
        default:
            return false;
    }
}

/// Undirected view: each pair appears from both ends, loops once with doubled weight.
void symmetric_adjacency(const Graph& g, const std::vector<NodeId>& index, std::vector<Triplet>& out) {
    for (NodeId u = 0; u < g.node_count(); ++u) {
        if (index[u] == kNoNode) continue;
        if (g.is_directed()) {
            for (const Neighbor& nb : g.out_neighbors(u)) {
                if (index[nb.node] == kNoNode) continue;
                out.emplace_back(index[u], index[nb.node], nb.weight);
                out.emplace_back(index[nb.node], index[u], nb.weight);
            }
        } else {
            for (const Neighbor& nb : g.neighbors(u)) {
                if (index[nb.node] == kNoNode) continue;
                out.emplace_back(index[u], index[nb.node], nb.node == u ? 2.0 * nb.weight : nb.weight);
            }
        }
    }
}

void oriented_adjacency(const Graph& g, const std::vector<NodeId>& index, std::vector<Triplet>& out) {
    if (!g.is_directed()) {
        symmetric_adjacency(g, index, out);
        return;
    }
    for (NodeId u = 0; u < g.node_count(); ++u) {
        if (index[u] == kNoNode) continue;
        for (const Neighbor& nb : g.out_neighbors(u))
            if (index[nb.node] != kNoNode) out.emplace_back(index[u], index[nb.node], nb.weight);
    }
}

Operator::Sparse to_sparse(std::size_t rows, std::size_t cols, const std::vector<Triplet>& triplets) {
    Operator::Sparse m(static_cast<Eigen::Index>(rows), static_cast<Eigen::Index>(cols));
    m.setFromTriplets(triplets.begin(), triplets.end());
    m.prune(0.0);
    m.makeCompressed();
    return m;
}

double relative(double residual, double norm) { return norm > 0.0 ? residual / norm : 0.0; }

/// Flip so the largest-magnitude component (first on ties) is positive.
void fix_sign(Eigen::Ref<Eigen::VectorXd> v) {
    Eigen::Index best = 0;
    for (Eigen::Index i = 1; i < v.size(); ++i)
        if (std::abs(v(i)) > std::abs(v(best)) * (1.0 + 1e-9)) best = i;
    if (v.size() > 0 && v(best) < 0.0) v = -v;
}

void fix_phase(Eigen::Ref<Eigen::VectorXcd> v) {
    Eigen::Index best = 0;
    for (Eigen::Index i = 1; i < v.size(); ++i)
        if (std::abs(v(i)) > std::abs(v(best)) * (1.0 + 1e-9)) best = i;
    if (v.size() == 0 || std::abs(v(best)) == 0.0) return;
    v *= std::conj(v(best)) / std::abs(v(best));
}

detail::KrylovProblem problem_for(const Operator& op) {
    detail::KrylovProblem p;
    p.n = op.rows();
    p.norm = op.norm_estimate();
    p.symmetric = op.symmetric();
    p.apply = [&op](const double* x, double* y) {
        op.apply(std::span<const double>(x, op.cols()), std::span<double>(y, op.rows()));
    };
    return p;
}

void check_square(const Operator& op) {
    if (op.rows() != op.cols()) throw UsageError("eigenvalues need a square operator");
}

void check_count(std::size_t k, std::size_t dim) {
    if (dim == 0) throw DomainError("operator has dimension zero");
    if (k == 0 || k > dim)
        throw UsageError("requested " + std::to_string(k) + " eigenvalues of an operator of dimension " +
                         std::to_string(dim));
}

bool use_dense(std::size_t dim, const SolverOptions& options) {
    return !options.force_iterative && dim <= options.dense_threshold;
}

double complex_residual(const Operator& op, const Eigen::VectorXcd& x, cd lambda) {
    const auto n = static_cast<Eigen::Index>(op.rows());
    Eigen::VectorXd xr = x.real();
    Eigen::VectorXd xi = x.imag();
    Eigen::VectorXd yr(n);
    Eigen::VectorXd yi(n);
    op.apply(std::span<const double>(xr.data(), xr.size()), std::span<double>(yr.data(), yr.size()));
    op.apply(std::span<const double>(xi.data(), xi.size()), std::span<double>(yi.data(), yi.size()));
    Eigen::VectorXcd y(n);
    y.real() = yr;
    y.imag() = yi;
    return (y - lambda * x).norm();
}

double real_residual(const Operator& op, const Eigen::VectorXd& x, double lambda) {
    Eigen::VectorXd y(static_cast<Eigen::Index>(op.rows()));
    op.apply(std::span<const double>(x.data(), x.size()), std::span<double>(y.data(), y.size()));
    return (y - lambda * x).norm();
}

/// Rayleigh quotient in extended precision; exact eigenvalues that are
/// representable come back exactly.
double rayleigh_quotient(const Operator& op, const Eigen::VectorXd& x) {
    const auto& m = op.matrix();
    long double num = 0.0L;
    long double den = 0.0L;
    for (Eigen::Index r = 0; r < m.outerSize(); ++r) {
        long double row = 0.0L;
        for (Operator::Sparse::InnerIterator it(m, r); it; ++it)
            row += static_cast<long double>(it.value()) * static_cast<long double>(x(it.col()));
        num += static_cast<long double>(x(r)) * row;
        den += static_cast<long double>(x(r)) * static_cast<long double>(x(r));
    }
    return den > 0.0L ? static_cast<double>(num / den) : 0.0;
}

/// Indices by order key; keys within `tol` of a group's first member count
/// as ties and resolve by real part, then imaginary part, descending.
std::vector<std::size_t> rank_values(const std::vector<cd>& values, SpectrumOrder order, double tol) {
    std::vector<std::size_t> idx(values.size());
    std::iota(idx.begin(), idx.end(), 0);
    std::stable_sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) {
        return detail::order_key(values[a], order) > detail::order_key(values[b], order);
    });
    for (std::size_t begin = 0; begin < idx.size();) {
        const double head = detail::order_key(values[idx[begin]], order);
        std::size_t end = begin + 1;
        while (end < idx.size() && head - detail::order_key(values[idx[end]], order) <= tol) ++end;
        std::stable_sort(idx.begin() + static_cast<std::ptrdiff_t>(begin), idx.begin() + static_cast<std::ptrdiff_t>(end),
                         [&](std::size_t a, std::size_t b) {
                             if (values[a].real() != values[b].real()) return values[a].real() > values[b].real();
                             return values[a].imag() > values[b].imag();
                         });
        begin = end;
    }
    return idx;
}

}  // namespace

std::string_view internal_name(MatrixKind kind) {
    switch (kind) {
        case MatrixKind::A: return "A";
        case MatrixKind::B: return "B";
        case MatrixKind::D: return "D";
        case MatrixKind::N: return "N";
        case MatrixKind::L: return "L";
        case MatrixKind::Z: return "Z";
        case MatrixKind::P: return "P";
        case MatrixKind::Pt: return "Pt";
        case MatrixKind::S: return "S";
        case MatrixKind::K: return "K";
    }
    return "?";
}

std::optional<MatrixKind> parse_matrix_kind(std::string_view name) {
    for (MatrixKind k : kKinds)
        if (internal_name(k) == name) return k;
    if (name == "P'") return MatrixKind::Pt;
    return std::nullopt;
}

std::span<const MatrixKind> all_matrix_kinds() { return kKinds; }

std::vector<double> SpectralResult::real_values() const {
    std::vector<double> out;
    out.reserve(values.size());
    for (cd v : values) out.push_back(v.real());
    return out;
}

Operator::Operator(MatrixKind kind, Sparse matrix, std::vector<NodeId> nodes, std::vector<NodeId> col_nodes,
                   bool symmetric)
    : kind_(kind),
      matrix_(std::move(matrix)),
      nodes_(std::move(nodes)),
      col_nodes_(std::move(col_nodes)),
      symmetric_(symmetric) {
    transpose_ = matrix_.transpose();
    double row_max = 0.0;
    for (Eigen::Index r = 0; r < matrix_.outerSize(); ++r) {
        double s = 0.0;
        for (Sparse::InnerIterator it(matrix_, r); it; ++it) s += std::abs(it.value());
        row_max = std::max(row_max, s);
    }
    double col_max = 0.0;
    for (Eigen::Index c = 0; c < transpose_.outerSize(); ++c) {
        double s = 0.0;
        for (Sparse::InnerIterator it(transpose_, c); it; ++it) s += std::abs(it.value());
        col_max = std::max(col_max, s);
    }
    norm_ = std::sqrt(row_max * col_max);
}

void Operator::apply(std::span<const double> x, std::span<double> y) const {
    Eigen::Map<const Eigen::VectorXd> xm(x.data(), static_cast<Eigen::Index>(x.size()));
    Eigen::Map<Eigen::VectorXd> ym(y.data(), static_cast<Eigen::Index>(y.size()));
    ym.noalias() = matrix_ * xm;
}

void Operator::apply_transpose(std::span<const double> x, std::span<double> y) const {
    Eigen::Map<const Eigen::VectorXd> xm(x.data(), static_cast<Eigen::Index>(x.size()));
    Eigen::Map<Eigen::VectorXd> ym(y.data(), static_cast<Eigen::Index>(y.size()));
    ym.noalias() = transpose_ * xm;
}

Eigen::MatrixXd Operator::dense() const { return Eigen::MatrixXd(matrix_); }

Operator build_operator(const Graph& g, MatrixKind kind, const OperatorOptions& options) {
    const std::size_t n = g.node_count();
    if (kind == MatrixKind::B && !g.is_bipartite()) throw UsageError("matrix B requires a bipartite network");
    if (!options.keep.empty() && options.keep.size() != n)
        throw UsageError("node mask size does not match the node count");

    std::vector<bool> keep = options.keep.empty() ? std::vector<bool>(n, true) : options.keep;
    if (options.largest_component) {
        if (n == 0) throw DomainError("empty network has no largest component");
        const Components comps = connected_components(g);
        const std::size_t big = comps.largest();
        for (NodeId u = 0; u < n; ++u) keep[u] = keep[u] && comps.label[u] == big;
    }
    const auto weights = g.node_weights();
    if (needs_positive_weight(kind)) {
        for (NodeId u = 0; u < n; ++u) {
            if (!keep[u] || weights[u] > 0.0) continue;
            if (!options.drop_zero_weight)
                throw DomainError("node " + std::to_string(g.external_id(u)) + " has zero node weight");
            keep[u] = false;
        }
    }

    std::vector<NodeId> index(n, kNoNode);
    std::vector<NodeId> nodes;
    std::vector<NodeId> col_nodes;
    if (kind == MatrixKind::B) {
        std::vector<NodeId> col_index(n, kNoNode);
        for (NodeId u = 0; u < n; ++u) {
            if (!keep[u]) continue;
            if (g.is_left(u)) {
                index[u] = static_cast<NodeId>(nodes.size());
                nodes.push_back(u);
            } else {
                col_index[u] = static_cast<NodeId>(col_nodes.size());
                col_nodes.push_back(u);
            }
        }
        std::vector<Triplet> t;
        for (NodeId u : nodes)
            for (const Neighbor& nb : g.neighbors(u))
                if (col_index[nb.node] != kNoNode) t.emplace_back(index[u], col_index[nb.node], nb.weight);
        auto m = to_sparse(nodes.size(), col_nodes.size(), t);
        return Operator(kind, std::move(m), std::move(nodes), std::move(col_nodes), false);
    }

    for (NodeId u = 0; u < n; ++u) {
        if (!keep[u]) continue;
        index[u] = static_cast<NodeId>(nodes.size());
        nodes.push_back(u);
    }
    const std::size_t dim = nodes.size();
    std::vector<double> d(dim);
    for (std::size_t i = 0; i < dim; ++i) d[i] = weights[nodes[i]];

    std::vector<Triplet> t;
    bool symmetric = true;
    switch (kind) {
        case MatrixKind::A:
            oriented_adjacency(g, index, t);
            symmetric = !g.is_directed();
            break;
        case MatrixKind::D:
            for (std::size_t i = 0; i < dim; ++i) t.emplace_back(i, i, d[i]);
            break;
        case MatrixKind::N:
        case MatrixKind::Z: {
            std::vector<Triplet> a;
            symmetric_adjacency(g, index, a);
            const double sign = kind == MatrixKind::N ? 1.0 : -1.0;
            for (const Triplet& e : a)
                t.emplace_back(e.row(), e.col(), sign * e.value() / std::sqrt(d[e.row()] * d[e.col()]));
            if (kind == MatrixKind::Z)
                for (std::size_t i = 0; i < dim; ++i) t.emplace_back(i, i, 1.0);
            break;
        }
        case MatrixKind::L:
        case MatrixKind::K: {
            std::vector<Triplet> a;
            symmetric_adjacency(g, index, a);
            const double sign = kind == MatrixKind::K ? 1.0 : -1.0;
            for (const Triplet& e : a) t.emplace_back(e.row(), e.col(), sign * e.value());
            for (std::size_t i = 0; i < dim; ++i) t.emplace_back(i, i, d[i]);
            break;
        }
        case MatrixKind::P:
        case MatrixKind::Pt:
        case MatrixKind::S: {
            std::vector<Triplet> a;
            oriented_adjacency(g, index, a);
            std::vector<double> scale = d;
            if (g.is_directed()) {
                // out-weights for P and S, in-weights for Pt
                std::fill(scale.begin(), scale.end(), 0.0);
                for (std::size_t i = 0; i < dim; ++i) {
                    const auto adj = kind == MatrixKind::Pt ? g.in_neighbors(nodes[i]) : g.out_neighbors(nodes[i]);
                    for (const Neighbor& nb : adj) scale[i] += nb.abs_weight;
                }
            }
            const double sign = kind == MatrixKind::S ? -1.0 : 1.0;
            for (const Triplet& e : a) {
                const double s = kind == MatrixKind::Pt ? scale[e.col()] : scale[e.row()];
                if (s > 0.0) t.emplace_back(e.row(), e.col(), sign * e.value() / s);
            }
            if (kind == MatrixKind::S)
                for (std::size_t i = 0; i < dim; ++i) t.emplace_back(i, i, 1.0);
            symmetric = false;
            break;
        }
        case MatrixKind::B:
            break;
    }
    auto m = to_sparse(dim, dim, t);
    std::vector<NodeId> cols = nodes;
    return Operator(kind, std::move(m), std::move(nodes), std::move(cols), symmetric);
}

SpectralResult eig_symmetric(const Operator& op, std::size_t k, SpectrumOrder order, const SolverOptions& options) {
    if (!op.symmetric()) throw UsageError("operator " + std::string(internal_name(op.kind())) + " is not symmetric");
    check_square(op);
    const std::size_t dim = op.rows();
    check_count(k, dim);
    if (order == SpectrumOrder::LargestModulus) order = SpectrumOrder::LargestAbsolute;

    SpectralResult r;
    r.kind = op.kind();
    r.order = order;
    r.nodes.assign(op.nodes().begin(), op.nodes().end());
    r.col_nodes.assign(op.col_nodes().begin(), op.col_nodes().end());
    r.norm_estimate = op.norm_estimate();
    const auto kk = static_cast<Eigen::Index>(k);
    const double key_tol = 1e-10 * std::max(r.norm_estimate, 1e-300);

    if (use_dense(dim, options)) {
        r.method = SolveMethod::Dense;
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(op.dense());
        const std::vector<cd> all(es.eigenvalues().data(), es.eigenvalues().data() + dim);
        const auto perm = rank_values(all, order, key_tol);
        r.vectors.resize(static_cast<Eigen::Index>(dim), kk);
        for (Eigen::Index i = 0; i < kk; ++i) {
            const auto j = static_cast<Eigen::Index>(perm[static_cast<std::size_t>(i)]);
            r.values.emplace_back(es.eigenvalues()(j));
            r.vectors.col(i) = es.eigenvectors().col(j);
        }
    } else {
        r.method = SolveMethod::Iterative;
        detail::KrylovSettings settings{options.tol, options.max_restarts, options.seed};
        const auto out = detail::krylov_schur(problem_for(op), k, order, settings);
        r.matvecs = out.matvecs;
        std::vector<cd> found;
        for (cd v : out.values) found.emplace_back(v.real());
        const auto perm = rank_values(found, order, key_tol);
        r.vectors.resize(static_cast<Eigen::Index>(dim), kk);
        for (Eigen::Index i = 0; i < kk; ++i) {
            const auto j = static_cast<Eigen::Index>(perm[static_cast<std::size_t>(i)]);
            r.values.push_back(found[static_cast<std::size_t>(j)]);
            r.vectors.col(i) = out.vectors.col(j).real();
        }
    }
    for (Eigen::Index i = 0; i < kk; ++i) {
        fix_sign(r.vectors.col(i));
        r.values[static_cast<std::size_t>(i)] = rayleigh_quotient(op, r.vectors.col(i));
        r.residuals.push_back(
            relative(real_residual(op, r.vectors.col(i), r.values[static_cast<std::size_t>(i)].real()),
                     r.norm_estimate));
    }
    return r;
}

SpectralResult eig_general(const Operator& op, std::size_t k, const SolverOptions& options) {
    check_square(op);
    const std::size_t dim = op.rows();
    check_count(k, dim);
    const std::size_t want = std::min(dim, k + 1);

    SpectralResult r;
    r.kind = op.kind();
    r.order = SpectrumOrder::LargestModulus;
    r.nodes.assign(op.nodes().begin(), op.nodes().end());
    r.col_nodes.assign(op.col_nodes().begin(), op.col_nodes().end());
    r.norm_estimate = op.norm_estimate();

    std::vector<cd> values;
    Eigen::MatrixXcd vectors;
    if (use_dense(dim, options)) {
        r.method = SolveMethod::Dense;
        Eigen::EigenSolver<Eigen::MatrixXd> es(op.dense());
        const std::vector<cd> all(es.eigenvalues().data(), es.eigenvalues().data() + dim);
        const auto perm = rank_values(all, SpectrumOrder::LargestModulus, 1e-10 * std::max(r.norm_estimate, 1e-300));
        vectors.resize(static_cast<Eigen::Index>(dim), static_cast<Eigen::Index>(want));
        for (std::size_t i = 0; i < want; ++i) {
            values.push_back(es.eigenvalues()(static_cast<Eigen::Index>(perm[i])));
            vectors.col(static_cast<Eigen::Index>(i)) = es.eigenvectors().col(static_cast<Eigen::Index>(perm[i]));
        }
    } else {
        r.method = SolveMethod::Iterative;
        detail::KrylovSettings settings{options.tol, options.max_restarts, options.seed};
        auto out = detail::krylov_schur(problem_for(op), want, SpectrumOrder::LargestModulus, settings);
        r.matvecs = out.matvecs;
        values = std::move(out.values);
        vectors = std::move(out.vectors);
    }

    // conjugate-pair symmetrization
    const double real_tol = std::max(1e-10, 10.0 * options.tol) * std::max(r.norm_estimate, 1e-300);
    std::vector<bool> paired(values.size(), false);
    for (std::size_t i = 0; i < values.size(); ++i) {
        if (paired[i]) continue;
        paired[i] = true;
        if (std::abs(values[i].imag()) <= real_tol) {
            values[i] = values[i].real();
            continue;
        }
        std::size_t best = values.size();
        double best_dist = 0.0;
        for (std::size_t j = i + 1; j < values.size(); ++j) {
            if (paired[j]) continue;
            const double dist = std::abs(values[j] - std::conj(values[i]));
            if (best == values.size() || dist < best_dist) {
                best = j;
                best_dist = dist;
            }
        }
        if (best != values.size() && best_dist <= 1e3 * real_tol + 1e-6 * std::abs(values[i])) {
            cd a = 0.5 * (values[i] + std::conj(values[best]));
            if (a.imag() < 0.0) a = std::conj(a);
            const bool first_upper = values[i].imag() >= 0.0;
            values[i] = first_upper ? a : std::conj(a);
            values[best] = std::conj(values[i]);
            paired[best] = true;
        }
    }
    const std::vector<std::size_t> ranked =
        rank_values(values, SpectrumOrder::LargestModulus, 1e-10 * std::max(r.norm_estimate, 1e-300));
    std::vector<cd> sorted_values;
    Eigen::MatrixXcd sorted_vectors(vectors.rows(), static_cast<Eigen::Index>(ranked.size()));
    for (std::size_t i = 0; i < ranked.size(); ++i) {
        sorted_values.push_back(values[ranked[i]]);
        sorted_vectors.col(static_cast<Eigen::Index>(i)) = vectors.col(static_cast<Eigen::Index>(ranked[i]));
    }
    std::size_t keep = std::min(k, sorted_values.size());
    if (keep < sorted_values.size() && sorted_values[keep - 1].imag() > 0.0 &&
        sorted_values[keep] == std::conj(sorted_values[keep - 1]))
        ++keep;
    r.values.assign(sorted_values.begin(), sorted_values.begin() + static_cast<std::ptrdiff_t>(keep));
    r.complex_vectors = sorted_vectors.leftCols(static_cast<Eigen::Index>(keep));
    for (Eigen::Index i = 0; i < r.complex_vectors.cols(); ++i) {
        auto col = r.complex_vectors.col(i);
        col /= col.norm();
        fix_phase(col);
        r.residuals.push_back(relative(complex_residual(op, r.complex_vectors.col(i), r.values[static_cast<std::size_t>(i)]),
                                       r.norm_estimate));
    }
    return r;
}

SpectralResult svd_biadjacency(const Graph& g, std::size_t k, const SolverOptions& options) {
    if (!g.is_bipartite()) throw UsageError("singular values need a bipartite network");
    const Operator b = build_operator(g, MatrixKind::B);
    const std::size_t n1 = b.rows();
    const std::size_t n2 = b.cols();
    if (n1 == 0 || n2 == 0) throw DomainError("biadjacency matrix is empty");
    if (k == 0 || k > std::min(n1, n2))
        throw UsageError("requested " + std::to_string(k) + " singular values of a " + std::to_string(n1) + "x" +
                         std::to_string(n2) + " matrix");

    SpectralResult r;
    r.kind = MatrixKind::B;
    r.order = SpectrumOrder::Largest;
    r.nodes.assign(b.nodes().begin(), b.nodes().end());
    r.col_nodes.assign(b.col_nodes().begin(), b.col_nodes().end());
    r.norm_estimate = b.norm_estimate();
    const auto kk = static_cast<Eigen::Index>(k);
    r.vectors.resize(static_cast<Eigen::Index>(n1), kk);
    r.right_vectors.resize(static_cast<Eigen::Index>(n2), kk);

    if (use_dense(n1 + n2, options)) {
        r.method = SolveMethod::Dense;
        Eigen::JacobiSVD<Eigen::MatrixXd> svd(b.dense(), Eigen::ComputeFullU | Eigen::ComputeFullV);
        for (Eigen::Index i = 0; i < kk; ++i) {
            r.values.emplace_back(svd.singularValues()(i));
            r.vectors.col(i) = svd.matrixU().col(i);
            r.right_vectors.col(i) = svd.matrixV().col(i);
        }
    } else {
        r.method = SolveMethod::Iterative;
        const Operator a = build_operator(g, MatrixKind::A);
        const SpectralResult e = eig_symmetric(a, k, SpectrumOrder::Largest, options);
        r.matvecs = e.matvecs;
        std::vector<NodeId> pos(g.node_count(), kNoNode);
        for (std::size_t i = 0; i < a.nodes().size(); ++i) pos[a.nodes()[i]] = static_cast<NodeId>(i);
        for (Eigen::Index i = 0; i < kk; ++i) {
            r.values.emplace_back(std::max(0.0, e.values[static_cast<std::size_t>(i)].real()));
            for (std::size_t j = 0; j < n1; ++j)
                r.vectors(static_cast<Eigen::Index>(j), i) = e.vectors(pos[r.nodes[j]], i);
            for (std::size_t j = 0; j < n2; ++j)
                r.right_vectors(static_cast<Eigen::Index>(j), i) = e.vectors(pos[r.col_nodes[j]], i);
            const double nu = r.vectors.col(i).norm();
            const double nv = r.right_vectors.col(i).norm();
            if (nu > 0.0) r.vectors.col(i) /= nu;
            if (nv > 0.0) r.right_vectors.col(i) /= nv;
        }
    }
    for (Eigen::Index i = 0; i < kk; ++i) {
        const double sigma = r.values[static_cast<std::size_t>(i)].real();
        Eigen::VectorXd u = r.vectors.col(i);
        Eigen::VectorXd v = r.right_vectors.col(i);
        Eigen::VectorXd bv(static_cast<Eigen::Index>(n1));
        Eigen::VectorXd btu(static_cast<Eigen::Index>(n2));
        b.apply(std::span<const double>(v.data(), v.size()), std::span<double>(bv.data(), bv.size()));
        b.apply_transpose(std::span<const double>(u.data(), u.size()), std::span<double>(btu.data(), btu.size()));
        const double res = std::sqrt((bv - sigma * u).squaredNorm() + (btu - sigma * v).squaredNorm());
        r.residuals.push_back(relative(res, r.norm_estimate));
    }
    return r;
}

std::vector<double> dense_symmetric_spectrum(const Operator& op) {
    if (!op.symmetric()) throw UsageError("operator " + std::string(internal_name(op.kind())) + " is not symmetric");
    if (op.rows() == 0) return {};
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(op.dense(), Eigen::EigenvaluesOnly);
    return {es.eigenvalues().data(), es.eigenvalues().data() + es.eigenvalues().size()};
}

std::vector<std::complex<double>> dense_general_spectrum(const Operator& op) {
    check_square(op);
    if (op.rows() == 0) return {};
    Eigen::EigenSolver<Eigen::MatrixXd> es(op.dense(), false);
    std::vector<cd> out(es.eigenvalues().data(), es.eigenvalues().data() + es.eigenvalues().size());
    std::stable_sort(out.begin(), out.end(),
                     [](cd a, cd b) { return detail::wanted_before(a, b, SpectrumOrder::LargestModulus); });
    return out;
}

std::vector<QuadratureProbe> spectral_quadrature(const Operator& op, std::size_t probes, std::size_t steps,
                                                 std::uint64_t seed) {
    if (!op.symmetric()) throw UsageError("spectral quadrature needs a symmetric operator");
    if (op.rows() == 0) throw DomainError("operator has dimension zero");
    const auto problem = problem_for(op);
    std::vector<QuadratureProbe> out;
    for (std::size_t i = 0; i < probes; ++i) {
        Eigen::VectorXd start = detail::random_vector(op.rows(), seed + 1000003ULL * (i + 1));
        if (start.norm() == 0.0) start.setOnes();
        out.push_back(detail::lanczos_quadrature(problem, start, steps));
    }
    return out;
}

void write_spectrum_tsv(std::ostream& out, const SpectralResult& result) {
    out << "# index\treal\timag\tresidual\n";
    for (std::size_t i = 0; i < result.values.size(); ++i) {
        out << (i + 1) << '\t' << format_number(result.values[i].real()) << '\t'
            << format_number(result.values[i].imag()) << '\t'
            << format_number(i < result.residuals.size() ? result.residuals[i] : 0.0) << '\n';
    }
}

void write_vectors_tsv(std::ostream& out, const SpectralResult& result, const Graph& g) {
    const bool complex = result.vectors.cols() == 0 && result.complex_vectors.cols() > 0;
    const Eigen::MatrixXd left = complex ? Eigen::MatrixXd(result.complex_vectors.real()) : result.vectors;
    const Eigen::Index cols = left.cols();
    const bool sides = g.is_bipartite();
    out << '#';
    if (sides) out << " side\t";
    else out << ' ';
    out << "node";
    for (Eigen::Index c = 0; c < cols; ++c) out << "\tv" << (c + 1);
    out << '\n';
    auto row = [&](NodeId u, const Eigen::MatrixXd& m, Eigen::Index r) {
        if (sides) out << (g.is_left(u) ? 1 : 2) << '\t';
        out << g.external_id(u);
        for (Eigen::Index c = 0; c < cols; ++c) out << '\t' << format_number(m(r, c));
        out << '\n';
    };
    for (std::size_t i = 0; i < result.nodes.size(); ++i) row(result.nodes[i], left, static_cast<Eigen::Index>(i));
    if (result.right_vectors.cols() > 0)
        for (std::size_t i = 0; i < result.col_nodes.size(); ++i)
            row(result.col_nodes[i], result.right_vectors, static_cast<Eigen::Index>(i));
}

}  // namespace netstat
