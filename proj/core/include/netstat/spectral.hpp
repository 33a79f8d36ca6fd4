#pragma once

#include <complex>
#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include <Eigen/Core>
#include <Eigen/SparseCore>

#include "netstat/graph.hpp"

namespace netstat {

/// Characteristic matrices. `P` is row-stochastic (D1^-1 A), `Pt` the
/// column-stochastic variant (A D2^-1).
enum class MatrixKind { A, B, D, N, L, Z, P, Pt, S, K };

std::string_view internal_name(MatrixKind kind);
std::optional<MatrixKind> parse_matrix_kind(std::string_view name);
std::span<const MatrixKind> all_matrix_kinds();

enum class SpectrumOrder {
    LargestAbsolute,  ///< |lambda| descending
    Smallest,         ///< lambda ascending
    Largest,          ///< lambda descending
    LargestModulus,   ///< complex |lambda| descending
};

struct OperatorOptions {
    /// Restrict to the largest connected component (weak connectivity).
    bool largest_component = false;
    /// Drop nodes with zero node weight for N, Z, P, Pt, S and K. When
    /// disabled, such a node raises DomainError.
    bool drop_zero_weight = true;
    /// Optional node mask, applied before the two rules above.
    std::vector<bool> keep;
};

/// Sparse matrix over a subset of the graph's nodes. Row i corresponds to
/// node nodes()[i]; for B, column j corresponds to col_nodes()[j].
class Operator {
public:
    using Sparse = Eigen::SparseMatrix<double, Eigen::RowMajor>;

    Operator(MatrixKind kind, Sparse matrix, std::vector<NodeId> nodes, std::vector<NodeId> col_nodes,
             bool symmetric);

    MatrixKind kind() const { return kind_; }
    std::size_t rows() const { return static_cast<std::size_t>(matrix_.rows()); }
    std::size_t cols() const { return static_cast<std::size_t>(matrix_.cols()); }
    bool symmetric() const { return symmetric_; }
    std::span<const NodeId> nodes() const { return nodes_; }
    std::span<const NodeId> col_nodes() const { return col_nodes_; }
    const Sparse& matrix() const { return matrix_; }

    /// y = M x
    void apply(std::span<const double> x, std::span<double> y) const;
    /// y = M^T x
    void apply_transpose(std::span<const double> x, std::span<double> y) const;

    Eigen::MatrixXd dense() const;
    /// sqrt(|M|_1 |M|_inf), an upper bound of the spectral norm.
    double norm_estimate() const { return norm_; }

private:
    MatrixKind kind_;
    Sparse matrix_;
    Sparse transpose_;
    std::vector<NodeId> nodes_;
    std::vector<NodeId> col_nodes_;
    bool symmetric_;
    double norm_ = 0.0;
};

/// Builds the characteristic matrix. Undirected loops count twice on the
/// diagonal of A, so row sums of |A| equal node weights. On directed graphs
/// A, P, Pt and S keep edge orientation; N, L, Z, K and D use the
/// symmetrized adjacency A + A^T. B requires a bipartite graph.
Operator build_operator(const Graph& g, MatrixKind kind, const OperatorOptions& options = {});

enum class SolveMethod { Dense, Iterative };

struct SolverOptions {
    /// Relative residual bound: |Mx - lambda x| <= tol * norm_estimate.
    double tol = 1e-8;
    std::uint64_t seed = 42;
    /// Dimensions up to this use a dense direct solver.
    std::size_t dense_threshold = 500;
    bool force_iterative = false;
    /// Restart budget per Krylov run; 0 means 50 * k.
    std::size_t max_restarts = 0;
};

struct SpectralResult {
    MatrixKind kind = MatrixKind::A;
    SpectrumOrder order = SpectrumOrder::LargestAbsolute;
    SolveMethod method = SolveMethod::Dense;
    std::vector<std::complex<double>> values;
    /// Real eigenvectors (symmetric problems) or left singular vectors, one per column.
    Eigen::MatrixXd vectors;
    /// Right singular vectors (svd_biadjacency only).
    Eigen::MatrixXd right_vectors;
    /// Eigenvectors of general problems.
    Eigen::MatrixXcd complex_vectors;
    /// Relative residual of each pair.
    std::vector<double> residuals;
    std::vector<NodeId> nodes;
    std::vector<NodeId> col_nodes;
    double norm_estimate = 0.0;
    std::size_t matvecs = 0;

    std::vector<double> real_values() const;
};

/// k eigenpairs of a symmetric operator; order is LargestAbsolute, Largest or Smallest.
SpectralResult eig_symmetric(const Operator& op, std::size_t k, SpectrumOrder order,
                             const SolverOptions& options = {});

/// k eigenvalues of largest modulus of a square operator. The returned set is
/// closed under conjugation, so one extra value is returned when the k-th
/// value's partner would otherwise be cut off.
SpectralResult eig_general(const Operator& op, std::size_t k, const SolverOptions& options = {});

/// Top-k singular triplets of the biadjacency matrix.
SpectralResult svd_biadjacency(const Graph& g, std::size_t k, const SolverOptions& options = {});

/// Full spectrum by a dense solve, ascending.
std::vector<double> dense_symmetric_spectrum(const Operator& op);
/// Full spectrum by a dense solve, sorted by descending modulus.
std::vector<std::complex<double>> dense_general_spectrum(const Operator& op);

/// Gauss quadrature nodes and weights from Lanczos runs on random probe
/// vectors; each probe's weights sum to 1 and approximate the spectral
/// distribution of a symmetric operator.
struct QuadratureProbe {
    std::vector<double> nodes;
    std::vector<double> weights;
};
std::vector<QuadratureProbe> spectral_quadrature(const Operator& op, std::size_t probes, std::size_t steps,
                                                 std::uint64_t seed);

/// Rows: index, real, imag, residual.
void write_spectrum_tsv(std::ostream& out, const SpectralResult& result);
/// Rows: external node id then one column per vector (real parts).
void write_vectors_tsv(std::ostream& out, const SpectralResult& result, const Graph& g);

}  // namespace netstat
