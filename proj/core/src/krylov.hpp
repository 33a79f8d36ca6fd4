#pragma once

#include <complex>
#include <cstdint>
#include <functional>
#include <vector>

#include <Eigen/Core>

#include "netstat/spectral.hpp"

namespace netstat::detail {

/// y = M x for a real square operator of dimension n.
using MatVec = std::function<void(const double* x, double* y)>;

struct KrylovProblem {
    std::size_t n = 0;
    MatVec apply;
    double norm = 1.0;
    bool symmetric = true;
};

struct KrylovSettings {
    double tol = 1e-8;
    std::size_t max_restarts = 0;
    std::uint64_t seed = 42;
};

struct KrylovOutput {
    std::vector<std::complex<double>> values;
    /// Orthonormal basis of the computed invariant subspace (Schur vectors).
    Eigen::MatrixXcd basis;
    /// Eigenvectors, unit norm.
    Eigen::MatrixXcd vectors;
    std::vector<double> residuals;  ///< relative to problem.norm
    std::size_t matvecs = 0;
};

/// Krylov-Schur iteration with full reorthogonalization. Symmetric problems
/// run in real arithmetic (thick-restart Lanczos); general problems in
/// complex arithmetic. Missed copies of repeated eigenvalues are recovered by
/// deflated passes orthogonal to the converged subspace. Throws
/// ConvergenceError when the restart budget runs out.
KrylovOutput krylov_schur(const KrylovProblem& problem, std::size_t k, SpectrumOrder order,
                          const KrylovSettings& settings);

/// Lanczos tridiagonalization without restarts, started from `start`;
/// returns the Ritz values and the squared first components of the Ritz vectors.
QuadratureProbe lanczos_quadrature(const KrylovProblem& problem, const Eigen::VectorXd& start, std::size_t steps);

/// Sort key: larger means more wanted.
double order_key(std::complex<double> value, SpectrumOrder order);
/// Deterministic tie-break after order_key.
bool wanted_before(std::complex<double> a, std::complex<double> b, SpectrumOrder order);

/// Uniform values in [-1, 1) from a 64-bit generator, platform independent.
Eigen::VectorXd random_vector(std::size_t n, std::uint64_t seed);

}  // namespace netstat::detail
