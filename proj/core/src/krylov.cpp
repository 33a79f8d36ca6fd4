#include "krylov.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <type_traits>

#include <Eigen/Eigenvalues>

#include "netstat/error.hpp"

namespace netstat::detail {

namespace {

using cd = std::complex<double>;

template <class Scalar>
class Engine {
public:
    using Vec = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;
    using Mat = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;

    struct Run {
        std::vector<cd> values;
        Mat basis;  // n x k Schur vectors
        Mat schur;  // k x k upper triangular (diagonal when symmetric)
        std::vector<double> estimates;
        bool converged = false;
    };

    Engine(const KrylovProblem& problem, SpectrumOrder order, const KrylovSettings& settings)
        : problem_(problem), order_(order), settings_(settings) {
        scratch_in_.resize(static_cast<Eigen::Index>(problem.n));
        scratch_out_.resize(static_cast<Eigen::Index>(problem.n));
    }

    std::size_t matvecs() const { return matvecs_; }

    void apply(const Vec& x, Vec& y, const Mat* lock) {
        y.resize(x.size());
        if constexpr (std::is_same_v<Scalar, double>) {
            problem_.apply(x.data(), y.data());
        } else {
            scratch_in_ = x.real();
            problem_.apply(scratch_in_.data(), scratch_out_.data());
            y.real() = scratch_out_;
            scratch_in_ = x.imag();
            problem_.apply(scratch_in_.data(), scratch_out_.data());
            y.imag() = scratch_out_;
        }
        ++matvecs_;
        if (lock) project(y, *lock);
    }

    static void project(Vec& y, const Mat& lock) {
        if (lock.cols() == 0) return;
        for (int pass = 0; pass < 2; ++pass) y -= lock * (lock.adjoint() * y);
    }

    /// Classical Gram-Schmidt with a second pass when the first one cancels
    /// most of w.
    static void orthogonalize(Vec& w, const Mat& V, Eigen::Index cols, Vec& h, const Mat* lock) {
        auto Vc = V.leftCols(cols);
        const double before = w.norm();
        h = Vc.adjoint() * w;
        w.noalias() -= Vc * h;
        if (w.norm() < 0.7071 * before) {
            Vec h2 = Vc.adjoint() * w;
            w.noalias() -= Vc * h2;
            h += h2;
        }
        if (lock) project(w, *lock);
    }

    /// Schur form H = U T U^* with wanted eigenvalues first.
    void schur_sorted(const Mat& H, Mat& T, Mat& U) const {
        const Eigen::Index m = H.rows();
        if constexpr (std::is_same_v<Scalar, double>) {
            Mat sym = (H + H.transpose()) * 0.5;
            Eigen::SelfAdjointEigenSolver<Mat> es(sym);
            const auto& theta = es.eigenvalues();
            std::vector<Eigen::Index> perm(static_cast<std::size_t>(m));
            std::iota(perm.begin(), perm.end(), 0);
            std::stable_sort(perm.begin(), perm.end(), [&](Eigen::Index a, Eigen::Index b) {
                return wanted_before(theta(a), theta(b), order_);
            });
            T = Mat::Zero(m, m);
            U.resize(m, m);
            for (Eigen::Index i = 0; i < m; ++i) {
                T(i, i) = theta(perm[static_cast<std::size_t>(i)]);
                U.col(i) = es.eigenvectors().col(perm[static_cast<std::size_t>(i)]);
            }
        } else {
            Eigen::ComplexSchur<Mat> cs(H);
            T = cs.matrixT();
            U = cs.matrixU();
            for (Eigen::Index i = 1; i < m; ++i)
                for (Eigen::Index j = i; j > 0 && wanted_before(T(j, j), T(j - 1, j - 1), order_); --j)
                    swap_adjacent(T, U, j - 1);
        }
    }

    /// Exchanges diagonal entries i and i+1 of the upper triangular T by a unitary rotation.
    static void swap_adjacent(Mat& T, Mat& U, Eigen::Index i) {
        const cd a = T(i, i);
        const cd b = T(i, i + 1);
        const cd d = T(i + 1, i + 1);
        cd x1 = b;
        cd x2 = d - a;
        const double nx = std::hypot(std::abs(x1), std::abs(x2));
        if (nx == 0.0) return;
        x1 /= nx;
        x2 /= nx;
        Eigen::Matrix2cd G;
        G << x1, -std::conj(x2), x2, std::conj(x1);
        const Eigen::Index n = T.rows();
        T.middleCols(i, 2) = (T.middleCols(i, 2) * G).eval();
        T.middleRows(i, 2) = (G.adjoint() * T.middleRows(i, 2)).eval();
        U.middleCols(i, 2) = (U.middleCols(i, 2) * G).eval();
        T(i + 1, i) = 0.0;
        (void)n;
    }

    Vec start_vector(std::uint64_t seed, const Mat* lock) const {
        for (std::uint64_t attempt = 0; attempt < 8; ++attempt) {
            Vec v = random_vector(problem_.n, seed + attempt * 0x51ed27ULL).template cast<Scalar>();
            if (lock) project(v, *lock);
            const double nv = v.norm();
            if (nv > 1e-8) return v / nv;
        }
        return Vec::Zero(static_cast<Eigen::Index>(problem_.n));
    }

    /// `max_restarts` of 0 uses the configured budget.
    Run run(std::size_t k, const Mat* lock, std::uint64_t seed, std::size_t max_restarts = 0) {
        const auto n = static_cast<Eigen::Index>(problem_.n);
        const Eigen::Index locked = lock ? lock->cols() : 0;
        const Eigen::Index avail = n - locked;
        const auto kk = static_cast<Eigen::Index>(k);
        const Eigen::Index p = std::min<Eigen::Index>(avail, std::max<Eigen::Index>(2 * kk + 1, kk + 40));
        const std::size_t budget =
            max_restarts ? max_restarts : (settings_.max_restarts ? settings_.max_restarts : 50 * k);
        const double tol_abs = settings_.tol * problem_.norm;
        const double target = 0.01 * tol_abs;

        Mat V = Mat::Zero(n, p + 1);
        Mat H = Mat::Zero(p + 1, p);
        V.col(0) = start_vector(seed, lock);
        Eigen::Index l = 0;
        std::size_t restarts = 0;
        std::size_t polish = 0;
        Vec w(n);
        Vec h;
        Mat T;
        Mat U;
        while (true) {
            Eigen::Index m = p;
            bool exhausted = false;
            for (Eigen::Index j = l; j < p; ++j) {
                apply(V.col(j), w, lock);
                orthogonalize(w, V, j + 1, h, lock);
                H.col(j).head(j + 1) = h;
                const double beta = w.norm();
                if (beta > 1e-12 * std::max(problem_.norm, h.norm())) {
                    H(j + 1, j) = beta;
                    V.col(j + 1) = w / beta;
                    continue;
                }
                // invariant subspace found; continue with a fresh direction
                H(j + 1, j) = 0.0;
                if (j + 1 == p) {
                    V.col(p).setZero();
                    break;
                }
                bool injected = false;
                for (std::uint64_t attempt = 0; attempt < 3 && !injected; ++attempt) {
                    Vec r = random_vector(problem_.n, seed + 7919 * (static_cast<std::uint64_t>(j) + 1) + attempt)
                                .template cast<Scalar>();
                    if (lock) project(r, *lock);
                    Vec discard;
                    orthogonalize(r, V, j + 1, discard, lock);
                    const double nr = r.norm();
                    if (nr > 1e-6) {
                        V.col(j + 1) = r / nr;
                        injected = true;
                    }
                }
                if (!injected) {
                    m = j + 1;
                    exhausted = true;
                    break;
                }
            }

            schur_sorted(H.topLeftCorner(m, m), T, U);
            Eigen::Matrix<Scalar, 1, Eigen::Dynamic> c = H.row(m).head(m) * U;
            const Eigen::Index want = std::min(kk, m);
            double worst = 0.0;
            for (Eigen::Index i = 0; i < want; ++i) worst = std::max(worst, std::abs(c(i)));
            if (worst <= tol_abs) ++polish;
            const bool done = exhausted || worst <= target || polish > 2 || restarts >= budget || m <= kk;
            if (done) {
                Run out;
                out.converged = exhausted || worst <= tol_abs || m <= kk;
                out.basis = V.leftCols(m) * U.leftCols(want);
                out.schur = T.topLeftCorner(want, want);
                for (Eigen::Index i = 0; i < want; ++i) {
                    out.values.push_back(cd(T(i, i)));
                    out.estimates.push_back(problem_.norm > 0 ? std::abs(c(i)) / problem_.norm : 0.0);
                }
                return out;
            }
            const Eigen::Index keep = std::min<Eigen::Index>(m - 1, kk + (m - kk) / 2);
            Mat kept = V.leftCols(m) * U.leftCols(keep);
            V.leftCols(keep) = kept;
            V.col(keep) = V.col(m);
            H.setZero();
            H.topLeftCorner(keep, keep) = T.topLeftCorner(keep, keep);
            H.row(keep).head(keep) = c.head(keep);
            l = keep;
            ++restarts;
        }
    }

    /// Rayleigh-Ritz on the span of an orthonormal basis.
    Run rayleigh_ritz(const Mat& B, std::size_t k) {
        Mat MB(B.rows(), B.cols());
        Vec y;
        for (Eigen::Index j = 0; j < B.cols(); ++j) {
            apply(B.col(j), y, nullptr);
            MB.col(j) = y;
        }
        Mat C = B.adjoint() * MB;
        Mat T;
        Mat U;
        schur_sorted(C, T, U);
        const auto kk = static_cast<Eigen::Index>(k);
        Run out;
        out.converged = true;
        out.basis = B * U.leftCols(kk);
        out.schur = T.topLeftCorner(kk, kk);
        for (Eigen::Index i = 0; i < kk; ++i) out.values.push_back(cd(T(i, i)));
        return out;
    }

    /// Eigenvectors from the Schur basis and explicit relative residuals.
    void finish(const Run& r, KrylovOutput& out) {
        const Eigen::Index k = r.schur.rows();
        const auto n = static_cast<Eigen::Index>(problem_.n);
        out.values = r.values;
        out.basis = r.basis.template cast<cd>();
        out.vectors.resize(n, k);
        if constexpr (std::is_same_v<Scalar, double>) {
            out.vectors = r.basis.template cast<cd>();
        } else {
            const double eps = std::numeric_limits<double>::epsilon() * std::max(problem_.norm, 1.0);
            for (Eigen::Index i = 0; i < k; ++i) {
                Eigen::VectorXcd y = Eigen::VectorXcd::Zero(k);
                y(i) = 1.0;
                const cd lambda = r.schur(i, i);
                for (Eigen::Index j = i - 1; j >= 0; --j) {
                    cd s = 0.0;
                    for (Eigen::Index t = j + 1; t <= i; ++t) s += r.schur(j, t) * y(t);
                    cd denom = r.schur(j, j) - lambda;
                    if (std::abs(denom) < eps) denom = eps;
                    y(j) = -s / denom;
                }
                Eigen::VectorXcd x = r.basis * y;
                out.vectors.col(i) = x / x.norm();
            }
        }
        out.residuals.assign(static_cast<std::size_t>(k), 0.0);
        Vec x;
        Vec y;
        for (Eigen::Index i = 0; i < k; ++i) {
            if constexpr (std::is_same_v<Scalar, double>) {
                x = out.vectors.col(i).real();
            } else {
                x = out.vectors.col(i);
            }
            apply(x, y, nullptr);
            const double res = (y - Scalar(out.values[static_cast<std::size_t>(i)].real()) * x).norm();
            if constexpr (std::is_same_v<Scalar, double>) {
                out.residuals[static_cast<std::size_t>(i)] = problem_.norm > 0 ? res / problem_.norm : 0.0;
            } else {
                const double cres = (y - out.values[static_cast<std::size_t>(i)] * x).norm();
                out.residuals[static_cast<std::size_t>(i)] = problem_.norm > 0 ? cres / problem_.norm : 0.0;
                (void)res;
            }
        }
        out.matvecs = matvecs_;
    }

    KrylovOutput solve(std::size_t k) {
        Run r = run(k, nullptr, settings_.seed);
        if (!r.converged) throw ConvergenceError("Krylov-Schur iteration did not converge", r.estimates);
        const double margin = 10.0 * settings_.tol * problem_.norm;
        for (std::size_t pass = 1; pass <= k && static_cast<std::size_t>(r.basis.cols()) < problem_.n; ++pass) {
            const Mat locked = r.basis;
            // Symmetric Ritz values never lie beyond the spectrum, so a short
            // unconverged probe settles the common case of nothing missed.
            constexpr bool bounded = std::is_same_v<Scalar, double>;
            Run d = run(1, &locked, settings_.seed + pass, bounded ? kProbeRestarts : 0);
            if (d.values.empty() || (!bounded && !d.converged)) break;
            if (!(order_key(d.values[0], order_) > order_key(r.values.back(), order_) + margin)) break;
            if (!d.converged) {
                d = run(1, &locked, settings_.seed + pass);
                if (!d.converged) break;
            }
            Mat B(locked.rows(), locked.cols() + 1);
            B.leftCols(locked.cols()) = locked;
            Vec extra = d.basis.col(0);
            project(extra, locked);
            B.col(locked.cols()) = extra / extra.norm();
            r = rayleigh_ritz(B, k);
        }
        KrylovOutput out;
        finish(r, out);
        return out;
    }

private:
    static constexpr std::size_t kProbeRestarts = 1;

    const KrylovProblem& problem_;
    SpectrumOrder order_;
    KrylovSettings settings_;
    std::size_t matvecs_ = 0;
    Eigen::VectorXd scratch_in_;
    Eigen::VectorXd scratch_out_;
};

}  // namespace

double order_key(std::complex<double> value, SpectrumOrder order) {
    switch (order) {
        case SpectrumOrder::LargestAbsolute:
        case SpectrumOrder::LargestModulus:
            return std::abs(value);
        case SpectrumOrder::Largest:
            return value.real();
        case SpectrumOrder::Smallest:
            return -value.real();
    }
    return 0.0;
}

bool wanted_before(std::complex<double> a, std::complex<double> b, SpectrumOrder order) {
    const double ka = order_key(a, order);
    const double kb = order_key(b, order);
    if (ka != kb) return ka > kb;
    if (a.real() != b.real()) return a.real() > b.real();
    return a.imag() > b.imag();
}

Eigen::VectorXd random_vector(std::size_t n, std::uint64_t seed) {
    Eigen::VectorXd v(static_cast<Eigen::Index>(n));
    std::uint64_t s = seed;
    for (std::size_t i = 0; i < n; ++i) {
        s += 0x9e3779b97f4a7c15ULL;
        std::uint64_t z = s;
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        z ^= z >> 31;
        v(static_cast<Eigen::Index>(i)) = static_cast<double>(z >> 11) * 0x1p-52 - 1.0;
    }
    return v;
}

KrylovOutput krylov_schur(const KrylovProblem& problem, std::size_t k, SpectrumOrder order,
                          const KrylovSettings& settings) {
    if (k == 0 || k > problem.n) throw UsageError("eigenvalue count must be between 1 and the dimension");
    if (problem.norm == 0.0) {
        KrylovOutput out;
        const auto n = static_cast<Eigen::Index>(problem.n);
        out.values.assign(k, 0.0);
        out.basis = Eigen::MatrixXcd::Identity(n, static_cast<Eigen::Index>(k));
        out.vectors = out.basis;
        out.residuals.assign(k, 0.0);
        return out;
    }
    if (problem.symmetric) {
        Engine<double> engine(problem, order, settings);
        return engine.solve(k);
    }
    Engine<cd> engine(problem, order, settings);
    return engine.solve(k);
}

QuadratureProbe lanczos_quadrature(const KrylovProblem& problem, const Eigen::VectorXd& start, std::size_t steps) {
    const auto n = static_cast<Eigen::Index>(problem.n);
    const auto s = static_cast<Eigen::Index>(std::min<std::size_t>(steps, problem.n));
    Eigen::MatrixXd V = Eigen::MatrixXd::Zero(n, s);
    Eigen::VectorXd alpha = Eigen::VectorXd::Zero(s);
    Eigen::VectorXd beta = Eigen::VectorXd::Zero(s);
    V.col(0) = start / start.norm();
    Eigen::VectorXd w(n);
    Eigen::Index used = s;
    for (Eigen::Index j = 0; j < s; ++j) {
        problem.apply(V.col(j).data(), w.data());
        for (int pass = 0; pass < 2; ++pass) {
            Eigen::VectorXd h = V.leftCols(j + 1).transpose() * w;
            w -= V.leftCols(j + 1) * h;
            if (pass == 0) alpha(j) = h(j);
            else alpha(j) += h(j);
        }
        const double b = w.norm();
        if (j + 1 == s) break;
        if (b <= 1e-12 * std::max(problem.norm, 1e-300)) {
            used = j + 1;
            break;
        }
        beta(j) = b;
        V.col(j + 1) = w / b;
    }
    Eigen::MatrixXd Tm = Eigen::MatrixXd::Zero(used, used);
    for (Eigen::Index j = 0; j < used; ++j) {
        Tm(j, j) = alpha(j);
        if (j + 1 < used) Tm(j, j + 1) = Tm(j + 1, j) = beta(j);
    }
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(Tm);
    QuadratureProbe out;
    for (Eigen::Index i = 0; i < used; ++i) {
        out.nodes.push_back(es.eigenvalues()(i));
        const double y0 = es.eigenvectors()(0, i);
        out.weights.push_back(y0 * y0);
    }
    return out;
}

}  // namespace netstat::detail
