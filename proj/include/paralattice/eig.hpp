#pragma once

/// Extreme eigenvalues of Hermitian Gram matrices.
///
/// Three regimes, picked by problem size:
///   - small: dense solve (Eigen, eigenvalues only);
///   - medium: Lanczos with full reorthogonalization on a stored matrix;
///   - large: Lanczos on a matrix-free operator. Integer frequency sets
///     admit a fast matvec because the Gram entry depends only on the
///     difference of the two points, so G*x is a d-dimensional linear
///     convolution with the kernel K(δ); we evaluate it on a zero-padded
///     grid with FFTs.
///
/// All starts and plans are deterministic: the Lanczos seed is the
/// normalized all-ones vector and FFT plans use estimated (non-measured)
/// planning, so repeated runs produce identical output.

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include <Eigen/Dense>
#include <fftw3.h>

#include "paralattice/errors.hpp"
#include "paralattice/matrix.hpp"

namespace paralattice {

/// Dense eigensolve cap; above it the ladder switches to Lanczos.
inline constexpr std::int64_t kDenseEigCap = 2000;

/// Hermitian matvec as a raw-buffer callback (lets the FFT operator and
/// Eigen-backed matvecs share one Lanczos implementation).
using HermitianApply =
    std::function<void(const std::complex<double>*, std::complex<double>*)>;

/// Smallest 7-smooth integer >= n (a cheap FFT-friendly padded size).
inline std::int64_t next_fast_size(std::int64_t n) {
    if (n < 1) return 1;
    for (std::int64_t m = n;; ++m) {
        std::int64_t t = m;
        for (std::int64_t p : {2, 3, 5, 7})
            while (t % p == 0) t /= p;
        if (t == 1) return m;
    }
}

/// Matrix-free Gram operator for integer point sets.
///
/// Given integer points p_0..p_{n-1} and a kernel K on integer difference
/// vectors, applies y_i = sum_j K(p_i - p_j) x_j. The points are scattered
/// into their bounding box, the box is zero-padded to at least twice its
/// side (so circular convolution equals linear convolution), and each
/// apply costs two FFTs on the padded grid.
class ConvKernelOperator {
  public:
    using Kernel = std::function<std::complex<double>(const long long*)>;

    /// `pts` is row-major n x d. K must satisfy K(-δ) = conj(K(δ)) so the
    /// operator is Hermitian.
    ConvKernelOperator(int dim, const std::vector<long long>& pts, const Kernel& kernel)
        : d_(dim), n_(static_cast<std::int64_t>(pts.size()) / dim) {
        if (d_ < 1 || n_ < 1 || pts.size() != static_cast<std::size_t>(n_) * d_)
            throw OutOfRangeError("ConvKernelOperator: bad point buffer");

        std::vector<long long> lo(static_cast<std::size_t>(d_)), side(static_cast<std::size_t>(d_));
        for (int k = 0; k < d_; ++k) {
            long long mn = pts[static_cast<std::size_t>(k)], mx = mn;
            for (std::int64_t i = 1; i < n_; ++i) {
                const long long v = pts[static_cast<std::size_t>(i) * d_ + k];
                mn = std::min(mn, v);
                mx = std::max(mx, v);
            }
            lo[static_cast<std::size_t>(k)] = mn;
            side[static_cast<std::size_t>(k)] = mx - mn + 1;
        }

        dims_.resize(static_cast<std::size_t>(d_));
        total_ = 1;
        for (int k = 0; k < d_; ++k) {
            const std::int64_t p = next_fast_size(2 * side[static_cast<std::size_t>(k)] - 1);
            dims_[static_cast<std::size_t>(k)] = static_cast<int>(p);
            total_ *= p;
        }
        if (total_ > kGridCap)
            throw TooLargeError("ConvKernelOperator: padded grid of " + std::to_string(total_) +
                                " cells exceeds the cap " + std::to_string(kGridCap));

        std::vector<std::int64_t> stride(static_cast<std::size_t>(d_));
        stride[static_cast<std::size_t>(d_ - 1)] = 1;
        for (int k = d_ - 2; k >= 0; --k)
            stride[static_cast<std::size_t>(k)] =
                stride[static_cast<std::size_t>(k + 1)] * dims_[static_cast<std::size_t>(k + 1)];

        scatter_.resize(static_cast<std::size_t>(n_));
        for (std::int64_t i = 0; i < n_; ++i) {
            std::int64_t flat = 0;
            for (int k = 0; k < d_; ++k)
                flat += (pts[static_cast<std::size_t>(i) * d_ + k] - lo[static_cast<std::size_t>(k)]) *
                        stride[static_cast<std::size_t>(k)];
            scatter_[static_cast<std::size_t>(i)] = flat;
        }

        kernel_hat_ = fftw_alloc_complex(static_cast<std::size_t>(total_));
        work_ = fftw_alloc_complex(static_cast<std::size_t>(total_));
        if (kernel_hat_ == nullptr || work_ == nullptr)
            throw TooLargeError("ConvKernelOperator: grid allocation failed");

        fwd_ = fftw_plan_dft(d_, dims_.data(), work_, work_, FFTW_FORWARD, FFTW_ESTIMATE);
        bwd_ = fftw_plan_dft(d_, dims_.data(), work_, work_, FFTW_BACKWARD, FFTW_ESTIMATE);
        if (fwd_ == nullptr || bwd_ == nullptr)
            throw NonConvergenceError("ConvKernelOperator: FFT planning failed");

        // Kernel on differences δ_k in [-(side_k - 1), side_k - 1], each
        // coordinate stored wrapped (negative δ at index δ + P).
        for (std::int64_t i = 0; i < total_; ++i) kernel_hat_[i][0] = kernel_hat_[i][1] = 0.0;
        std::vector<long long> delta(static_cast<std::size_t>(d_));
        for (int k = 0; k < d_; ++k)
            delta[static_cast<std::size_t>(k)] = -(side[static_cast<std::size_t>(k)] - 1);
        while (true) {
            std::int64_t flat = 0;
            for (int k = 0; k < d_; ++k) {
                const long long p = dims_[static_cast<std::size_t>(k)];
                const long long w = (delta[static_cast<std::size_t>(k)] % p + p) % p;
                flat += w * stride[static_cast<std::size_t>(k)];
            }
            const std::complex<double> v = kernel(delta.data());
            kernel_hat_[flat][0] = v.real();
            kernel_hat_[flat][1] = v.imag();
            int k = d_ - 1;
            while (k >= 0) {
                auto ku = static_cast<std::size_t>(k);
                if (++delta[ku] <= side[ku] - 1) break;
                delta[ku] = -(side[ku] - 1);
                --k;
            }
            if (k < 0) break;
        }

        // Transform the kernel once; fold in the 1/total inverse-FFT
        // normalization so apply() is two transforms plus one multiply.
        fftw_plan kp = fftw_plan_dft(d_, dims_.data(), kernel_hat_, kernel_hat_, FFTW_FORWARD,
                                     FFTW_ESTIMATE);
        if (kp == nullptr) throw NonConvergenceError("ConvKernelOperator: FFT planning failed");
        fftw_execute(kp);
        fftw_destroy_plan(kp);
        const double inv = 1.0 / static_cast<double>(total_);
        for (std::int64_t i = 0; i < total_; ++i) {
            kernel_hat_[i][0] *= inv;
            kernel_hat_[i][1] *= inv;
        }
    }

    ConvKernelOperator(const ConvKernelOperator&) = delete;
    ConvKernelOperator& operator=(const ConvKernelOperator&) = delete;

    ~ConvKernelOperator() {
        fftw_destroy_plan(fwd_);
        fftw_destroy_plan(bwd_);
        fftw_free(kernel_hat_);
        fftw_free(work_);
    }

    [[nodiscard]] std::int64_t size() const { return n_; }

    void apply(const std::complex<double>* x, std::complex<double>* y) const {
        for (std::int64_t i = 0; i < total_; ++i) work_[i][0] = work_[i][1] = 0.0;
        for (std::int64_t i = 0; i < n_; ++i) {
            work_[scatter_[static_cast<std::size_t>(i)]][0] = x[i].real();
            work_[scatter_[static_cast<std::size_t>(i)]][1] = x[i].imag();
        }
        fftw_execute(fwd_);
        for (std::int64_t i = 0; i < total_; ++i) {
            const double ar = work_[i][0], ai = work_[i][1];
            const double br = kernel_hat_[i][0], bi = kernel_hat_[i][1];
            work_[i][0] = ar * br - ai * bi;
            work_[i][1] = ar * bi + ai * br;
        }
        fftw_execute(bwd_);
        for (std::int64_t i = 0; i < n_; ++i)
            y[i] = {work_[scatter_[static_cast<std::size_t>(i)]][0],
                    work_[scatter_[static_cast<std::size_t>(i)]][1]};
    }

    [[nodiscard]] HermitianApply as_apply() const {
        return [this](const std::complex<double>* x, std::complex<double>* y) { apply(x, y); };
    }

    /// Refuse padded grids above ~64M cells (~1 GiB per complex buffer).
    static constexpr std::int64_t kGridCap = std::int64_t{1} << 26;

  private:
    int d_;
    std::int64_t n_;
    std::int64_t total_ = 0;
    std::vector<int> dims_;
    std::vector<std::int64_t> scatter_;
    fftw_complex* kernel_hat_ = nullptr;
    fftw_complex* work_ = nullptr;
    fftw_plan fwd_ = nullptr;
    fftw_plan bwd_ = nullptr;
};

namespace detail {

/// Eigenvalues (and bottom eigenvector rows, when requested) of the
/// Lanczos tridiagonal built from alpha[0..m-1], beta[0..m-2].
struct TridiagExtremes {
    double theta_min = 0.0, theta_max = 0.0;
    double bottom_min = 1.0, bottom_max = 1.0; // |last component| of extreme eigenvectors
    double gap_min = 0.0, gap_max = 0.0;       // Ritz gap from each extreme to its neighbor
};

inline TridiagExtremes tridiag_extremes(const std::vector<double>& alpha,
                                        const std::vector<double>& beta, bool vectors) {
    const auto m = static_cast<Eigen::Index>(alpha.size());
    Eigen::VectorXd diag = Eigen::Map<const Eigen::VectorXd>(alpha.data(), m);
    Eigen::VectorXd sub(m > 0 ? m - 1 : 0);
    for (Eigen::Index i = 0; i + 1 < m; ++i) sub(i) = beta[static_cast<std::size_t>(i)];
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es;
    es.computeFromTridiagonal(diag, sub, vectors ? Eigen::ComputeEigenvectors : Eigen::EigenvaluesOnly);
    if (es.info() != Eigen::Success)
        throw NonConvergenceError("tridiagonal eigensolve failed");
    TridiagExtremes out;
    out.theta_min = es.eigenvalues()(0);
    out.theta_max = es.eigenvalues()(m - 1);
    if (m > 1) {
        out.gap_min = es.eigenvalues()(1) - out.theta_min;
        out.gap_max = out.theta_max - es.eigenvalues()(m - 2);
    }
    if (vectors) {
        out.bottom_min = std::abs(es.eigenvectors()(m - 1, 0));
        out.bottom_max = std::abs(es.eigenvectors()(m - 1, m - 1));
    }
    return out;
}

/// Error estimate for an extreme Ritz value with residual `res`: the raw
/// residual bound, sharpened to res^2 / gap when the Ritz gap supports it
/// (the quadratic bound for well-separated extremes).
inline double ritz_error_estimate(double res, double gap) {
    if (gap > res) return res * res / gap;
    return res;
}

} // namespace detail

/// Extreme eigenvalues by Lanczos with full reorthogonalization.
///
/// Deterministic: starts from the normalized all-ones vector; on exact
/// breakdown (an invariant subspace was captured) it restarts from the
/// next unit vector, orthogonalized against the basis so far, so repeated
/// runs are identical. Converged when both extreme Ritz error estimates
/// (residual beta_m * |s_last|, sharpened to residual^2 / Ritz gap when
/// the gap allows — clustered spectra stall the raw residual long after
/// the Ritz value itself has converged) fall below tol_rel * spread.
/// Throws NonConvergenceError at the iteration cap.
inline std::pair<double, double> lanczos_extreme_eigs(std::int64_t n, const HermitianApply& apply,
                                                      int max_iter = 1000, double tol_rel = 1e-9) {
    if (n < 1) throw OutOfRangeError("lanczos_extreme_eigs: empty operator");
    using Cx = std::complex<double>;
    const int cap = static_cast<int>(std::min<std::int64_t>(max_iter, n));

    Eigen::MatrixXcd v(n, cap + 1);
    v.col(0).setConstant(Cx(1.0 / std::sqrt(static_cast<double>(n)), 0.0));
    std::vector<double> alpha, beta;
    alpha.reserve(static_cast<std::size_t>(cap));
    beta.reserve(static_cast<std::size_t>(cap));

    Eigen::VectorXcd w(n);
    std::int64_t next_unit = 0;
    bool exhausted = false;
    double scale = 0.0;

    for (int j = 0; j < cap; ++j) {
        apply(v.col(j).data(), w.data());
        if (j > 0 && beta[static_cast<std::size_t>(j - 1)] > 0.0)
            w -= beta[static_cast<std::size_t>(j - 1)] * v.col(j - 1);
        const double aj = v.col(j).dot(w).real();
        alpha.push_back(aj);
        w -= aj * v.col(j);
        // Full reorthogonalization, repeated once if the first pass ate
        // most of the norm (the usual "twice is enough" safeguard).
        for (int pass = 0; pass < 2; ++pass) {
            const double before = w.norm();
            w -= v.leftCols(j + 1) * (v.leftCols(j + 1).adjoint() * w).eval();
            if (w.norm() > 0.5 * before) break;
        }
        const double bj = w.norm();
        scale = std::max({scale, std::abs(aj), bj});

        if (j + 1 == cap) break;

        if (bj <= 1e-13 * std::max(1.0, scale)) {
            // Invariant subspace found: deflate by restarting from a fresh
            // deterministic direction (zero coupling keeps the tridiagonal
            // block-structured and the Ritz values exact for this block).
            bool found = false;
            while (next_unit < n && !found) {
                w.setZero();
                w(static_cast<Eigen::Index>(next_unit)) = 1.0;
                ++next_unit;
                for (int pass = 0; pass < 2; ++pass)
                    w -= v.leftCols(j + 1) * (v.leftCols(j + 1).adjoint() * w).eval();
                if (w.norm() > 1e-6) found = true;
            }
            if (!found) {
                exhausted = true; // full space spanned: Ritz values are exact
                break;
            }
            beta.push_back(0.0);
            v.col(j + 1) = w / w.norm();
            continue;
        }

        beta.push_back(bj);
        v.col(j + 1) = w / bj;

        // Convergence test at widening strides: the tridiagonal solve with
        // eigenvectors costs O(m^3), so checking every 10 steps becomes the
        // dominant cost once the basis is large.
        const int stride = (j + 1 < 300) ? 10 : 50;
        if ((j + 1) % stride == 0) {
            const auto ext = detail::tridiag_extremes(alpha, beta, true);
            const double spread =
                std::max({std::abs(ext.theta_min), std::abs(ext.theta_max), 1e-300});
            if (detail::ritz_error_estimate(bj * ext.bottom_min, ext.gap_min) <= tol_rel * spread &&
                detail::ritz_error_estimate(bj * ext.bottom_max, ext.gap_max) <= tol_rel * spread)
                return {ext.theta_min, ext.theta_max};
        }
    }

    const auto ext = detail::tridiag_extremes(alpha, beta, !exhausted);
    if (exhausted || alpha.size() == static_cast<std::size_t>(n))
        return {ext.theta_min, ext.theta_max}; // Krylov space is the full space
    const double spread = std::max({std::abs(ext.theta_min), std::abs(ext.theta_max), 1e-300});
    const double tail = beta.empty() ? 0.0 : beta.back();
    if (detail::ritz_error_estimate(tail * ext.bottom_min, ext.gap_min) <= tol_rel * spread &&
        detail::ritz_error_estimate(tail * ext.bottom_max, ext.gap_max) <= tol_rel * spread)
        return {ext.theta_min, ext.theta_max};
    throw NonConvergenceError("lanczos_extreme_eigs: no convergence after " +
                              std::to_string(alpha.size()) + " iterations");
}

/// Extreme eigenvalues of a stored Hermitian matrix: dense solve up to
/// kDenseEigCap, Lanczos on the stored matvec above it.
inline std::pair<double, double> eig_range(const Eigen::MatrixXcd& g) {
    const Eigen::Index n = g.rows();
    if (n == 0) throw OutOfRangeError("eig_range: empty matrix");
    if (n <= kDenseEigCap) {
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(g, Eigen::EigenvaluesOnly);
        if (es.info() != Eigen::Success) throw NonConvergenceError("eig_range: dense solve failed");
        return {es.eigenvalues()(0), es.eigenvalues()(n - 1)};
    }
    HermitianApply apply = [&g, n](const std::complex<double>* x, std::complex<double>* y) {
        Eigen::Map<const Eigen::VectorXcd> xm(x, n);
        Eigen::Map<Eigen::VectorXcd> ym(y, n);
        ym.noalias() = g * xm;
    };
    return lanczos_extreme_eigs(n, apply);
}

} // namespace paralattice
