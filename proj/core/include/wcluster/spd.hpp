#ifndef WCLUSTER_SPD_HPP
#define WCLUSTER_SPD_HPP

#include <Eigen/Core>

namespace wcluster {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;

/// Relative symmetry tolerance: |a_ij - a_ji| <= kSymTol * max(1, ||A||_F).
inline constexpr double kSymTol = 1e-9;
/// Positive-definiteness floor relative to the largest eigenvalue.
inline constexpr double kPdFloor = 1e-12;

/**
 * Symmetric positive-definite matrix.
 *
 * Construction validates symmetry and positivity through a full symmetric
 * eigendecomposition, which is kept alongside the entries so that square
 * roots and inverse square roots are a pair of products. Instances are
 * immutable.
 */
class SpdMatrix {
public:
    /// Validates `a`; throws Error(NotSpd) or Error(NonFinite).
    static SpdMatrix from(const Matrix& a);
    static SpdMatrix identity(Eigen::Index dim);
    static SpdMatrix diagonal(const Vector& diag);

    Eigen::Index dim() const { return entries_.rows(); }
    const Matrix& matrix() const { return entries_; }
    double operator()(Eigen::Index i, Eigen::Index j) const { return entries_(i, j); }

    /// Eigenvalues in ascending order.
    const Vector& eigenvalues() const { return eigenvalues_; }
    const Matrix& eigenvectors() const { return eigenvectors_; }
    double min_eigenvalue() const { return eigenvalues_(0); }
    double max_eigenvalue() const { return eigenvalues_(eigenvalues_.size() - 1); }
    double trace() const { return entries_.trace(); }

    /// Q f(Λ) Qᵀ for a scalar function applied to the spectrum.
    template <typename F>
    Matrix spectral_apply(F&& f) const {
        Vector mapped = eigenvalues_.unaryExpr(std::forward<F>(f));
        return eigenvectors_ * mapped.asDiagonal() * eigenvectors_.transpose();
    }

private:
    SpdMatrix(Matrix entries, Vector eigenvalues, Matrix eigenvectors)
        : entries_(std::move(entries)),
          eigenvalues_(std::move(eigenvalues)),
          eigenvectors_(std::move(eigenvectors)) {}

    friend SpdMatrix sqrt_spd(const SpdMatrix& a);
    friend SpdMatrix inv_sqrt_spd(const SpdMatrix& a);

    Matrix entries_;
    Vector eigenvalues_;
    Matrix eigenvectors_;
};

/// (A + Aᵀ) / 2
Matrix symmetrize(const Matrix& a);

bool is_symmetric(const Matrix& a, double rel_tol = kSymTol);

/// Principal square root B with B·B = A.
SpdMatrix sqrt_spd(const SpdMatrix& a);

/// A^{-1/2}; throws Error(IllConditioned) when λ_min <= kPdFloor · λ_max.
SpdMatrix inv_sqrt_spd(const SpdMatrix& a);

/**
 * Symmetrizes `a` and, when its smallest eigenvalue does not clear the
 * relative floor, shifts the spectrum by (jitter + |λ_min|).
 * Throws Error(NonFinite) for NaN/Inf entries.
 */
SpdMatrix ensure_spd(const Matrix& a, double jitter);

namespace detail {

/// Square root of a symmetric positive semi-definite matrix; the input is
/// re-symmetrized and eigenvalues below zero (rounding) are clamped.
Matrix sqrt_psd(const Matrix& a);

/// Σ sqrt(λ_i) of a symmetric PSD matrix, clamping negative rounding noise.
double trace_sqrt_psd(const Matrix& a);

struct BuresTerms {
    /// min over orthogonal U of ‖X − Y U‖_F², free of cancellation near zero
    double factored = 0.0;
    /// Tr(XXᵀ) + Tr(YYᵀ) − 2‖YᵀX‖_*, the textbook trace form (may go negative)
    double trace_form = 0.0;
    /// Tr(XXᵀ) + Tr(YYᵀ)
    double total_trace = 0.0;
};

/// Squared Bures distance between A = XXᵀ and B = YYᵀ from arbitrary square
/// factors, via the polar factor of YᵀX.
BuresTerms bures_from_factors(const Matrix& x, const Matrix& y);

}  // namespace detail

}  // namespace wcluster

#endif  // WCLUSTER_SPD_HPP
