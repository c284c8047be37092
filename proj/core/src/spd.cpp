#include "wcluster/spd.hpp"

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>

#include <algorithm>
#include <cmath>
#include <string>

#include "wcluster/error.hpp"

namespace wcluster {

namespace {

void require_square_finite(const Matrix& a) {
    if (a.rows() != a.cols() || a.rows() == 0) {
        throw Error(Errc::NotSpd, "matrix must be square and non-empty, got " +
                                      std::to_string(a.rows()) + "x" + std::to_string(a.cols()));
    }
    if (!a.allFinite()) {
        throw Error(Errc::NonFinite, "matrix has non-finite entries");
    }
}

Eigen::SelfAdjointEigenSolver<Matrix> decompose(const Matrix& sym) {
    Eigen::SelfAdjointEigenSolver<Matrix> solver(sym, Eigen::ComputeEigenvectors);
    if (solver.info() != Eigen::Success) {
        throw Error(Errc::NumericalBreakdown, "symmetric eigensolver did not converge");
    }
    return solver;
}

}  // namespace

std::string_view to_string(Errc code) noexcept {
    switch (code) {
        case Errc::NotSpd: return "NotSpd";
        case Errc::IllConditioned: return "IllConditioned";
        case Errc::NonFinite: return "NonFinite";
        case Errc::DimMismatch: return "DimMismatch";
        case Errc::NumericalBreakdown: return "NumericalBreakdown";
        case Errc::MaxIterExceeded: return "MaxIterExceeded";
        case Errc::OutOfRange: return "OutOfRange";
        case Errc::InvalidArgument: return "InvalidArgument";
        case Errc::EmptyCluster: return "EmptyCluster";
        case Errc::SizeMismatch: return "SizeMismatch";
        case Errc::KTooLarge: return "KTooLarge";
        case Errc::ParseError: return "ParseError";
        case Errc::SchemaError: return "SchemaError";
        case Errc::TooFewRecords: return "TooFewRecords";
        case Errc::OverlappingPeriods: return "OverlappingPeriods";
        case Errc::Io: return "Io";
    }
    return "Unknown";
}

Matrix symmetrize(const Matrix& a) { return 0.5 * (a + a.transpose()); }

bool is_symmetric(const Matrix& a, double rel_tol) {
    if (a.rows() != a.cols()) {
        return false;
    }
    const double bound = rel_tol * std::max(1.0, a.norm());
    return ((a - a.transpose()).cwiseAbs().maxCoeff() <= bound);
}

SpdMatrix SpdMatrix::from(const Matrix& a) {
    require_square_finite(a);
    if (!is_symmetric(a)) {
        throw Error(Errc::NotSpd, "matrix is not symmetric");
    }
    Matrix sym = symmetrize(a);
    auto solver = decompose(sym);
    const Vector& lambda = solver.eigenvalues();
    if (!(lambda(0) > 0.0)) {
        throw Error(Errc::NotSpd, "smallest eigenvalue " + std::to_string(lambda(0)) + " is not positive");
    }
    return SpdMatrix(std::move(sym), lambda, solver.eigenvectors());
}

SpdMatrix SpdMatrix::identity(Eigen::Index dim) {
    return SpdMatrix(Matrix::Identity(dim, dim), Vector::Ones(dim), Matrix::Identity(dim, dim));
}

SpdMatrix SpdMatrix::diagonal(const Vector& diag) {
    return from(Matrix(diag.asDiagonal()));
}

SpdMatrix sqrt_spd(const SpdMatrix& a) {
    Vector root = a.eigenvalues_.cwiseSqrt();
    Matrix b = symmetrize(a.eigenvectors_ * root.asDiagonal() * a.eigenvectors_.transpose());
    return SpdMatrix(std::move(b), std::move(root), a.eigenvectors_);
}

SpdMatrix inv_sqrt_spd(const SpdMatrix& a) {
    if (a.min_eigenvalue() <= kPdFloor * a.max_eigenvalue()) {
        throw Error(Errc::IllConditioned, "smallest eigenvalue " + std::to_string(a.min_eigenvalue()) +
                                              " below relative floor");
    }
    // Eigenvalues of A^{-1/2} are the reversed reciprocals; keep ascending order.
    const Eigen::Index d = a.dim();
    Vector lambda(d);
    Matrix q(d, d);
    for (Eigen::Index i = 0; i < d; ++i) {
        lambda(i) = 1.0 / std::sqrt(a.eigenvalues_(d - 1 - i));
        q.col(i) = a.eigenvectors_.col(d - 1 - i);
    }
    Matrix b = symmetrize(q * lambda.asDiagonal() * q.transpose());
    return SpdMatrix(std::move(b), std::move(lambda), std::move(q));
}

SpdMatrix ensure_spd(const Matrix& a, double jitter) {
    if (!(jitter > 0.0)) {
        throw Error(Errc::InvalidArgument, "jitter must be positive");
    }
    require_square_finite(a);
    Matrix sym = symmetrize(a);
    auto solver = decompose(sym);
    const Vector& lambda = solver.eigenvalues();
    const double lambda_min = lambda(0);
    const double lambda_max = lambda(lambda.size() - 1);
    if (lambda_min > kPdFloor * std::max(lambda_max, 0.0)) {
        return SpdMatrix::from(sym);
    }
    const double shift = jitter + std::abs(lambda_min);
    sym.diagonal().array() += shift;
    return SpdMatrix::from(sym);
}

namespace detail {

Matrix sqrt_psd(const Matrix& a) {
    auto solver = decompose(symmetrize(a));
    Vector root = solver.eigenvalues().cwiseMax(0.0).cwiseSqrt();
    return symmetrize(solver.eigenvectors() * root.asDiagonal() * solver.eigenvectors().transpose());
}

double trace_sqrt_psd(const Matrix& a) {
    Eigen::SelfAdjointEigenSolver<Matrix> solver(symmetrize(a), Eigen::EigenvaluesOnly);
    if (solver.info() != Eigen::Success) {
        throw Error(Errc::NumericalBreakdown, "symmetric eigensolver did not converge");
    }
    return solver.eigenvalues().cwiseMax(0.0).cwiseSqrt().sum();
}

BuresTerms bures_from_factors(const Matrix& x, const Matrix& y) {
    const Matrix cross = y.transpose() * x;
    Eigen::JacobiSVD<Matrix> svd(cross, Eigen::ComputeFullU | Eigen::ComputeFullV);
    const Matrix polar = svd.matrixU() * svd.matrixV().transpose();
    BuresTerms terms;
    terms.factored = (x - y * polar).squaredNorm();
    terms.total_trace = x.squaredNorm() + y.squaredNorm();
    terms.trace_form = terms.total_trace - 2.0 * svd.singularValues().sum();
    return terms;
}

}  // namespace detail

}  // namespace wcluster
