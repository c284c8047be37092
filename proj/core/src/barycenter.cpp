#include "wcluster/barycenter.hpp"

#include <algorithm>
#include <cmath>

#include "wcluster/error.hpp"

namespace wcluster {

namespace {

void require_matching(const MeasureCollection& measures, const WeightVector& w) {
    if (measures.size() != w.size()) {
        throw Error(Errc::DimMismatch, "weights (" + std::to_string(w.size()) + ") and measures (" +
                                           std::to_string(measures.size()) + ") differ in length");
    }
}

// Σ w_i (R S_i R)^{1/2} where R is a symmetric root.
Matrix weighted_root_sum(const Matrix& root, const MeasureCollection& measures, const WeightVector& w) {
    const auto d = measures.dim();
    if (root.rows() != d) {
        throw Error(Errc::DimMismatch, "iterate dimension does not match the collection");
    }
    Matrix sum = Matrix::Zero(d, d);
    for (std::size_t i = 0; i < measures.size(); ++i) {
        if (w[i] == 0.0) {
            continue;
        }
        sum += w[i] * detail::sqrt_psd(root * measures[i].cov().matrix() * root);
    }
    return symmetrize(sum);
}

}  // namespace

WeightVector::WeightVector(std::vector<double> weights) : weights_(std::move(weights)) {
    if (weights_.empty()) {
        throw Error(Errc::InvalidArgument, "weight vector must be non-empty");
    }
    double total = 0.0;
    for (double v : weights_) {
        if (!std::isfinite(v) || v < 0.0) {
            throw Error(Errc::InvalidArgument, "weights must be finite and non-negative");
        }
        total += v;
    }
    if (std::abs(total - 1.0) > 1e-12) {
        throw Error(Errc::InvalidArgument, "weights must sum to 1, got " + std::to_string(total));
    }
}

WeightVector WeightVector::uniform(std::size_t n) {
    if (n == 0) {
        throw Error(Errc::InvalidArgument, "weight vector must be non-empty");
    }
    return WeightVector(std::vector<double>(n, 1.0 / static_cast<double>(n)));
}

Vector barycenter_location(const MeasureCollection& measures, const WeightVector& w) {
    require_matching(measures, w);
    Vector m = Vector::Zero(measures.dim());
    for (std::size_t i = 0; i < measures.size(); ++i) {
        m += w[i] * measures[i].mean();
    }
    return m;
}

SpdMatrix fixed_point_step(const SpdMatrix& m, const MeasureCollection& measures, const WeightVector& w) {
    require_matching(measures, w);
    const SpdMatrix root = sqrt_spd(m);
    const SpdMatrix inv_root = inv_sqrt_spd(m);
    const Matrix t = weighted_root_sum(root.matrix(), measures, w);
    return SpdMatrix::from(symmetrize(inv_root.matrix() * t * t * inv_root.matrix()));
}

double fixed_point_residual(const SpdMatrix& s, const MeasureCollection& measures, const WeightVector& w) {
    require_matching(measures, w);
    const SpdMatrix root = sqrt_spd(s);
    return (s.matrix() - weighted_root_sum(root.matrix(), measures, w)).norm();
}

BarycenterResult wasserstein_barycenter(const MeasureCollection& measures, const WeightVector& w,
                                        const BarycenterConfig& config) {
    require_matching(measures, w);
    if (!(config.tol > 0.0) || config.max_iter < 1) {
        throw Error(Errc::InvalidArgument, "barycenter tol must be > 0 and max_iter >= 1");
    }

    std::vector<std::size_t> active;
    std::vector<double> active_weights;
    for (std::size_t i = 0; i < measures.size(); ++i) {
        if (w[i] > 0.0) {
            active.push_back(i);
            active_weights.push_back(w[i]);
        }
    }
    const MeasureCollection support = measures.subset(active);
    if (active.size() < measures.size()) {
        double total = 0.0;
        for (double v : active_weights) total += v;
        for (double& v : active_weights) v /= total;
    }
    const WeightVector support_w(std::move(active_weights));

    Vector location = barycenter_location(support, support_w);

    if (support.size() == 1) {
        return {GaussianMeasure(std::move(location), support[0].cov()), 0, 0.0, true};
    }

    SpdMatrix current = [&] {
        if (config.init == BarycenterInit::FirstMember) {
            return support[0].cov();
        }
        Matrix mean = Matrix::Zero(support.dim(), support.dim());
        for (std::size_t i = 0; i < support.size(); ++i) {
            mean += support_w[i] * support[i].cov().matrix();
        }
        return SpdMatrix::from(symmetrize(mean));
    }();

    int iterations = 0;
    bool converged = false;
    while (iterations < config.max_iter) {
        SpdMatrix next = fixed_point_step(current, support, support_w);
        ++iterations;
        const double change = (next.matrix() - current.matrix()).norm();
        const double scale = std::max(1.0, current.matrix().norm());
        current = std::move(next);
        if (change <= config.tol * scale) {
            converged = true;
            break;
        }
    }

    const double residual = fixed_point_residual(current, support, support_w);
    return {GaussianMeasure(std::move(location), std::move(current)), iterations, residual, converged};
}

}  // namespace wcluster
