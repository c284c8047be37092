#include "wcluster/geodesic.hpp"

#include <cmath>
#include <vector>

#include "wcluster/error.hpp"

namespace wcluster {

namespace {

// t ↦ W₂²(μ, γ(t)) using the factor A(t) S₀^{1/2} of S(t), so no root of
// S(t) is taken per evaluation.
class ProjectionObjective {
public:
    ProjectionObjective(const GaussianMeasure& mu, const GeodesicSegment& g)
        : mu_(mu), g_(g), mu_root_(sqrt_spd(mu.cov()).matrix()), source_root_(sqrt_spd(g.source().cov()).matrix()) {}

    double operator()(double t) const {
        const auto d = mu_.dim();
        const Vector m = (1.0 - t) * g_.source().mean() + t * g_.target().mean();
        const Matrix factor = ((1.0 - t) * Matrix::Identity(d, d) + t * g_.map().matrix()) * source_root_;
        return (mu_.mean() - m).squaredNorm() + detail::bures_from_factors(factor, mu_root_).factored;
    }

private:
    const GaussianMeasure& mu_;
    const GeodesicSegment& g_;
    Matrix mu_root_;
    Matrix source_root_;
};

}  // namespace

SpdMatrix transport_map(const SpdMatrix& from, const SpdMatrix& to) {
    if (from.dim() != to.dim()) {
        throw Error(Errc::DimMismatch, "transport_map between dimensions " + std::to_string(from.dim()) + " and " +
                                           std::to_string(to.dim()));
    }
    const SpdMatrix to_root = sqrt_spd(to);
    const SpdMatrix inner = SpdMatrix::from(symmetrize(to_root.matrix() * from.matrix() * to_root.matrix()));
    const SpdMatrix inner_inv_root = inv_sqrt_spd(inner);
    return SpdMatrix::from(symmetrize(to_root.matrix() * inner_inv_root.matrix() * to_root.matrix()));
}

SpdMatrix transport_map(const GaussianMeasure& from, const GaussianMeasure& to) {
    return transport_map(from.cov(), to.cov());
}

GeodesicSegment make_geodesic(const GaussianMeasure& a, const GaussianMeasure& b) {
    SpdMatrix map = transport_map(a, b);
    const double length = w2_distance(a, b);
    return GeodesicSegment(a, b, std::move(map), length);
}

std::pair<Vector, Matrix> GeodesicSegment::raw_point(double t) const {
    const auto d = source_.dim();
    Vector m = (1.0 - t) * source_.mean() + t * target_.mean();
    Matrix a = (1.0 - t) * Matrix::Identity(d, d) + t * map_.matrix();
    Matrix s = symmetrize(a * source_.cov().matrix() * a);
    return {std::move(m), std::move(s)};
}

GaussianMeasure GeodesicSegment::point_at(double t) const {
    if (!(t >= 0.0 && t <= 1.0)) {
        throw Error(Errc::OutOfRange, "geodesic parameter " + std::to_string(t) + " outside [0, 1]");
    }
    if (t == 0.0) {
        return source_;
    }
    if (t == 1.0) {
        return target_;
    }
    auto [m, s] = raw_point(t);
    return GaussianMeasure(std::move(m), SpdMatrix::from(s));
}

RegistrationSolution register_measure(const GaussianMeasure& mu, const GeodesicSegment& g,
                                      const RegistrationOptions& options) {
    if (mu.dim() != g.source().dim()) {
        throw Error(Errc::DimMismatch, "measure and geodesic dimensions differ");
    }
    if (g.degenerate()) {
        return {0.0, w2_distance(mu, g.source()), true};
    }
    if (options.grid_points < 2 || !(options.t_tol > 0.0)) {
        throw Error(Errc::InvalidArgument, "registration needs >= 2 grid points and a positive tolerance");
    }

    const ProjectionObjective f(mu, g);
    const int n = options.grid_points;
    const double step = 1.0 / static_cast<double>(n - 1);

    int best = 0;
    double best_value = f(0.0);
    for (int j = 1; j < n; ++j) {
        const double t = (j == n - 1) ? 1.0 : j * step;
        const double value = f(t);
        if (value < best_value) {
            best = j;
            best_value = value;
        }
    }
    double best_t = (best == n - 1) ? 1.0 : best * step;

    // Golden-section refinement on [t_{j-1}, t_{j+1}].
    constexpr double kInvPhi = 0.6180339887498949;
    double lo = std::max(0.0, (best - 1) * step);
    double hi = std::min(1.0, (best + 1) * step);
    double x1 = hi - kInvPhi * (hi - lo);
    double x2 = lo + kInvPhi * (hi - lo);
    double f1 = f(x1);
    double f2 = f(x2);
    while (hi - lo > options.t_tol) {
        if (f1 <= f2) {
            hi = x2;
            x2 = x1;
            f2 = f1;
            x1 = hi - kInvPhi * (hi - lo);
            f1 = f(x1);
        } else {
            lo = x1;
            x1 = x2;
            f1 = f2;
            x2 = lo + kInvPhi * (hi - lo);
            f2 = f(x2);
        }
    }
    const double refined_t = (f1 <= f2) ? x1 : x2;
    const double refined_value = std::min(f1, f2);
    if (refined_value < best_value) {
        best_t = refined_t;
    }

    return {best_t, w2_distance(mu, g.point_at(best_t)), false};
}

}  // namespace wcluster
