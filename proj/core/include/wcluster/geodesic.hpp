#ifndef WCLUSTER_GEODESIC_HPP
#define WCLUSTER_GEODESIC_HPP

#include "wcluster/measure.hpp"

namespace wcluster {

/// Below this W₂ length a segment is treated as a constant curve.
inline constexpr double kDegenerateLength = 1e-12;

/// Optimal map Λ = S_to^{1/2} (S_to^{1/2} S_from S_to^{1/2})^{-1/2} S_to^{1/2}
/// between centered Gaussians, satisfying Λ S_from Λ = S_to.
SpdMatrix transport_map(const SpdMatrix& from, const SpdMatrix& to);
SpdMatrix transport_map(const GaussianMeasure& from, const GaussianMeasure& to);

/**
 * McCann interpolant between two Gaussian measures.
 *
 * γ(t) has location (1−t)m₀ + t m₁ and dispersion A(t) S₀ A(t) with
 * A(t) = (1−t)I + tΛ. It is a constant-speed geodesic in W₂.
 */
class GeodesicSegment {
public:
    const GaussianMeasure& source() const { return source_; }
    const GaussianMeasure& target() const { return target_; }
    const SpdMatrix& map() const { return map_; }
    double length() const { return length_; }
    /// Endpoints coincide (length < kDegenerateLength).
    bool degenerate() const { return length_ < kDegenerateLength; }

    /// Throws Error(OutOfRange) unless 0 <= t <= 1.
    GaussianMeasure point_at(double t) const;

    /// Location and (unvalidated) dispersion of γ(t); no range check.
    std::pair<Vector, Matrix> raw_point(double t) const;

private:
    GeodesicSegment(GaussianMeasure source, GaussianMeasure target, SpdMatrix map, double length)
        : source_(std::move(source)), target_(std::move(target)), map_(std::move(map)), length_(length) {}

    friend GeodesicSegment make_geodesic(const GaussianMeasure& a, const GaussianMeasure& b);

    GaussianMeasure source_;
    GaussianMeasure target_;
    SpdMatrix map_;
    double length_;
};

GeodesicSegment make_geodesic(const GaussianMeasure& a, const GaussianMeasure& b);

inline GaussianMeasure point_at(const GeodesicSegment& g, double t) { return g.point_at(t); }

struct RegistrationOptions {
    /// Dense scan size over [0, 1], endpoints included.
    int grid_points = 257;
    /// Width at which golden-section refinement stops.
    double t_tol = 1e-8;
};

struct RegistrationSolution {
    double tau = 0.0;
    /// W₂(μ, γ(τ))
    double dist = 0.0;
    bool degenerate = false;
};

/**
 * Projects `mu` onto the segment: τ = argmin_{t∈[0,1]} W₂²(μ, γ(t)).
 *
 * Grid scan followed by golden-section search on the cells adjacent to the
 * best grid point. Ties break toward the smaller t. A degenerate segment
 * yields τ = 0 and dist = W₂(μ, source).
 */
RegistrationSolution register_measure(const GaussianMeasure& mu, const GeodesicSegment& g,
                                      const RegistrationOptions& options = {});

}  // namespace wcluster

#endif  // WCLUSTER_GEODESIC_HPP
