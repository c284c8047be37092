#ifndef WCLUSTER_BARYCENTER_HPP
#define WCLUSTER_BARYCENTER_HPP

#include <vector>

#include "wcluster/measure.hpp"

namespace wcluster {

/// Point of the unit simplex: w_i >= 0, Σ w_i = 1 within 1e−12.
class WeightVector {
public:
    explicit WeightVector(std::vector<double> weights);
    static WeightVector uniform(std::size_t n);

    std::size_t size() const { return weights_.size(); }
    double operator[](std::size_t i) const { return weights_[i]; }
    const std::vector<double>& values() const { return weights_; }

private:
    std::vector<double> weights_;
};

enum class BarycenterInit { FirstMember, EuclideanMean };

struct BarycenterConfig {
    double tol = 1e-10;
    int max_iter = 500;
    BarycenterInit init = BarycenterInit::EuclideanMean;
};

struct BarycenterResult {
    GaussianMeasure barycenter;
    int iterations = 0;
    /// ‖S_B − Σ w_i (S_B^{1/2} S_i S_B^{1/2})^{1/2}‖_F
    double residual = 0.0;
    /// False when max_iter was reached first (MaxIterExceeded); `barycenter`
    /// then holds the last iterate.
    bool converged = true;
};

/// Σ w_i m_i
Vector barycenter_location(const MeasureCollection& measures, const WeightVector& w);

/// One step of M ↦ M^{-1/2} (Σ w_i (M^{1/2} S_i M^{1/2})^{1/2})² M^{-1/2}.
SpdMatrix fixed_point_step(const SpdMatrix& m, const MeasureCollection& measures, const WeightVector& w);

/// Fixed-point defect ‖S − Σ w_i (S^{1/2} S_i S^{1/2})^{1/2}‖_F.
double fixed_point_residual(const SpdMatrix& s, const MeasureCollection& measures, const WeightVector& w);

/**
 * Wasserstein barycenter of Gaussian measures.
 *
 * The location is the weighted mean of locations. The dispersion iterates
 * fixed_point_step until ‖S_{k+1} − S_k‖_F <= tol · max(1, ‖S_k‖_F).
 * Measures with zero weight are dropped before iterating.
 */
BarycenterResult wasserstein_barycenter(const MeasureCollection& measures, const WeightVector& w,
                                        const BarycenterConfig& config = {});

}  // namespace wcluster

#endif  // WCLUSTER_BARYCENTER_HPP
