#ifndef WCLUSTER_MEASURE_HPP
#define WCLUSTER_MEASURE_HPP

#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "wcluster/spd.hpp"

namespace wcluster {

/// Location-scatter (Gaussian) measure N(mean, cov).
class GaussianMeasure {
public:
    /// Throws Error(DimMismatch) if mean and cov sizes disagree.
    GaussianMeasure(Vector mean, SpdMatrix cov);

    /// Zero-location measure; the isometric image of an SPD matrix.
    static GaussianMeasure centered(SpdMatrix cov);

    Eigen::Index dim() const { return mean_.size(); }
    const Vector& mean() const { return mean_; }
    const SpdMatrix& cov() const { return cov_; }

private:
    Vector mean_;
    SpdMatrix cov_;
};

/// Componentwise comparison of locations and dispersions, relative to the
/// largest entry magnitude of either measure.
bool approx_equal(const GaussianMeasure& a, const GaussianMeasure& b, double rel_tol = 1e-12);

/// Non-empty, uniform-dimension list of measures with optional unique labels.
class MeasureCollection {
public:
    explicit MeasureCollection(std::vector<GaussianMeasure> measures, std::vector<std::string> labels = {});

    std::size_t size() const { return measures_.size(); }
    Eigen::Index dim() const { return measures_.front().dim(); }
    const GaussianMeasure& operator[](std::size_t i) const { return measures_[i]; }
    const std::vector<GaussianMeasure>& measures() const { return measures_; }

    bool has_labels() const { return !labels_.empty(); }
    const std::vector<std::string>& labels() const { return labels_; }
    /// Stored label, or "m<i>" when the collection is unlabeled.
    std::string label(std::size_t i) const;

    /// Members at `indices`, in the given order, carrying their labels.
    MeasureCollection subset(std::span<const std::size_t> indices) const;

    auto begin() const { return measures_.begin(); }
    auto end() const { return measures_.end(); }

private:
    std::vector<GaussianMeasure> measures_;
    std::vector<std::string> labels_;
};

/// Tr(A + B − 2 (A^{1/2} B A^{1/2})^{1/2}), evaluated as min_U ‖A^{1/2} − B^{1/2} U‖_F²
/// so the result is non-negative and accurate near zero. Raises
/// Error(NumericalBreakdown) when the trace form is negative by more than
/// 1e−8·Tr(A + B).
double bures_trace_term(const SpdMatrix& a, const SpdMatrix& b);

/// Squared quadratic Wasserstein distance between two Gaussian measures:
/// ‖m_a − m_b‖² + bures_trace_term(S_a, S_b).
double w2_squared(const GaussianMeasure& a, const GaussianMeasure& b);

double w2_distance(const GaussianMeasure& a, const GaussianMeasure& b);

/// Bures–Wasserstein distance between SPD matrices (zero locations).
double bures_distance(const SpdMatrix& a, const SpdMatrix& b);

}  // namespace wcluster

#endif  // WCLUSTER_MEASURE_HPP
