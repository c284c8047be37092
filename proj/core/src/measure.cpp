#include "wcluster/measure.hpp"

#include <algorithm>
#include <cmath>
#include <set>

#include "wcluster/error.hpp"

namespace wcluster {

namespace {

void require_same_dim(Eigen::Index a, Eigen::Index b) {
    if (a != b) {
        throw Error(Errc::DimMismatch, "dimension " + std::to_string(a) + " vs " + std::to_string(b));
    }
}

constexpr double kTraceClampRel = 1e-8;

}  // namespace

GaussianMeasure::GaussianMeasure(Vector mean, SpdMatrix cov) : mean_(std::move(mean)), cov_(std::move(cov)) {
    require_same_dim(mean_.size(), cov_.dim());
    if (!mean_.allFinite()) {
        throw Error(Errc::NonFinite, "location has non-finite entries");
    }
}

GaussianMeasure GaussianMeasure::centered(SpdMatrix cov) {
    Vector zero = Vector::Zero(cov.dim());
    return GaussianMeasure(std::move(zero), std::move(cov));
}

bool approx_equal(const GaussianMeasure& a, const GaussianMeasure& b, double rel_tol) {
    if (a.dim() != b.dim()) {
        return false;
    }
    const double scale = std::max({a.mean().cwiseAbs().maxCoeff(), b.mean().cwiseAbs().maxCoeff(),
                                   a.cov().matrix().cwiseAbs().maxCoeff(), b.cov().matrix().cwiseAbs().maxCoeff()});
    const double bound = rel_tol * scale;
    return (a.mean() - b.mean()).cwiseAbs().maxCoeff() <= bound &&
           (a.cov().matrix() - b.cov().matrix()).cwiseAbs().maxCoeff() <= bound;
}

MeasureCollection::MeasureCollection(std::vector<GaussianMeasure> measures, std::vector<std::string> labels)
    : measures_(std::move(measures)), labels_(std::move(labels)) {
    if (measures_.empty()) {
        throw Error(Errc::InvalidArgument, "measure collection must be non-empty");
    }
    const auto d = measures_.front().dim();
    for (const auto& m : measures_) {
        require_same_dim(d, m.dim());
    }
    if (!labels_.empty()) {
        if (labels_.size() != measures_.size()) {
            throw Error(Errc::SizeMismatch, "labels and measures differ in length");
        }
        std::set<std::string> seen(labels_.begin(), labels_.end());
        if (seen.size() != labels_.size()) {
            throw Error(Errc::InvalidArgument, "labels must be unique");
        }
    }
}

std::string MeasureCollection::label(std::size_t i) const {
    return labels_.empty() ? "m" + std::to_string(i) : labels_[i];
}

MeasureCollection MeasureCollection::subset(std::span<const std::size_t> indices) const {
    std::vector<GaussianMeasure> picked;
    std::vector<std::string> picked_labels;
    picked.reserve(indices.size());
    for (auto i : indices) {
        picked.push_back(measures_.at(i));
        if (!labels_.empty()) {
            picked_labels.push_back(labels_[i]);
        }
    }
    return MeasureCollection(std::move(picked), std::move(picked_labels));
}

double bures_trace_term(const SpdMatrix& a, const SpdMatrix& b) {
    require_same_dim(a.dim(), b.dim());
    if (approx_equal(GaussianMeasure::centered(a), GaussianMeasure::centered(b))) {
        return 0.0;
    }
    const auto terms = detail::bures_from_factors(sqrt_spd(a).matrix(), sqrt_spd(b).matrix());
    if (-terms.trace_form > kTraceClampRel * terms.total_trace) {
        throw Error(Errc::NumericalBreakdown,
                    "Bures trace term " + std::to_string(terms.trace_form) + " is negative beyond rounding");
    }
    return terms.factored;
}

double w2_squared(const GaussianMeasure& a, const GaussianMeasure& b) {
    require_same_dim(a.dim(), b.dim());
    // Equal measures are exactly zero apart, not a rounding residue away.
    if (approx_equal(a, b)) {
        return 0.0;
    }
    return (a.mean() - b.mean()).squaredNorm() + bures_trace_term(a.cov(), b.cov());
}

double w2_distance(const GaussianMeasure& a, const GaussianMeasure& b) { return std::sqrt(w2_squared(a, b)); }

double bures_distance(const SpdMatrix& a, const SpdMatrix& b) { return std::sqrt(bures_trace_term(a, b)); }

}  // namespace wcluster
