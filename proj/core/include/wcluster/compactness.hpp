#ifndef WCLUSTER_COMPACTNESS_HPP
#define WCLUSTER_COMPACTNESS_HPP

#include <cstddef>
#include <span>
#include <vector>

#include "wcluster/geodesic.hpp"
#include "wcluster/measure.hpp"

namespace wcluster {

/// Floors guarding the divisions in the similarity index.
inline constexpr double kEpsTau = 1e-9;
inline constexpr double kEpsSigma = 1e-9;

/// Double-registration outcome for one cluster member.
struct RegistrationRecord {
    std::size_t measure_index = 0;  ///< index into the full collection
    double tau = 0.0;               ///< position of the projection on γ_k
    double sigma = 0.0;             ///< W₂ to the cluster center
    double sigma_tilde = 0.0;       ///< W₂ to the projection γ_k(τ)
    double s = 0.0;                 ///< reverse-registration parameter
    double tau_tilde_raw = 0.0;     ///< similarity index before clamping
    double tau_tilde = 0.0;         ///< min(raw, 1)
    bool floored = false;           ///< an eps floor entered the index
    /// τ ≈ 1 together with s ≈ 0; should never be observed.
    bool excluded_case = false;
};

struct ClusterReport {
    std::size_t cluster_id = 0;
    std::size_t minimal_index = 0;  ///< collection index of the member closest to the center
    std::vector<RegistrationRecord> records;
    double gci = 0.0;
    bool degenerate = false;  ///< γ_k has coincident endpoints
};

struct CompactnessReport {
    std::vector<ClusterReport> clusters;
    double gci_total = 0.0;
    bool degenerate = false;  ///< any cluster geodesic was degenerate
};

/// Index of the member closest (W₂) to `center`; ties go to the smaller index.
std::size_t minimal_element(const MeasureCollection& members, const GaussianMeasure& center);

/**
 * Projects `anchor` onto the geodesic from `mu_i` (s = 0) to `mu_star`
 * (s = 1). When the two endpoints coincide the result is s = 1 with
 * dist = W₂(mu_star, anchor).
 */
RegistrationSolution reverse_register(const GaussianMeasure& mu_i, const GaussianMeasure& mu_star,
                                      const GaussianMeasure& anchor, const RegistrationOptions& options = {});

struct SimilarityIndex {
    double value = 0.0;
    bool floored = false;
};

/**
 * (s_i τ_i / τ_*) · (σ̃_* / σ̃_i), unclamped.
 *
 * τ_* and σ̃_i are floored at kEpsTau / kEpsSigma. When both σ̃ values sit
 * below kEpsSigma the distance ratio is 1; otherwise σ̃_* is floored too.
 * Pass `is_minimal` for the cluster's minimal element, which scores exactly 1.
 */
SimilarityIndex similarity_index(double tau_i, double s_i, double sigma_tilde_i, double tau_star,
                                 double sigma_tilde_star, bool is_minimal = false);

/// Mean of min(τ̃, 1) over the cluster; throws Error(EmptyCluster) when empty.
double gci_per_cluster(std::span<const double> tau_tilde);

/// Σ_k (n_k / n) GCI_k; throws Error(SizeMismatch) unless Σ n_k = n.
double gci_total(std::span<const std::size_t> cluster_sizes, std::span<const double> cluster_gci, std::size_t n);
double gci_total(std::span<const ClusterReport> reports, std::size_t n);

/**
 * Full compactness evaluation of a hard partition.
 *
 * For each cluster k, the geodesic γ_k runs from the global barycenter to the
 * local barycenter. Every member is registered on γ_k, the minimal element
 * μ_* is located, each member's anchor γ_k(τ_i) is reverse-registered on the
 * geodesic from the member to μ_*, and the similarity indices are averaged.
 * Clusters are evaluated concurrently.
 */
CompactnessReport evaluate_clustering(const MeasureCollection& collection, std::span<const std::size_t> assignments,
                                      std::span<const GaussianMeasure> local_barycenters,
                                      const GaussianMeasure& global_barycenter,
                                      const RegistrationOptions& options = {});

}  // namespace wcluster

#endif  // WCLUSTER_COMPACTNESS_HPP
