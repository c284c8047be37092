#ifndef WCLUSTER_CLUSTERING_HPP
#define WCLUSTER_CLUSTERING_HPP

#include <cstdint>
#include <optional>
#include <random>
#include <vector>

#include "wcluster/barycenter.hpp"
#include "wcluster/compactness.hpp"
#include "wcluster/measure.hpp"

namespace wcluster {

enum class InitStrategy { RandomMembers, FarthestFirst };

struct ClusteringConfig {
    std::size_t k = 2;
    InitStrategy init = InitStrategy::RandomMembers;
    std::uint64_t seed = 0;
    int max_iter = 100;
    /// Stop once every center moves less than this (W₂).
    double center_tol = 1e-8;
    int restarts = 1;
    /// Attach compactness reports (GCI) to the result.
    bool reports = false;
    BarycenterConfig barycenter{};
    RegistrationOptions registration{};
};

struct ClusteringResult {
    std::vector<std::size_t> assignments;
    std::vector<GaussianMeasure> centers;
    GaussianMeasure global_barycenter;
    /// Σ_i W₂²(μ_i, center of its cluster)
    double inertia = 0.0;
    int iterations = 0;
    bool converged = false;
    /// Inertia after each (assign, update) pass of the winning restart.
    std::vector<double> inertia_history;
    /// Barycenter solves that hit their iteration cap.
    int barycenter_warnings = 0;
    std::optional<CompactnessReport> reports;
};

using Rng = std::mt19937_64;

/**
 * Initial centers drawn from the collection.
 *
 * RandomMembers picks k distinct members using `rng`. FarthestFirst starts
 * from the member closest to the global barycenter and greedily adds the
 * member whose nearest chosen center is farthest. Throws Error(KTooLarge)
 * when k exceeds the collection size.
 */
std::vector<GaussianMeasure> init_centers(const MeasureCollection& collection, const ClusteringConfig& config,
                                          Rng& rng);

/// Member indices chosen by init_centers, in selection order.
std::vector<std::size_t> init_center_indices(const MeasureCollection& collection, const ClusteringConfig& config,
                                             Rng& rng);

/// Nearest center by W₂²; ties go to the smaller cluster id.
std::vector<std::size_t> assign_step(const MeasureCollection& collection, std::span<const GaussianMeasure> centers);

/**
 * Equal-weight barycenter of each cluster.
 *
 * An empty cluster is reseeded with the member farthest from its own
 * cluster's barycenter (taken from clusters with at least two members);
 * `assignments` is updated to reflect the move.
 */
std::vector<GaussianMeasure> update_step(const MeasureCollection& collection, std::vector<std::size_t>& assignments,
                                         std::size_t k, const BarycenterConfig& config = {},
                                         int* barycenter_warnings = nullptr);

/// Equal-weight barycenter of the whole collection.
GaussianMeasure global_barycenter(const MeasureCollection& collection, const BarycenterConfig& config = {});

/// Σ_i W₂²(μ_i, centers[assignments[i]])
double inertia(const MeasureCollection& collection, std::span<const std::size_t> assignments,
               std::span<const GaussianMeasure> centers);

/// Lloyd iterations from the given centers (one run, no restarts).
ClusteringResult kmeans_from(const MeasureCollection& collection, std::vector<GaussianMeasure> initial_centers,
                             const ClusteringConfig& config);

/// Wasserstein K-means with restarts; the run with the lowest inertia wins
/// (earliest restart on ties).
ClusteringResult kmeans(const MeasureCollection& collection, const ClusteringConfig& config);

}  // namespace wcluster

#endif  // WCLUSTER_CLUSTERING_HPP
