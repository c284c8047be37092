#include "wcluster/compactness.hpp"

#include <algorithm>
#include <numeric>

#include "wcluster/error.hpp"
#include "wcluster/parallel.hpp"

namespace wcluster {

namespace {

constexpr double kExcludedTol = 1e-6;

}  // namespace

std::size_t minimal_element(const MeasureCollection& members, const GaussianMeasure& center) {
    std::size_t best = 0;
    double best_dist = w2_distance(members[0], center);
    for (std::size_t i = 1; i < members.size(); ++i) {
        const double d = w2_distance(members[i], center);
        if (d < best_dist) {
            best = i;
            best_dist = d;
        }
    }
    return best;
}

RegistrationSolution reverse_register(const GaussianMeasure& mu_i, const GaussianMeasure& mu_star,
                                      const GaussianMeasure& anchor, const RegistrationOptions& options) {
    const GeodesicSegment path = make_geodesic(mu_i, mu_star);
    if (path.degenerate()) {
        return {1.0, w2_distance(mu_star, anchor), true};
    }
    return register_measure(anchor, path, options);
}

SimilarityIndex similarity_index(double tau_i, double s_i, double sigma_tilde_i, double tau_star,
                                 double sigma_tilde_star, bool is_minimal) {
    if (is_minimal) {
        return {1.0, false};
    }
    bool floored = false;
    if (tau_star < kEpsTau) {
        tau_star = kEpsTau;
        floored = true;
    }
    double ratio = 1.0;
    if (sigma_tilde_i <= kEpsSigma && sigma_tilde_star <= kEpsSigma) {
        floored = true;
    } else {
        if (sigma_tilde_i < kEpsSigma) {
            sigma_tilde_i = kEpsSigma;
            floored = true;
        }
        if (sigma_tilde_star < kEpsSigma) {
            sigma_tilde_star = kEpsSigma;
            floored = true;
        }
        ratio = sigma_tilde_star / sigma_tilde_i;
    }
    return {(s_i * tau_i / tau_star) * ratio, floored};
}

double gci_per_cluster(std::span<const double> tau_tilde) {
    if (tau_tilde.empty()) {
        throw Error(Errc::EmptyCluster, "GCI of an empty cluster");
    }
    double sum = 0.0;
    for (double v : tau_tilde) {
        sum += std::min(v, 1.0);
    }
    return sum / static_cast<double>(tau_tilde.size());
}

double gci_total(std::span<const std::size_t> cluster_sizes, std::span<const double> cluster_gci, std::size_t n) {
    if (cluster_sizes.size() != cluster_gci.size()) {
        throw Error(Errc::SizeMismatch, "cluster sizes and GCI values differ in length");
    }
    const std::size_t total = std::accumulate(cluster_sizes.begin(), cluster_sizes.end(), std::size_t{0});
    if (total != n || n == 0) {
        throw Error(Errc::SizeMismatch,
                    "cluster sizes sum to " + std::to_string(total) + ", expected " + std::to_string(n));
    }
    double acc = 0.0;
    for (std::size_t k = 0; k < cluster_sizes.size(); ++k) {
        acc += static_cast<double>(cluster_sizes[k]) * cluster_gci[k];
    }
    return acc / static_cast<double>(n);
}

double gci_total(std::span<const ClusterReport> reports, std::size_t n) {
    std::vector<std::size_t> sizes;
    std::vector<double> values;
    for (const auto& r : reports) {
        sizes.push_back(r.records.size());
        values.push_back(r.gci);
    }
    return gci_total(sizes, values, n);
}

CompactnessReport evaluate_clustering(const MeasureCollection& collection, std::span<const std::size_t> assignments,
                                      std::span<const GaussianMeasure> local_barycenters,
                                      const GaussianMeasure& global_barycenter, const RegistrationOptions& options) {
    if (assignments.size() != collection.size()) {
        throw Error(Errc::SizeMismatch, "one assignment per measure is required");
    }
    const std::size_t k_count = local_barycenters.size();
    std::vector<std::vector<std::size_t>> members(k_count);
    for (std::size_t i = 0; i < assignments.size(); ++i) {
        if (assignments[i] >= k_count) {
            throw Error(Errc::OutOfRange, "assignment " + std::to_string(assignments[i]) + " has no barycenter");
        }
        members[assignments[i]].push_back(i);
    }
    for (std::size_t k = 0; k < k_count; ++k) {
        if (members[k].empty()) {
            throw Error(Errc::EmptyCluster, "cluster " + std::to_string(k) + " has no members");
        }
    }

    CompactnessReport report;
    report.clusters.resize(k_count);

    parallel_for(k_count, [&](std::size_t k) {
        const auto& idx = members[k];
        const GaussianMeasure& center = local_barycenters[k];
        const GeodesicSegment gamma = make_geodesic(global_barycenter, center);

        ClusterReport& cluster = report.clusters[k];
        cluster.cluster_id = k;
        cluster.degenerate = gamma.degenerate();
        cluster.records.resize(idx.size());

        // Phase 1: registration on γ_k and the minimal element.
        std::vector<GaussianMeasure> anchors;
        anchors.reserve(idx.size());
        std::size_t star = 0;
        for (std::size_t j = 0; j < idx.size(); ++j) {
            const GaussianMeasure& mu = collection[idx[j]];
            const RegistrationSolution reg = register_measure(mu, gamma, options);
            RegistrationRecord& rec = cluster.records[j];
            rec.measure_index = idx[j];
            rec.tau = reg.tau;
            rec.sigma_tilde = reg.dist;
            rec.sigma = w2_distance(mu, center);
            anchors.push_back(gamma.degenerate() ? gamma.source() : gamma.point_at(reg.tau));
            if (rec.sigma < cluster.records[star].sigma) {
                star = j;
            }
        }
        cluster.minimal_index = idx[star];
        const RegistrationRecord& star_rec = cluster.records[star];
        const GaussianMeasure& mu_star = collection[idx[star]];

        // Phase 2: reverse registration and the similarity index.
        std::vector<double> indices(idx.size());
        for (std::size_t j = 0; j < idx.size(); ++j) {
            RegistrationRecord& rec = cluster.records[j];
            const bool is_star = (j == star);
            rec.s = is_star ? 1.0 : reverse_register(collection[idx[j]], mu_star, anchors[j], options).tau;
            const SimilarityIndex sim =
                similarity_index(rec.tau, rec.s, rec.sigma_tilde, star_rec.tau, star_rec.sigma_tilde, is_star);
            rec.tau_tilde_raw = sim.value;
            rec.tau_tilde = std::min(sim.value, 1.0);
            rec.floored = sim.floored;
            rec.excluded_case = rec.tau > 1.0 - kExcludedTol && rec.s < kExcludedTol;
            indices[j] = rec.tau_tilde;
        }
        cluster.gci = gci_per_cluster(indices);
    });

    for (const auto& c : report.clusters) {
        report.degenerate = report.degenerate || c.degenerate;
    }
    report.gci_total = gci_total(report.clusters, collection.size());
    return report;
}

}  // namespace wcluster
