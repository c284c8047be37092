#include "wcluster/clustering.hpp"

#include <algorithm>
#include <limits>
#include <numeric>

#include "wcluster/error.hpp"
#include "wcluster/parallel.hpp"

namespace wcluster {

namespace {

void validate(const MeasureCollection& collection, const ClusteringConfig& config) {
    if (config.k < 1) {
        throw Error(Errc::InvalidArgument, "k must be at least 1");
    }
    if (config.k > collection.size()) {
        throw Error(Errc::KTooLarge,
                    "k = " + std::to_string(config.k) + " exceeds n = " + std::to_string(collection.size()));
    }
    if (config.max_iter < 1 || config.restarts < 1 || !(config.center_tol > 0.0)) {
        throw Error(Errc::InvalidArgument, "max_iter and restarts must be >= 1, center_tol > 0");
    }
}

GaussianMeasure cluster_barycenter(const MeasureCollection& collection, std::span<const std::size_t> members,
                                   const BarycenterConfig& config, int* warnings) {
    const MeasureCollection block = collection.subset(members);
    auto result = wasserstein_barycenter(block, WeightVector::uniform(block.size()), config);
    if (!result.converged && warnings != nullptr) {
        ++*warnings;
    }
    return std::move(result.barycenter);
}

std::vector<std::vector<std::size_t>> group(std::span<const std::size_t> assignments, std::size_t k) {
    std::vector<std::vector<std::size_t>> members(k);
    for (std::size_t i = 0; i < assignments.size(); ++i) {
        members[assignments[i]].push_back(i);
    }
    return members;
}

ClusteringResult lloyd(const MeasureCollection& collection, std::vector<GaussianMeasure> centers,
                       const ClusteringConfig& config, const GaussianMeasure& global) {
    ClusteringResult result{.assignments = assign_step(collection, centers),
                            .centers = {},
                            .global_barycenter = global,
                            .inertia = 0.0,
                            .iterations = 0,
                            .converged = false,
                            .inertia_history = {},
                            .barycenter_warnings = 0,
                            .reports = std::nullopt};
    for (int iter = 1; iter <= config.max_iter; ++iter) {
        auto updated =
            update_step(collection, result.assignments, config.k, config.barycenter, &result.barycenter_warnings);
        result.inertia_history.push_back(inertia(collection, result.assignments, updated));

        double movement = 0.0;
        for (std::size_t c = 0; c < config.k; ++c) {
            movement = std::max(movement, w2_distance(centers[c], updated[c]));
        }
        centers = std::move(updated);

        auto reassigned = assign_step(collection, centers);
        const bool stable = (reassigned == result.assignments);
        result.assignments = std::move(reassigned);
        result.iterations = iter;
        if (stable || movement <= config.center_tol) {
            result.converged = true;
            break;
        }
    }
    result.inertia = inertia(collection, result.assignments, centers);
    result.centers = std::move(centers);
    return result;
}

}  // namespace

std::vector<std::size_t> init_center_indices(const MeasureCollection& collection, const ClusteringConfig& config,
                                             Rng& rng) {
    validate(collection, config);
    const std::size_t n = collection.size();
    std::vector<std::size_t> chosen;

    if (config.init == InitStrategy::RandomMembers) {
        std::vector<std::size_t> order(n);
        std::iota(order.begin(), order.end(), std::size_t{0});
        for (std::size_t i = 0; i < config.k; ++i) {
            std::uniform_int_distribution<std::size_t> pick(i, n - 1);
            std::swap(order[i], order[pick(rng)]);
        }
        chosen.assign(order.begin(), order.begin() + static_cast<std::ptrdiff_t>(config.k));
        return chosen;
    }

    const GaussianMeasure global = global_barycenter(collection, config.barycenter);
    chosen.push_back(minimal_element(collection, global));
    std::vector<double> nearest(n, std::numeric_limits<double>::infinity());
    std::vector<bool> taken(n, false);
    taken[chosen.back()] = true;
    while (chosen.size() < config.k) {
        const GaussianMeasure& last = collection[chosen.back()];
        std::size_t best = n;
        double best_value = -1.0;
        for (std::size_t i = 0; i < n; ++i) {
            if (taken[i]) {
                continue;
            }
            nearest[i] = std::min(nearest[i], w2_distance(collection[i], last));
            if (nearest[i] > best_value) {
                best_value = nearest[i];
                best = i;
            }
        }
        taken[best] = true;
        chosen.push_back(best);
    }
    return chosen;
}

std::vector<GaussianMeasure> init_centers(const MeasureCollection& collection, const ClusteringConfig& config,
                                          Rng& rng) {
    std::vector<GaussianMeasure> centers;
    for (auto i : init_center_indices(collection, config, rng)) {
        centers.push_back(collection[i]);
    }
    return centers;
}

std::vector<std::size_t> assign_step(const MeasureCollection& collection, std::span<const GaussianMeasure> centers) {
    if (centers.empty()) {
        throw Error(Errc::InvalidArgument, "assign_step needs at least one center");
    }
    std::vector<std::size_t> assignments(collection.size(), 0);
    parallel_for(collection.size(), [&](std::size_t i) {
        double best = w2_squared(collection[i], centers[0]);
        for (std::size_t c = 1; c < centers.size(); ++c) {
            const double d = w2_squared(collection[i], centers[c]);
            if (d < best) {
                best = d;
                assignments[i] = c;
            }
        }
    });
    return assignments;
}

std::vector<GaussianMeasure> update_step(const MeasureCollection& collection, std::vector<std::size_t>& assignments,
                                         std::size_t k, const BarycenterConfig& config, int* barycenter_warnings) {
    if (assignments.size() != collection.size()) {
        throw Error(Errc::SizeMismatch, "one assignment per measure is required");
    }
    for (auto a : assignments) {
        if (a >= k) {
            throw Error(Errc::OutOfRange, "cluster id " + std::to_string(a) + " out of range");
        }
    }
    if (k > collection.size()) {
        throw Error(Errc::KTooLarge, "more clusters than measures");
    }

    auto members = group(assignments, k);
    std::vector<std::optional<GaussianMeasure>> centers(k);
    std::vector<int> warnings(k, 0);
    parallel_for(k, [&](std::size_t c) {
        if (!members[c].empty()) {
            centers[c] = cluster_barycenter(collection, members[c], config, &warnings[c]);
        }
    });

    for (std::size_t c = 0; c < k; ++c) {
        if (!members[c].empty()) {
            continue;
        }
        std::size_t donor_member = collection.size();
        double farthest = -1.0;
        for (std::size_t i = 0; i < collection.size(); ++i) {
            const std::size_t owner = assignments[i];
            if (members[owner].size() < 2) {
                continue;
            }
            const double d = w2_distance(collection[i], *centers[owner]);
            if (d > farthest) {
                farthest = d;
                donor_member = i;
            }
        }
        const std::size_t donor = assignments[donor_member];
        assignments[donor_member] = c;
        members = group(assignments, k);
        centers[c] = collection[donor_member];
        centers[donor] = cluster_barycenter(collection, members[donor], config, &warnings[donor]);
    }

    if (barycenter_warnings != nullptr) {
        *barycenter_warnings += std::accumulate(warnings.begin(), warnings.end(), 0);
    }
    std::vector<GaussianMeasure> out;
    out.reserve(k);
    for (auto& c : centers) {
        out.push_back(std::move(*c));
    }
    return out;
}

GaussianMeasure global_barycenter(const MeasureCollection& collection, const BarycenterConfig& config) {
    return wasserstein_barycenter(collection, WeightVector::uniform(collection.size()), config).barycenter;
}

double inertia(const MeasureCollection& collection, std::span<const std::size_t> assignments,
               std::span<const GaussianMeasure> centers) {
    double total = 0.0;
    for (std::size_t i = 0; i < collection.size(); ++i) {
        total += w2_squared(collection[i], centers[assignments[i]]);
    }
    return total;
}

ClusteringResult kmeans_from(const MeasureCollection& collection, std::vector<GaussianMeasure> initial_centers,
                             const ClusteringConfig& config) {
    validate(collection, config);
    if (initial_centers.size() != config.k) {
        throw Error(Errc::SizeMismatch, "expected " + std::to_string(config.k) + " initial centers");
    }
    const GaussianMeasure global = global_barycenter(collection, config.barycenter);
    auto result = lloyd(collection, std::move(initial_centers), config, global);
    if (config.reports) {
        result.reports = evaluate_clustering(collection, result.assignments, result.centers, global,
                                             config.registration);
    }
    return result;
}

ClusteringResult kmeans(const MeasureCollection& collection, const ClusteringConfig& config) {
    validate(collection, config);
    const GaussianMeasure global = global_barycenter(collection, config.barycenter);
    Rng rng(config.seed);
    const int runs = (config.init == InitStrategy::FarthestFirst) ? 1 : config.restarts;

    std::optional<ClusteringResult> best;
    for (int r = 0; r < runs; ++r) {
        auto run = lloyd(collection, init_centers(collection, config, rng), config, global);
        if (!best || run.inertia < best->inertia) {
            best = std::move(run);
        }
    }
    if (config.reports) {
        best->reports = evaluate_clustering(collection, best->assignments, best->centers, global,
                                            config.registration);
    }
    return std::move(*best);
}

}  // namespace wcluster
