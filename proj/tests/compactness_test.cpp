#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <numeric>

#include "oracles.hpp"
#include "wcluster/barycenter.hpp"
#include "wcluster/clustering.hpp"
#include "wcluster/compactness.hpp"
#include "wcluster/error.hpp"

namespace wcluster {
namespace {

using testing::random_measure;
using testing::Rng;

GaussianMeasure point(double x, double y, double eps = 1e-4) {
    return GaussianMeasure(Vector{{x, y}}, SpdMatrix::from(eps * Matrix::Identity(2, 2)));
}

std::vector<GaussianMeasure> local_barycenters(const MeasureCollection& coll, const std::vector<std::size_t>& a,
                                               std::size_t k) {
    std::vector<std::size_t> copy = a;
    return update_step(coll, copy, k);
}

TEST(MinimalElement, Examples) {
    const GaussianMeasure center = point(0, 0);
    EXPECT_EQ(minimal_element(MeasureCollection({point(5, 5)}), center), 0u);
    EXPECT_EQ(minimal_element(MeasureCollection({point(3, 0), point(0, 1), point(0, -2)}), center), 1u);
    EXPECT_EQ(minimal_element(MeasureCollection({point(3, 0), point(0, 1), point(1, 0)}), center), 1u);
}

TEST(ReverseRegister, Examples) {
    Rng rng(71);
    const auto mi = random_measure(rng, 3);
    const auto ms = random_measure(rng, 3, 2.0);
    const auto at_star = reverse_register(mi, ms, ms);
    EXPECT_EQ(at_star.tau, 1.0);
    EXPECT_LE(at_star.dist, 1e-7);
    const auto at_i = reverse_register(mi, ms, mi);
    EXPECT_EQ(at_i.tau, 0.0);
    EXPECT_LE(at_i.dist, 1e-7);
    const auto inner = reverse_register(mi, ms, make_geodesic(mi, ms).point_at(0.6));
    EXPECT_NEAR(inner.tau, 0.6, 1e-5);

    const auto anchor = random_measure(rng, 3);
    const auto same = reverse_register(ms, ms, anchor);
    EXPECT_TRUE(same.degenerate);
    EXPECT_EQ(same.tau, 1.0);
    EXPECT_NEAR(same.dist, w2_distance(ms, anchor), 1e-12);
}

TEST(SimilarityIndex, Examples) {
    EXPECT_EQ(similarity_index(0.3, 0.0, 5.0, 0.9, 0.1, true).value, 1.0);
    EXPECT_NEAR(similarity_index(0.7, 1.0, 0.2, 0.7, 0.2).value, 1.0, 1e-15);
    EXPECT_NEAR(similarity_index(0.4, 0.5, 0.2, 0.8, 0.1).value, 0.125, 1e-15);
}

TEST(SimilarityIndex, Floors) {
    const auto tau_floor = similarity_index(0.5, 1.0, 1.0, 0.0, 1.0);
    EXPECT_TRUE(tau_floor.floored);
    EXPECT_NEAR(tau_floor.value, 0.5 / kEpsTau, 1e-3);

    const auto both_on_path = similarity_index(0.5, 0.8, 0.0, 0.5, 0.0);
    EXPECT_TRUE(both_on_path.floored);
    EXPECT_NEAR(both_on_path.value, 0.8, 1e-15);

    const auto member_on_path = similarity_index(0.5, 0.8, 0.0, 0.5, 0.3);
    EXPECT_TRUE(member_on_path.floored);
    EXPECT_NEAR(member_on_path.value, 0.8 * 0.3 / kEpsSigma, 1e-3);

    const auto star_on_path = similarity_index(0.5, 0.8, 0.3, 0.5, 0.0);
    EXPECT_TRUE(star_on_path.floored);
    EXPECT_NEAR(star_on_path.value, 0.8 * kEpsSigma / 0.3, 1e-20);

    EXPECT_FALSE(similarity_index(0.4, 0.5, 0.2, 0.8, 0.1).floored);
}

TEST(Gci, Examples) {
    const std::vector<double> ones{1.0, 1.0, 1.0};
    EXPECT_EQ(gci_per_cluster(ones), 1.0);
    const std::vector<double> mixed{1.0, 0.5, 0.25, 0.25};
    EXPECT_NEAR(gci_per_cluster(mixed), 0.5, 1e-15);
    const std::vector<double> clamped{1.0, 3.0};
    EXPECT_EQ(gci_per_cluster(clamped), 1.0);
    EXPECT_THROW((void)gci_per_cluster(std::vector<double>{}), Error);

    const std::vector<std::size_t> sizes{3, 1};
    const std::vector<double> gcis{0.8, 0.4};
    EXPECT_NEAR(gci_total(sizes, gcis, 4), 0.7, 1e-15);
    const std::vector<std::size_t> one{5};
    const std::vector<double> g{0.37};
    EXPECT_NEAR(gci_total(one, g, 5), 0.37, 1e-15);
    try {
        (void)gci_total(sizes, gcis, 5);
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.code(), Errc::SizeMismatch);
    }
}

TEST(EvaluateClustering, SingleClusterIsDegenerate) {
    Rng rng(72);
    std::vector<GaussianMeasure> ms;
    for (int i = 0; i < 6; ++i) ms.push_back(random_measure(rng, 3));
    const MeasureCollection coll(ms);
    const std::vector<std::size_t> a(6, 0);
    const auto centers = local_barycenters(coll, a, 1);
    const CompactnessReport r = evaluate_clustering(coll, a, centers, centers[0]);
    ASSERT_EQ(r.clusters.size(), 1u);
    EXPECT_TRUE(r.degenerate);
    EXPECT_TRUE(r.clusters[0].degenerate);
    for (const auto& rec : r.clusters[0].records) EXPECT_EQ(rec.tau, 0.0);
}

TEST(EvaluateClustering, EverySingletonScoresOne) {
    Rng rng(73);
    std::vector<GaussianMeasure> ms;
    for (int i = 0; i < 7; ++i) ms.push_back(random_measure(rng, 2, 3.0));
    const MeasureCollection coll(ms);
    std::vector<std::size_t> a(7);
    std::iota(a.begin(), a.end(), 0);
    const auto centers = local_barycenters(coll, a, 7);
    const CompactnessReport r = evaluate_clustering(coll, a, centers, global_barycenter(coll));
    EXPECT_NEAR(r.gci_total, 1.0, 1e-15);
}

TEST(EvaluateClustering, AllMembersAtCenter) {
    Rng rng(74);
    const auto a0 = random_measure(rng, 2);
    const auto b0 = random_measure(rng, 2, 5.0);
    const MeasureCollection coll({a0, a0, a0, b0, b0});
    const std::vector<std::size_t> a{0, 0, 0, 1, 1};
    const auto centers = local_barycenters(coll, a, 2);
    const CompactnessReport r = evaluate_clustering(coll, a, centers, global_barycenter(coll));
    for (const auto& c : r.clusters) EXPECT_NEAR(c.gci, 1.0, 1e-12);
}

// Dirac-limit oracle: with a shared dispersion every W2 quantity reduces to
// Euclidean geometry, so the whole double registration has a closed form.
struct EuclidRecord {
    double tau, sigma, sigma_tilde, s;
};

double project(const Vector& x, const Vector& from, const Vector& to) {
    const Vector dir = to - from;
    return std::clamp((x - from).dot(dir) / dir.squaredNorm(), 0.0, 1.0);
}

TEST(EvaluateClustering, MatchesEuclideanOracleInDiracLimit) {
    Rng rng(75);
    for (int trial = 0; trial < 10; ++trial) {
        std::vector<Vector> pts;
        std::vector<GaussianMeasure> ms;
        std::vector<std::size_t> a;
        for (int i = 0; i < 12; ++i) {
            const std::size_t c = i < 5 ? 0 : (i < 9 ? 1 : 2);
            Vector base = c == 0 ? Vector{{0.0, 0.0}} : (c == 1 ? Vector{{8.0, 1.0}} : Vector{{3.0, 7.0}});
            pts.push_back(base + testing::gaussian_vector(rng, 2, 1.5));
            ms.push_back(point(pts.back()(0), pts.back()(1)));
            a.push_back(c);
        }
        const MeasureCollection coll(ms);
        std::vector<GaussianMeasure> centers;
        std::vector<Vector> euclid_centers(3, Vector::Zero(2));
        std::vector<double> counts(3, 0.0);
        for (std::size_t i = 0; i < pts.size(); ++i) {
            euclid_centers[a[i]] += pts[i];
            counts[a[i]] += 1;
        }
        Vector global = Vector::Zero(2);
        for (const auto& p : pts) global += p / static_cast<double>(pts.size());
        for (std::size_t c = 0; c < 3; ++c) {
            euclid_centers[c] /= counts[c];
            centers.push_back(point(euclid_centers[c](0), euclid_centers[c](1)));
        }
        const CompactnessReport r = evaluate_clustering(coll, a, centers, point(global(0), global(1)));

        double total = 0.0;
        for (std::size_t c = 0; c < 3; ++c) {
            std::vector<std::size_t> members;
            for (std::size_t i = 0; i < pts.size(); ++i)
                if (a[i] == c) members.push_back(i);
            std::size_t star = members[0];
            for (auto i : members)
                if ((pts[i] - euclid_centers[c]).norm() < (pts[star] - euclid_centers[c]).norm()) star = i;
            auto anchor = [&](std::size_t i) {
                const double t = project(pts[i], global, euclid_centers[c]);
                return Vector(global + t * (euclid_centers[c] - global));
            };
            const double tau_star = project(pts[star], global, euclid_centers[c]);
            const double st_star = (pts[star] - anchor(star)).norm();
            const ClusterReport& rep = r.clusters[c];
            EXPECT_EQ(rep.minimal_index, star);
            double gci = 0.0;
            for (const auto& rec : rep.records) {
                const std::size_t i = rec.measure_index;
                const double tau = project(pts[i], global, euclid_centers[c]);
                const double st = (pts[i] - anchor(i)).norm();
                EXPECT_NEAR(rec.tau, tau, 1e-6);
                EXPECT_NEAR(rec.sigma, (pts[i] - euclid_centers[c]).norm(), 1e-9);
                EXPECT_NEAR(rec.sigma_tilde, st, 1e-6);
                double expected = 1.0;
                if (i != star) {
                    const double s = project(anchor(i), pts[i], pts[star]);
                    EXPECT_NEAR(rec.s, s, 1e-5);
                    expected = std::min(1.0, (s * tau / tau_star) * (st_star / st));
                } else {
                    EXPECT_EQ(rec.tau_tilde, 1.0);
                }
                EXPECT_NEAR(rec.tau_tilde, expected, 1e-4);
                gci += expected;
            }
            gci /= static_cast<double>(members.size());
            EXPECT_NEAR(rep.gci, gci, 1e-4);
            total += gci * static_cast<double>(members.size());
        }
        EXPECT_NEAR(r.gci_total, total / static_cast<double>(pts.size()), 1e-4);
    }
}

TEST(EvaluateClustering, ReportInvariants) {
    Rng rng(76);
    for (int trial = 0; trial < 5; ++trial) {
        std::vector<GaussianMeasure> ms;
        for (int i = 0; i < 10; ++i) ms.push_back(random_measure(rng, 3, i < 5 ? 1.0 : 4.0));
        const MeasureCollection coll(ms);
        ClusteringConfig cfg;
        cfg.k = 3;
        cfg.seed = static_cast<std::uint64_t>(trial);
        cfg.reports = true;
        const ClusteringResult res = kmeans(coll, cfg);
        ASSERT_TRUE(res.reports.has_value());
        const CompactnessReport& r = *res.reports;
        double sum = 0.0;
        for (const auto& c : r.clusters) {
            double best = std::numeric_limits<double>::infinity();
            for (const auto& rec : c.records) best = std::min(best, rec.sigma);
            for (const auto& rec : c.records) {
                EXPECT_GE(rec.sigma, 0.0);
                EXPECT_LE(rec.sigma_tilde, rec.sigma + 1e-9);
                EXPECT_GE(rec.tau, 0.0);
                EXPECT_LE(rec.tau, 1.0);
                EXPECT_GE(rec.s, 0.0);
                EXPECT_LE(rec.s, 1.0);
                EXPECT_GE(rec.tau_tilde_raw, 0.0);
                EXPECT_EQ(rec.tau_tilde, std::min(rec.tau_tilde_raw, 1.0));
                EXPECT_FALSE(rec.excluded_case);
                if (rec.measure_index == c.minimal_index) {
                    EXPECT_EQ(rec.tau_tilde, 1.0);
                    EXPECT_EQ(rec.sigma, best);
                }
                sum += rec.tau_tilde;
            }
        }
        EXPECT_NEAR(r.gci_total, sum / static_cast<double>(coll.size()), 1e-12);
    }
}

TEST(EvaluateClustering, InputValidation) {
    Rng rng(77);
    const MeasureCollection coll({random_measure(rng, 2), random_measure(rng, 2), random_measure(rng, 2)});
    const std::vector<std::size_t> a{0, 0, 1};
    const auto centers = local_barycenters(coll, a, 2);
    const std::vector<std::size_t> short_a{0, 1};
    EXPECT_THROW((void)evaluate_clustering(coll, short_a, centers, coll[0]), Error);
    const std::vector<std::size_t> gap{0, 0, 2};
    std::vector<GaussianMeasure> three = centers;
    three.push_back(coll[0]);
    try {
        (void)evaluate_clustering(coll, gap, three, coll[0]);
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.code(), Errc::EmptyCluster);
    }
}

}  // namespace
}  // namespace wcluster
