#include <gtest/gtest.h>

#include <cmath>

#include "oracles.hpp"
#include "wcluster/barycenter.hpp"
#include "wcluster/error.hpp"
#include "wcluster/geodesic.hpp"

namespace wcluster {
namespace {

using testing::gaussian_1d;
using testing::random_measure;
using testing::Rng;

TEST(TransportMap, Examples) {
    Rng rng(51);
    const SpdMatrix s = testing::random_spd(rng, 4);
    EXPECT_LT((transport_map(s, s).matrix() - Matrix::Identity(4, 4)).norm(), 1e-10);

    EXPECT_NEAR(transport_map(SpdMatrix::identity(1), SpdMatrix::from(Matrix::Constant(1, 1, 4.0)))(0, 0), 2.0, 1e-14);

    const SpdMatrix a = SpdMatrix::diagonal(Vector{{1.0, 4.0}});
    const SpdMatrix b = SpdMatrix::diagonal(Vector{{4.0, 16.0}});
    EXPECT_LT((transport_map(a, b).matrix() - 2.0 * Matrix::Identity(2, 2)).norm(), 1e-14);
}

TEST(TransportMap, PushesSourceOntoTarget) {
    Rng rng(52);
    for (int trial = 0; trial < 50; ++trial) {
        const Eigen::Index d = 1 + trial % 8;
        const SpdMatrix s0 = testing::random_spd(rng, d);
        const SpdMatrix s1 = testing::random_spd(rng, d, 3.0);
        const Matrix l = transport_map(s0, s1).matrix();
        EXPECT_LT((l * s0.matrix() * l - s1.matrix()).norm(), 1e-8 * s1.matrix().norm());
        // Independent evaluation of the closed form through a plain eigensolver.
        Eigen::SelfAdjointEigenSolver<Matrix> e1(s1.matrix());
        const Matrix r1 = e1.operatorSqrt();
        Eigen::SelfAdjointEigenSolver<Matrix> inner(r1 * s0.matrix() * r1);
        const Matrix expected = r1 * inner.operatorInverseSqrt() * r1;
        EXPECT_LT((l - expected).norm(), 1e-8 * std::max(1.0, expected.norm()));
    }
}

TEST(MakeGeodesic, DegenerateWhenEndpointsCoincide) {
    Rng rng(53);
    const auto mu = random_measure(rng, 3);
    const GeodesicSegment g = make_geodesic(mu, mu);
    EXPECT_TRUE(g.degenerate());
    EXPECT_EQ(g.length(), 0.0);
    EXPECT_TRUE(approx_equal(g.point_at(0.4), mu, 1e-10));
}

TEST(MakeGeodesic, EndpointsReproduced) {
    Rng rng(54);
    for (int trial = 0; trial < 30; ++trial) {
        const Eigen::Index d = 1 + trial % 6;
        const auto a = random_measure(rng, d);
        const auto b = random_measure(rng, d);
        const GeodesicSegment g = make_geodesic(a, b);
        EXPECT_FALSE(g.degenerate());
        EXPECT_NEAR(g.length(), w2_distance(a, b), 1e-12);
        EXPECT_TRUE(approx_equal(point_at(g, 0.0), a, 1e-10));
        EXPECT_TRUE(approx_equal(point_at(g, 1.0), b, 1e-10));
        const auto [m1, s1] = g.raw_point(1.0);
        EXPECT_LT((s1 - b.cov().matrix()).norm(), 1e-8 * b.cov().matrix().norm());
    }
}

TEST(MakeGeodesic, OneDimensionalSegment) {
    const GeodesicSegment g = make_geodesic(gaussian_1d(0, 1), gaussian_1d(2, 9));
    EXPECT_NEAR(g.map()(0, 0), 3.0, 1e-14);
    const GaussianMeasure mid = g.point_at(0.5);
    EXPECT_NEAR(mid.mean()(0), 1.0, 1e-14);
    EXPECT_NEAR(mid.cov()(0, 0), 4.0, 1e-12);
}

TEST(PointAt, RejectsOutOfRange) {
    const GeodesicSegment g = make_geodesic(gaussian_1d(0, 1), gaussian_1d(2, 9));
    for (double t : {-1e-9, 1.0 + 1e-9, std::nan("")}) {
        try {
            (void)g.point_at(t);
            FAIL() << t;
        } catch (const Error& e) {
            EXPECT_EQ(e.code(), Errc::OutOfRange);
        }
    }
}

TEST(PointAt, MidpointIsTwoPointBarycenter) {
    Rng rng(55);
    for (int trial = 0; trial < 10; ++trial) {
        const auto a = random_measure(rng, 3);
        const auto b = random_measure(rng, 3);
        const auto mid = make_geodesic(a, b).point_at(0.5);
        const auto bary = wasserstein_barycenter(MeasureCollection({a, b}), WeightVector::uniform(2)).barycenter;
        EXPECT_LT((mid.cov().matrix() - bary.cov().matrix()).norm(), 1e-8);
        EXPECT_LT((mid.mean() - bary.mean()).norm(), 1e-12);
    }
}

TEST(Geodesic, ConstantSpeed) {
    Rng rng(56);
    for (int trial = 0; trial < 30; ++trial) {
        const Eigen::Index d = 1 + trial % 5;
        const GeodesicSegment g = make_geodesic(random_measure(rng, d), random_measure(rng, d, 2.0, 2.0));
        const double s = testing::uniform(rng, 0, 1);
        const double t = testing::uniform(rng, 0, 1);
        EXPECT_NEAR(w2_distance(g.point_at(s), g.point_at(t)), std::abs(t - s) * g.length(), 1e-7);
    }
}

TEST(Geodesic, DispersionsStaySpd) {
    Rng rng(57);
    for (int trial = 0; trial < 10; ++trial) {
        const GeodesicSegment g = make_geodesic(random_measure(rng, 4), random_measure(rng, 4, 1.0, 5.0));
        for (int j = 0; j <= 32; ++j) EXPECT_NO_THROW((void)g.point_at(j / 32.0));
    }
}

TEST(Register, Examples) {
    Rng rng(58);
    const auto a = random_measure(rng, 3);
    const auto b = random_measure(rng, 3, 2.0);
    const GeodesicSegment g = make_geodesic(a, b);

    const auto at_source = register_measure(a, g);
    EXPECT_EQ(at_source.tau, 0.0);
    EXPECT_LE(at_source.dist, 1e-7);

    const auto at_target = register_measure(b, g);
    EXPECT_EQ(at_target.tau, 1.0);
    EXPECT_LE(at_target.dist, 1e-7);

    const auto inner = register_measure(g.point_at(0.37), g);
    EXPECT_NEAR(inner.tau, 0.37, 1e-6);
    EXPECT_LE(inner.dist, 1e-7);
}

TEST(Register, DegenerateSegment) {
    Rng rng(59);
    const auto a = random_measure(rng, 2);
    const auto mu = random_measure(rng, 2);
    const auto r = register_measure(mu, make_geodesic(a, a));
    EXPECT_TRUE(r.degenerate);
    EXPECT_EQ(r.tau, 0.0);
    EXPECT_NEAR(r.dist, w2_distance(mu, a), 1e-12);
}

TEST(Register, RoundTrip) {
    Rng rng(60);
    for (int trial = 0; trial < 40; ++trial) {
        const Eigen::Index d = 1 + trial % 6;
        const GeodesicSegment g = make_geodesic(random_measure(rng, d), random_measure(rng, d, 2.0, 2.0));
        const double t = testing::uniform(rng, 0, 1);
        const auto r = register_measure(g.point_at(t), g);
        EXPECT_NEAR(r.tau, t, 1e-5);
        EXPECT_LE(r.dist, 1e-6);
    }
}

TEST(Register, BeatsFineGrid) {
    Rng rng(61);
    for (int trial = 0; trial < 20; ++trial) {
        const Eigen::Index d = 1 + trial % 4;
        const GeodesicSegment g = make_geodesic(random_measure(rng, d), random_measure(rng, d, 3.0, 2.0));
        const auto mu = random_measure(rng, d, 2.0, 2.0);
        const auto r = register_measure(mu, g);
        double best = std::numeric_limits<double>::infinity();
        for (int j = 0; j <= 1024; ++j) best = std::min(best, w2_distance(mu, g.point_at(j / 1024.0)));
        EXPECT_LE(r.dist, best + 1e-7);
        EXPECT_GE(r.tau, 0.0);
        EXPECT_LE(r.tau, 1.0);
        EXPECT_NEAR(r.dist, w2_distance(mu, g.point_at(r.tau)), 1e-12);
    }
}

}  // namespace
}  // namespace wcluster
