#include <gtest/gtest.h>

#include <cmath>

#include "bbm/geometry.hpp"

using namespace bbm;

TEST(Domain, Volumes)
{
    EXPECT_DOUBLE_EQ(Domain::slit_interval().volume(), 2.0);
    EXPECT_NEAR(Domain::ball(Vec{0.0, 0.0}, 1.0).volume(), kPi, 1e-14);
    EXPECT_DOUBLE_EQ(Domain::intervals({{0.0, 1.0}, {2.0, 2.5}}).volume(), 1.5);
    EXPECT_DOUBLE_EQ(Domain::box(Vec{0.0, 0.0, 0.0}, Vec{1.0, 2.0, 3.0}).volume(), 6.0);
    // disk minus the strip |y| <= 0.5: pi - 2 (asin(0.5) + 0.5 cos(asin(0.5)))
    const double strip = 2.0 * (std::asin(0.5) + 0.5 * std::sqrt(0.75));
    EXPECT_NEAR(Domain::slit_ball(Vec{0.0, 0.0}, 1.0, 0.5).volume(), kPi - strip, 1e-12);
    EXPECT_THROW(Domain::half_space(2, 0, 0.0).volume(), std::invalid_argument);
}

TEST(Domain, SlitExcludesHyperplane)
{
    const auto s = Domain::slit_interval();
    EXPECT_FALSE(s.contains(Vec{0.0}));
    EXPECT_TRUE(s.contains(Vec{-0.5}));
    EXPECT_TRUE(s.contains(Vec{1e-300}));
    EXPECT_FALSE(s.contains(Vec{1.0}));
    const auto b = Domain::slit_ball(Vec{0.0, 0.0}, 1.0);
    EXPECT_FALSE(b.contains(Vec{0.3, 0.0}));
    EXPECT_TRUE(b.contains(Vec{0.3, 1e-12}));
}

TEST(Domain, ShrinkAndGrow)
{
    EXPECT_EQ(Domain::interval(0.0, 1.0).inner_shrink(0.1), Domain::interval(0.1, 0.9));
    EXPECT_EQ(Domain::ball(Vec{0.0, 0.0}, 1.0).outer_grow(0.2), Domain::ball(Vec{0.0, 0.0}, 1.2));
    EXPECT_EQ(Domain::slit_interval().outer_grow(0.1), Domain::interval(-1.1, 1.1));
    EXPECT_EQ(Domain::slit_interval().inner_shrink(0.1), Domain::intervals({{-0.9, -0.1}, {0.1, 0.9}}));
    EXPECT_THROW(Domain::interval(0.0, 1.0).inner_shrink(0.6), std::invalid_argument);

    for (const auto& d : {Domain::interval(0.0, 1.0), Domain::slit_interval(), Domain::ball(Vec{0.0, 0.0}, 1.0),
                          Domain::box(Vec{0.0, 0.0}, Vec{1.0, 2.0}), Domain::slit_ball(Vec{0.0, 0.0, 0.0}, 1.0)}) {
        const double v = d.volume();
        EXPECT_LT(d.inner_shrink(0.05).volume(), v) << d.id();
        EXPECT_GT(d.outer_grow(0.05).volume(), v) << d.id();
    }
}

TEST(Domain, ShrunkPointsStayInside)
{
    Stream s(4, 0);
    for (const auto& d : {Domain::slit_ball(Vec{0.0, 0.0}, 1.0), Domain::box(Vec{-1.0, 0.0}, Vec{1.0, 0.5}),
                          Domain::intervals({{0.0, 1.0}, {1.5, 3.0}})}) {
        const auto inner = d.inner_shrink(0.1);
        const auto [lo, hi] = d.bounding_box();
        for (int i = 0; i < 20000; ++i) {
            Vec x(d.dim());
            for (int j = 0; j < d.dim(); ++j) x[j] = s.uniform(lo[j] - 0.2, hi[j] + 0.2);
            if (inner.contains(x)) ASSERT_TRUE(d.contains(x)) << d.id();
        }
    }
}

TEST(Domain, SamplerAcceptanceRatio)
{
    for (const auto& d : {Domain::ball(Vec{0.0, 0.0}, 1.0), Domain::slit_ball(Vec{0.0, 0.0, 0.0}, 1.0, 0.2)}) {
        const auto [lo, hi] = d.bounding_box();
        double box = 1.0;
        for (int j = 0; j < d.dim(); ++j) box *= hi[j] - lo[j];
        const double ratio = d.volume() / box;
        Stream s(8, 0);
        const int n = 1'000'000;
        int hit = 0;
        for (int i = 0; i < n; ++i) {
            Vec x(d.dim());
            for (int j = 0; j < d.dim(); ++j) x[j] = s.uniform(lo[j], hi[j]);
            hit += d.contains(x);
        }
        EXPECT_NEAR(double(hit) / n, ratio, 4.0 * std::sqrt(ratio * (1 - ratio) / n)) << d.id();

        for (int i = 0; i < 10000; ++i) ASSERT_TRUE(d.contains(d.sample_uniform(s)));
    }
}

TEST(Domain, CompactContainment)
{
    EXPECT_TRUE(compactly_contains(Domain::interval(0.0, 1.0), Domain::interval(0.25, 0.75)));
    EXPECT_FALSE(compactly_contains(Domain::interval(0.0, 1.0), Domain::interval(0.0, 0.75)));
    EXPECT_FALSE(compactly_contains(Domain::slit_interval(), Domain::interval(-0.5, 0.5)));
    EXPECT_TRUE(compactly_contains(Domain::ball(Vec{0.0, 0.0}, 1.0), Domain::ball(Vec{0.1, 0.0}, 0.5)));
}

TEST(Domain, Names)
{
    for (auto k : {DomainKind::IntervalUnion, DomainKind::Box, DomainKind::Ball, DomainKind::SlitBall,
                   DomainKind::SlitInterval, DomainKind::HalfSpace, DomainKind::FullSpace})
        EXPECT_EQ(parse_domain_kind(domain_kind_name(k)), k);
    EXPECT_THROW(parse_domain_kind("torus"), std::invalid_argument);
}
