#include <gtest/gtest.h>

#include <cmath>
#include <set>
#include <stdexcept>

#include "bbm/core.hpp"
#include "bbm/parallel.hpp"
#include "bbm/quadrature.hpp"
#include "bbm/rng.hpp"

using namespace bbm;

TEST(Vec, Arithmetic)
{
    Vec a{1.0, 2.0, 2.0};
    EXPECT_EQ(a.dim(), 3);
    EXPECT_DOUBLE_EQ(a.norm(), 3.0);
    EXPECT_DOUBLE_EQ(a.dot(Vec::axis(3, 1)), 2.0);
    EXPECT_EQ(a - a, Vec(3));
    EXPECT_THROW(Vec(kMaxDim + 1), std::invalid_argument);
}

TEST(CompensatedSum, RecoversSmallTerms)
{
    CompensatedSum s;
    s.add(1.0);
    for (int i = 0; i < 1000; ++i) s.add(1e-16);
    s.add(-1.0);
    EXPECT_NEAR(s.value(), 1e-13, 1e-20);
}

TEST(Geometry, SphereAndBall)
{
    EXPECT_DOUBLE_EQ(sphere_area(1), 2.0);
    EXPECT_NEAR(sphere_area(2), 2 * kPi, 1e-14);
    EXPECT_NEAR(sphere_area(3), 4 * kPi, 1e-13);
    EXPECT_NEAR(ball_volume(2, 1.0), kPi, 1e-14);
    EXPECT_NEAR(ball_volume(3, 2.0), 32.0 * kPi / 3.0, 1e-12);
    EXPECT_NEAR(beta_function(2.0, 3.0), 1.0 / 12.0, 1e-14);
}

TEST(FormatDouble, ShortestRoundTrip)
{
    EXPECT_EQ(format_double(0.1), "0.1");
    EXPECT_EQ(format_double(2.0), "2");
    const double x = 1.0 / 3.0;
    EXPECT_EQ(std::stod(format_double(x)), x);
}

TEST(Quadrature, SmoothAndSingular)
{
    auto g = quad::integrate([](double x) { return std::exp(-x * x); }, -5.0, 5.0);
    EXPECT_TRUE(g.converged);
    EXPECT_NEAR(g.value, std::sqrt(kPi) * std::erf(5.0), 1e-13);

    auto s = quad::integrate_lower_singular([](double x) { return 1.0 / std::sqrt(x); }, 1.0);
    EXPECT_TRUE(s.converged);
    EXPECT_NEAR(s.value, 2.0, 1e-11);

    auto t = quad::integrate_upper_tail([](double x) { return 1.0 / (x * x); }, 1.0);
    EXPECT_TRUE(t.converged);
    EXPECT_NEAR(t.value, 1.0, 1e-11);
}

TEST(Quadrature, BreakpointsRestoreAccuracy)
{
    const std::vector<double> pts{-1.0, 0.3, 2.0};
    auto r = quad::integrate([](double x) { return std::abs(x - 0.3); }, std::span<const double>(pts));
    EXPECT_TRUE(r.converged);
    EXPECT_NEAR(r.value, 0.5 * 1.3 * 1.3 + 0.5 * 1.7 * 1.7, 1e-13);
}

TEST(Quadrature, DivergenceIsReported)
{
    auto lo = quad::integrate_lower_singular([](double x) { return 1.0 / x; }, 1.0);
    EXPECT_FALSE(lo.converged);
    EXPECT_THROW(lo.checked("1/x"), NumericalError);
    auto hi = quad::integrate_upper_tail([](double x) { return 1.0 / x; }, 1.0);
    EXPECT_FALSE(hi.converged);
}

// Known-answer vectors for Philox4x32-10.
TEST(Philox, KnownAnswers)
{
    using A4 = std::array<std::uint32_t, 4>;
    EXPECT_EQ(philox4x32({0, 0, 0, 0}, {0, 0}), (A4{0x6627e8d5, 0xe169c58d, 0xbc57ac4c, 0x9b00dbd8}));
    EXPECT_EQ(philox4x32({0xffffffff, 0xffffffff, 0xffffffff, 0xffffffff}, {0xffffffff, 0xffffffff}),
              (A4{0x408f276d, 0x41c83b0e, 0xa20bc7c6, 0x6d5451fd}));
    EXPECT_EQ(philox4x32({0x243f6a88, 0x85a308d3, 0x13198a2e, 0x03707344}, {0xa4093822, 0x299f31d0}),
              (A4{0xd16cfe09, 0x94fdcceb, 0x5001e420, 0x24126ea1}));
}

TEST(Stream, DeterministicAndIndependent)
{
    Stream a(42, 7), b(42, 7), c(42, 8), d(43, 7);
    std::set<std::uint64_t> seen;
    for (int i = 0; i < 100; ++i) {
        const auto x = a.next_u64();
        EXPECT_EQ(x, b.next_u64());
        seen.insert(x);
        seen.insert(c.next_u64());
        seen.insert(d.next_u64());
    }
    EXPECT_EQ(seen.size(), 300u);
}

TEST(Stream, UniformMomentsAndRange)
{
    Stream s(1, 0);
    const int n = 200000;
    double m = 0.0, m2 = 0.0;
    for (int i = 0; i < n; ++i) {
        const double u = s.uniform();
        ASSERT_GT(u, 0.0);
        ASSERT_LT(u, 1.0);
        m += u;
        m2 += u * u;
    }
    m /= n;
    m2 /= n;
    EXPECT_NEAR(m, 0.5, 4.0 * std::sqrt(1.0 / 12.0 / n));
    EXPECT_NEAR(m2 - m * m, 1.0 / 12.0, 2e-3);
}

TEST(Stream, UnitVectors)
{
    Stream s(5, 0);
    for (int d = 1; d <= 5; ++d) {
        Vec mean(d);
        for (int i = 0; i < 20000; ++i) {
            const Vec w = s.unit_vector(d);
            ASSERT_NEAR(w.norm(), 1.0, 1e-14);
            mean += w;
        }
        for (int j = 0; j < d; ++j) EXPECT_LT(std::abs(mean[j] / 20000.0), 0.03);
    }
}

TEST(Parallel, ResultsIndependentOfThreadCount)
{
    auto work = [](std::size_t i) {
        Stream s(9, i);
        return s.uniform();
    };
    const auto one = map_indexed<double>(100, work, 1);
    const auto many = map_indexed<double>(100, work, 7);
    EXPECT_EQ(one, many);
}

TEST(Parallel, ExceptionsPropagate)
{
    auto bad = [](std::size_t i) -> int {
        if (i == 13) throw std::runtime_error("boom");
        return static_cast<int>(i);
    };
    EXPECT_THROW(map_indexed<int>(50, bad, 4), std::runtime_error);
}
