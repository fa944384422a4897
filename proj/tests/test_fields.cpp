#include <gtest/gtest.h>

#include <cmath>

#include "bbm/fields.hpp"

using namespace bbm;

TEST(Field, PointValues)
{
    const auto lin = Field::linear(Vec{2.0, -1.0}, 0.5);
    EXPECT_EQ(lin.grad(Vec{0.3, 7.0}), (Vec{2.0, -1.0}));
    EXPECT_DOUBLE_EQ(lin.eval(Vec{1.0, 1.0}), 1.5);
    EXPECT_EQ(Field::gaussian(3).grad(Vec(3)), Vec(3));
    EXPECT_DOUBLE_EQ(Field::sign_jump(1).eval(Vec{-0.5}), -0.5);
    EXPECT_DOUBLE_EQ(Field::sign_jump(1).eval(Vec{0.25}), 0.5);
    for (int d : {1, 2, 3}) EXPECT_NEAR(Field::gaussian(d).laplacian(Vec(d)), -2.0 * d, 1e-14);
    EXPECT_DOUBLE_EQ(Field::smooth_bump(2).eval(Vec(2)), 1.0);
    EXPECT_DOUBLE_EQ(Field::odd_bump(1).eval(Vec{0.0}), 0.0);
}

TEST(Field, GradientsMatchDifferences)
{
    const Vec x{0.3, -0.2};
    for (const auto& u : {Field::gaussian(2), Field::smooth_bump(2, 1.5), Field::odd_bump(2), Field::tent(2),
                          Field::gaussian(2).centered_at(Vec{0.5, 0.1}).scaled(3.0)}) {
        const Vec g = u.grad(x);
        for (int i = 0; i < 2; ++i) {
            const Vec e = Vec::axis(2, i) * 1e-6;
            EXPECT_NEAR(g[i], (u.eval(x + e) - u.eval(x - e)) / 2e-6, 1e-7) << u.id();
        }
    }
}

TEST(Field, PiecewiseGradientVanishes)
{
    const auto u = Field::ball_indicator(Vec{0.0, 0.0}, 0.5);
    EXPECT_EQ(u.grad(Vec{0.1, 0.1}), Vec(2));
    EXPECT_EQ(u.grad(Vec{0.9, 0.1}), Vec(2));
    EXPECT_EQ(u.regularity(), Regularity::PiecewiseConstant);
}

TEST(GradNorm, ClosedForms)
{
    EXPECT_NEAR(grad_lp_norm(Field::linear(Vec{1.0}), Domain::interval(0.0, 1.0), 2.0), 1.0, 1e-14);
    EXPECT_NEAR(grad_lp_norm(Field::tent(1), Domain::interval(-1.0, 1.0), 1.0), 2.0, 1e-12);
    const double polar = kPi * (1.0 - 19.0 * std::exp(-18.0));
    EXPECT_NEAR(grad_lp_norm(Field::gaussian(2), Domain::ball(Vec{0.0, 0.0}, 3.0), 2.0), polar, 1e-8);
    // separable box integral
    const double I0 = std::sqrt(kPi / 2.0) * std::erf(std::sqrt(2.0));
    const double box = 8.0 * (I0 / 4.0 - std::exp(-2.0) / 2.0) * I0;
    EXPECT_NEAR(grad_lp_norm(Field::gaussian(2), Domain::box(Vec{-1.0, -1.0}, Vec{1.0, 1.0}), 2.0), box, 1e-8);
}

TEST(GradNorm, MonotoneAndLipschitzBound)
{
    const auto u = Field::tent(1).centered_at(Vec{0.2});
    const double small = grad_lp_norm(u, Domain::interval(0.0, 0.5), 1.5);
    const double big = grad_lp_norm(u, Domain::interval(-1.0, 1.0), 1.5);
    EXPECT_LE(small, big);
    const auto g = Field::gaussian(2);
    const auto dom = Domain::ball(Vec{0.0, 0.0}, 1.0);
    for (double p : {1.0, 2.0, 3.0})
        EXPECT_LE(grad_lp_norm(g, dom, p), std::pow(g.lipschitz_constant(), p) * dom.volume());
}

TEST(BV, JumpFormula)
{
    const auto u = Field::sign_jump(1);
    EXPECT_NEAR(bv_seminorm(u, Domain::interval(-1.0, 1.0)), 1.0, 1e-15);
    EXPECT_EQ(bv_seminorm(u, Domain::slit_interval()), 0.0);
    EXPECT_NEAR(bv_seminorm(u.scaled(-3.0), Domain::interval(-1.0, 1.0)), 3.0, 1e-14);
    const auto disk = Field::ball_indicator(Vec{0.0, 0.0}, 0.5);
    EXPECT_NEAR(bv_seminorm(disk, Domain::ball(Vec{0.0, 0.0}, 1.0)), kPi, 1e-12);
    EXPECT_NEAR(bv_seminorm(disk.scaled(2.5), Domain::ball(Vec{0.0, 0.0}, 1.0)), 2.5 * kPi, 1e-12);
    // 2-D jump across y = 0 inside the unit disk: interface length 2
    EXPECT_NEAR(bv_seminorm(Field::sign_jump(2), Domain::ball(Vec{0.0, 0.0}, 1.0)), 2.0, 1e-12);
    EXPECT_EQ(bv_seminorm(Field::sign_jump(2), Domain::slit_ball(Vec{0.0, 0.0}, 1.0)), 0.0);
}

TEST(Field, Names)
{
    for (auto k : {FieldKind::Linear, FieldKind::Gaussian, FieldKind::Tent, FieldKind::SmoothBump, FieldKind::OddBump,
                   FieldKind::PiecewiseConstant, FieldKind::SignJump})
        EXPECT_EQ(parse_field_kind(field_kind_name(k)), k);
    EXPECT_THROW(parse_field_kind("sine"), std::invalid_argument);
}
