#include <gtest/gtest.h>

#include <cmath>
#include <set>

#include "bbm/sweep.hpp"

using namespace bbm;

namespace {

std::vector<SweepRow> rows_from(const std::vector<double>& params, const std::vector<double>& values, double target,
                                double se = 0.0)
{
    std::vector<SweepRow> out;
    for (std::size_t i = 0; i < values.size(); ++i) {
        SweepRow r;
        r.param = params[i];
        r.value = values[i];
        r.std_error = se;
        r.abs_err = std::abs(values[i] - target);
        out.push_back(r);
    }
    return out;
}

const std::vector<double> kEps{0.4, 0.2, 0.1, 0.05, 0.02};
const std::vector<double> kCut{1e-2, 1e-3, 1e-4, 1e-5};

const SweepCase& find_case(const std::vector<SweepCase>& cases, const std::string& id)
{
    for (const auto& c : cases)
        if (c.id == id) return c;
    throw std::out_of_range(id);
}

} // namespace

TEST(Judge, Verdicts)
{
    EXPECT_EQ(judge(rows_from(kEps, {0.5, 0.7, 0.85, 0.93, 0.97}, 1.0), TargetKind::GradLp, 1.0, 1.0), Verdict::Converged);
    EXPECT_EQ(judge(rows_from(kEps, {0.5, 0.7, 0.85, 0.93, 0.97}, 0.0), TargetKind::BVSeminorm, 0.0, 0.0),
              Verdict::LimitMismatch);
    EXPECT_EQ(judge(rows_from(kEps, {1, 2, 3, 4, 5}, 1.0), TargetKind::GradLp, 1.0, 1.0), Verdict::Diverged);
    // error grows at the end
    EXPECT_EQ(judge(rows_from(kEps, {0.5, 0.7, 0.99, 0.97, 0.96}, 1.0), TargetKind::GradLp, 1.0, 1.0),
              Verdict::LimitMismatch);
    EXPECT_EQ(judge(rows_from(kEps, {0.5, 0.2, 0.9, 0.1, 0.6}, 1.0), TargetKind::GradLp, 1.0, 1.0),
              Verdict::Inconclusive);
    EXPECT_EQ(judge(rows_from(kCut, {9.8, 14.4, 19.0, 23.6}, NAN), TargetKind::Divergent, NAN, 0.0), Verdict::Diverged);
    EXPECT_EQ(judge(rows_from(kCut, {4.29, 4.56, 4.646, 4.674}, NAN), TargetKind::Finite, NAN, 0.0), Verdict::Converged);
    EXPECT_EQ(judge(rows_from(kCut, {4.29, 4.56, 4.646, 4.9}, NAN), TargetKind::Finite, NAN, 0.0), Verdict::Inconclusive);
    EXPECT_EQ(judge({}, TargetKind::GradLp, 1.0, 1.0), Verdict::Inconclusive);
}

TEST(Judge, StatisticalBand)
{
    // 8% off but within 3 standard errors
    EXPECT_EQ(judge(rows_from(kEps, {0.7, 0.8, 0.9, 0.91, 0.92}, 1.0, 0.03), TargetKind::GradLp, 1.0, 1.0),
              Verdict::Converged);
    EXPECT_NE(judge(rows_from(kEps, {0.7, 0.8, 0.9, 0.91, 0.92}, 1.0, 0.001), TargetKind::GradLp, 1.0, 1.0),
              Verdict::Converged);
}

TEST(Sweep, ReferenceCases)
{
    SweepCase c;
    c.id = "linear";
    c.family.p = 2.0;
    c.target_value = 1.0;
    auto r = run_sweep(c);
    EXPECT_EQ(r.verdict, Verdict::Converged);
    EXPECT_LE(r.rows.back().rel_err, 0.05);
    ASSERT_EQ(r.rows.size(), 5u);
    for (std::size_t i = 0; i < 5; ++i)
        EXPECT_NEAR(r.rows[i].value, (2 - kEps[i]) / (2 * (1 + kEps[i])), 1e-8);

    c.id = "jump";
    c.field = Field::sign_jump(1);
    c.domain = Domain::interval(-1.0, 1.0);
    c.family.p = 1.0;
    c.target_kind = TargetKind::BVSeminorm;
    EXPECT_EQ(run_sweep(c).verdict, Verdict::Converged);

    c.id = "slit";
    c.domain = Domain::slit_interval();
    c.target_value = 0.0;
    EXPECT_EQ(run_sweep(c).verdict, Verdict::LimitMismatch);
    EXPECT_EQ(verdict_name(Verdict::LimitMismatch), "limit exists but ≠ K_{d,p}‖∇u‖^p");
}

TEST(Sweep, GridMustApproachLimit)
{
    SweepCase c;
    c.grid = {0.1, 0.2};
    EXPECT_THROW(run_sweep(c), std::invalid_argument);
    c.functional = Functional::FractionalS;
    c.grid = {0.9, 0.8};
    EXPECT_THROW(run_sweep(c), std::invalid_argument);
}

TEST(Sweep, FailuresKeepEarlierRows)
{
    SweepCase c;
    c.grid = {0.4, 0.2, 0.1};
    c.family.family = Family::LogLimit;
    c.family.eps0 = 0.15; // eps = 0.2 and 0.4 are out of range, so the first row already fails
    auto r = run_sweep(c);
    EXPECT_FALSE(r.error.empty());
    EXPECT_TRUE(r.rows.empty());
    EXPECT_EQ(r.verdict, Verdict::Inconclusive);

    c.grid = {0.1, 0.05, 0.5};
    c.family.eps0 = 0.2;
    EXPECT_THROW(run_sweep(c), std::invalid_argument);
}

TEST(Sweep, FractionalLimits)
{
    const auto x = Field::linear(Vec{1.0});
    const auto dom = Domain::interval(0.0, 1.0);
    const double expected[] = {1.0, 2.0, 2.0};
    for (int v = 1; v <= 3; ++v) {
        const auto r = fractional_limits(x, dom, 2.0, v);
        EXPECT_EQ(r.verdict, Verdict::Converged) << v;
        EXPECT_NEAR(r.target, expected[v - 1], 1e-12);
    }
    const auto r1 = fractional_limits(x, dom, 2.0, 1);
    const double s[] = {0.8, 0.9, 0.95, 0.99};
    for (int i = 0; i < 4; ++i) EXPECT_NEAR(r1.rows[i].value, 1.0 - 2.0 * (1 - s[i]) / (3 - 2 * s[i]), 1e-8);
    EXPECT_THROW(fractional_limits(x, dom, 2.0, 4), std::invalid_argument);
}

TEST(Suite, ShapeAndTargets)
{
    const auto a = builtin_suite(42), b = builtin_suite(42);
    EXPECT_GE(a.size(), 12u);
    std::set<std::string> ids;
    std::set<std::uint64_t> seeds;
    for (std::size_t i = 0; i < a.size(); ++i) {
        EXPECT_EQ(a[i].id, b[i].id);
        EXPECT_EQ(a[i].seed, b[i].seed);
        ids.insert(a[i].id);
        seeds.insert(a[i].seed);
    }
    EXPECT_EQ(ids.size(), a.size());
    EXPECT_EQ(seeds.size(), a.size());
    EXPECT_NE(builtin_suite(43)[0].seed, a[0].seed);

    EXPECT_EQ(find_case(a, "w1p-limit-linear").target_value, kdp_mean(1, 2.0) * 1.0);
    EXPECT_NEAR(find_case(a, "w1p-limit-gaussian-disk-mc").target_value, 0.5 * kPi * (1 - 19 * std::exp(-18.0)), 1e-8);
    EXPECT_EQ(find_case(a, "slit-interval-mismatch").target_value, 0.0);
    EXPECT_EQ(find_case(a, "slit-interval-mismatch").expected, Verdict::LimitMismatch);
    EXPECT_EQ(find_case(a, "generator-gaussian-d2").target_value, 1.0);
}

TEST(Suite, DeterministicCasesMeetExpectations)
{
    auto cases = builtin_suite(42);
    std::erase_if(cases, [](const SweepCase& c) { return c.mode == Mode::MonteCarlo; });
    for (const auto& rep : run_suite(cases)) {
        EXPECT_TRUE(rep.error.empty()) << rep.case_id << ": " << rep.error;
        EXPECT_EQ(rep.verdict, rep.expected) << rep.case_id;
        if (rep.verdict == Verdict::Converged && !std::isnan(rep.target)) {
            const auto& r = rep.rows;
            for (std::size_t i = r.size() - 2; i < r.size(); ++i) EXPECT_LE(r[i].abs_err, r[i - 1].abs_err) << rep.case_id;
        }
    }
}

TEST(Suite, MonteCarloCasesMeetExpectations)
{
    auto cases = builtin_suite(42, 200'000);
    std::erase_if(cases, [](const SweepCase& c) { return c.mode != Mode::MonteCarlo; });
    ASSERT_FALSE(cases.empty());
    for (const auto& rep : run_suite(cases)) EXPECT_EQ(rep.verdict, rep.expected) << rep.case_id;
}
