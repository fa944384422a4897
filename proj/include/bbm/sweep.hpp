/*
   Copyright 2026 The bbm-lab Authors

   Licensed under the Apache License, Version 2.0 (the "License");
   you may not use this file except in compliance with the License.
   You may obtain a copy of the License at

       http://www.apache.org/licenses/LICENSE-2.0

   Unless required by applicable law or agreed to in writing, software
   distributed under the License is distributed on an "AS IS" BASIS,
   WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
   See the License for the specific language governing permissions and
   limitations under the License.
*/

#pragma once

#include <cmath>
#include <cstdint>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include "bbm/constants.hpp"
#include "bbm/energy.hpp"
#include "bbm/fields.hpp"
#include "bbm/geometry.hpp"
#include "bbm/kernels.hpp"
#include "bbm/parallel.hpp"
#include "bbm/rng.hpp"

namespace bbm {

/// What is evaluated at each grid parameter.
enum class Functional {
    Energy,         // grid: eps
    CrossEnergy,    // grid: eps
    LocalMeasure,   // grid: eps
    Generator,      // grid: eps
    DiracPairing,   // grid: eps
    FractionalS,    // grid: s, value (1 - s) * Gagliardo
    FractionalBall, // grid: eps, value eps^{-d} int int_{|h|<eps} |du|^p / |h|^p
    FractionalLog,  // grid: eps, value |log eps|^{-1} int int_{|h|>eps} |du|^p / |h|^{d+p}
    GagliardoCutoff // grid: cutoff t, value the truncated seminorm at fixed s
};

enum class TargetKind { GradLp, BVSeminorm, Zero, Pointwise, Divergent, Finite };
enum class Verdict { Converged, LimitMismatch, Diverged, Inconclusive };

inline std::string functional_name(Functional f)
{
    switch (f) {
    case Functional::Energy: return "energy";
    case Functional::CrossEnergy: return "cross-energy";
    case Functional::LocalMeasure: return "local-measure";
    case Functional::Generator: return "generator";
    case Functional::DiracPairing: return "dirac-pairing";
    case Functional::FractionalS: return "fractional-s";
    case Functional::FractionalBall: return "fractional-ball";
    case Functional::FractionalLog: return "fractional-log";
    case Functional::GagliardoCutoff: return "gagliardo-cutoff";
    }
    return "";
}

inline std::string target_kind_name(TargetKind t)
{
    switch (t) {
    case TargetKind::GradLp: return "grad-lp";
    case TargetKind::BVSeminorm: return "bv-seminorm";
    case TargetKind::Zero: return "zero";
    case TargetKind::Pointwise: return "pointwise";
    case TargetKind::Divergent: return "divergent";
    case TargetKind::Finite: return "finite";
    }
    return "";
}

inline std::string verdict_name(Verdict v)
{
    switch (v) {
    case Verdict::Converged: return "converged";
    case Verdict::LimitMismatch: return "limit exists but ≠ K_{d,p}‖∇u‖^p";
    case Verdict::Diverged: return "diverged";
    case Verdict::Inconclusive: return "inconclusive";
    }
    return "";
}

template <class E>
E parse_enum(const std::string& s, std::initializer_list<E> all, std::string (*name)(E), const char* what)
{
    for (E e : all)
        if (name(e) == s) return e;
    throw std::invalid_argument(std::string("unknown ") + what + " '" + s + "'");
}

inline Verdict parse_verdict(const std::string& s)
{
    return parse_enum(s, {Verdict::Converged, Verdict::LimitMismatch, Verdict::Diverged, Verdict::Inconclusive},
                      verdict_name, "verdict");
}
inline TargetKind parse_target_kind(const std::string& s)
{
    return parse_enum(s, {TargetKind::GradLp, TargetKind::BVSeminorm, TargetKind::Zero, TargetKind::Pointwise,
                          TargetKind::Divergent, TargetKind::Finite},
                      target_kind_name, "target kind");
}
inline Functional parse_functional(const std::string& s)
{
    return parse_enum(s, {Functional::Energy, Functional::CrossEnergy, Functional::LocalMeasure, Functional::Generator,
                          Functional::DiracPairing, Functional::FractionalS, Functional::FractionalBall,
                          Functional::FractionalLog, Functional::GagliardoCutoff},
                      functional_name, "functional");
}

inline const std::vector<double>& default_eps_grid()
{
    static const std::vector<double> g{0.4, 0.2, 0.1, 0.05, 0.02};
    return g;
}

struct SweepCase {
    std::string id;
    Functional functional = Functional::Energy;
    Field field = Field::linear(Vec{1.0});
    Domain domain = Domain::interval(0.0, 1.0);
    std::optional<Domain> subdomain;
    KernelSpec family;
    std::vector<double> grid = default_eps_grid();
    TargetKind target_kind = TargetKind::GradLp;
    double target_value = 0.0;
    // Scale of the 5% acceptance band; defaults to |target_value|.
    std::optional<double> tolerance_scale;
    Mode mode = Mode::Deterministic1D;
    std::int64_t n = 1'000'000;
    std::uint64_t seed = 42;
    Vec point;
    double s = 0.5; // fractional order for GagliardoCutoff
    Verdict expected = Verdict::Converged;
};

struct SweepRow {
    double param = 0.0;
    double value = 0.0;
    double std_error = 0.0;
    std::int64_t n = 0;
    double abs_err = 0.0;
    double rel_err = 0.0;
};

struct SweepReport {
    std::string case_id;
    std::string functional;
    std::string family;
    int d = 1;
    double p = 2.0;
    std::string target_kind;
    double target = 0.0;
    std::string mode;
    std::uint64_t seed = 0;
    std::vector<SweepRow> rows;
    Verdict verdict = Verdict::Inconclusive;
    Verdict expected = Verdict::Converged;
    double final_error = 0.0;
    std::string error; // message of an aborted case; rows before it are kept
};

namespace detail {

inline bool same(double a, double b) { return a == b || (std::isnan(a) && std::isnan(b)); }

// Least-squares slope of value against log(1/param).
inline double log_slope(const std::vector<SweepRow>& rows)
{
    const std::size_t n = rows.size();
    if (n < 2) return 0.0;
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (const auto& r : rows) {
        const double x = std::log(1.0 / r.param);
        sx += x;
        sy += r.value;
        sxx += x * x;
        sxy += x * r.value;
    }
    const double den = n * sxx - sx * sx;
    return den != 0.0 ? (n * sxy - sx * sy) / den : 0.0;
}

} // namespace detail

inline bool operator==(const SweepRow& a, const SweepRow& b)
{
    using detail::same;
    return same(a.param, b.param) && same(a.value, b.value) && same(a.std_error, b.std_error) && a.n == b.n &&
           same(a.abs_err, b.abs_err) && same(a.rel_err, b.rel_err);
}

inline bool operator==(const SweepReport& a, const SweepReport& b)
{
    using detail::same;
    return a.case_id == b.case_id && a.functional == b.functional && a.family == b.family && a.d == b.d &&
           same(a.p, b.p) && a.target_kind == b.target_kind && same(a.target, b.target) && a.mode == b.mode &&
           a.seed == b.seed && a.rows == b.rows && a.verdict == b.verdict && a.expected == b.expected &&
           same(a.final_error, b.final_error) && a.error == b.error;
}

/// Slope of value against log(1/param) above which a sweep counts as divergent.
inline constexpr double kDivergenceSlope = 0.5;

/// Acceptance rule. Limit targets: converged when the last value is within
/// max(3 stderr, 5% of scale) and |error| is nonincreasing (up to 3 stderr) over
/// the last three entries; values that settle elsewhere are a mismatch. Divergent targets: slope
/// of value against log(1/param) above 0.5. Finite targets: < 1% change over the
/// last decade.
inline Verdict judge(const std::vector<SweepRow>& rows, TargetKind kind, double target, double scale)
{
    const std::size_t n = rows.size();
    if (n < 2) return Verdict::Inconclusive;
    const auto& last = rows.back();
    const double slope = detail::log_slope(rows);
    if (kind == TargetKind::Divergent) return slope > kDivergenceSlope ? Verdict::Diverged : Verdict::Inconclusive;
    if (kind == TargetKind::Finite) {
        const auto& prev = rows[n - 2];
        const double change = std::abs(last.value - prev.value) / std::max(std::abs(last.value), 1e-300);
        if (change < 0.01) return Verdict::Converged;
        return slope > kDivergenceSlope ? Verdict::Diverged : Verdict::Inconclusive;
    }

    bool err_monotone = true;
    for (std::size_t i = n >= 3 ? n - 2 : 1; i < n; ++i)
        err_monotone =
            err_monotone && rows[i].abs_err <= rows[i - 1].abs_err + 3.0 * (rows[i].std_error + rows[i - 1].std_error);
    const double band = std::max(3.0 * last.std_error, 0.05 * scale);
    if (last.abs_err <= band && err_monotone) return Verdict::Converged;

    bool settled = std::abs(last.value - rows[n - 2].value) <= 0.05 * std::max(std::abs(last.value), 1e-300);
    for (std::size_t i = n >= 3 ? n - 2 : 1; i + 1 < n; ++i) {
        const double d0 = std::abs(rows[i].value - rows[i - 1].value);
        const double d1 = std::abs(rows[i + 1].value - rows[i].value);
        settled = settled && d1 <= d0 + 3.0 * (rows[i + 1].std_error + rows[i].std_error);
    }
    if (settled) return Verdict::LimitMismatch;
    if (slope > kDivergenceSlope) return Verdict::Diverged;
    return Verdict::Inconclusive;
}

/// Value of the case's functional at one grid parameter.
inline EnergyEstimate evaluate_case(const SweepCase& c, double param)
{
    KernelSpec ks = c.family;
    ks.eps = param;
    const bool det = c.mode == Mode::Deterministic1D;
    McOptions mc{c.n, c.seed};
    auto scalar = [&](double v) {
        EnergyEstimate e;
        e.value = v;
        e.eps = param;
        e.field_id = c.field.id();
        e.domain_id = c.domain.id();
        e.mode = Mode::Deterministic1D;
        return e;
    };
    switch (c.functional) {
    case Functional::Energy: {
        const auto k = make_kernel(ks);
        return det ? energy_1d(c.field, c.domain, k) : energy(c.field, c.domain, k, mc);
    }
    case Functional::CrossEnergy: {
        const auto k = make_kernel(ks);
        return det ? cross_energy_1d(c.field, c.domain, k) : cross_energy(c.field, c.domain, k, mc);
    }
    case Functional::LocalMeasure: {
        require(c.subdomain.has_value(), "local-measure case needs a subdomain");
        const auto k = make_kernel(ks);
        return det ? local_measure_1d(c.field, c.domain, *c.subdomain, k)
                   : local_measure(c.field, c.domain, *c.subdomain, k, mc);
    }
    case Functional::Generator: {
        auto e = scalar(generator(c.field, c.point, make_kernel(ks)));
        e.kernel_id = make_kernel(ks).id();
        return e;
    }
    case Functional::DiracPairing: {
        const auto k = make_kernel(ks);
        auto e = scalar(dirac_pairing(c.field, k));
        e.kernel_id = k.id();
        return e;
    }
    case Functional::FractionalS: return scalar((1.0 - param) * gagliardo(c.field, c.domain, param, c.family.p));
    case Functional::FractionalBall: {
        const int d = c.family.dim;
        const auto k = make_truncated_power(d, c.family.p, 0.0, param);
        const double scale = sphere_area(d) / d;
        if (det) {
            auto e = energy_1d(c.field, c.domain, k);
            e.value *= scale;
            return e;
        }
        auto e = energy(c.field, c.domain, k, mc);
        e.value *= scale;
        e.std_error *= scale;
        return e;
    }
    case Functional::FractionalLog: return scalar(log_scaled_seminorm(c.field, c.domain, c.family.p, param));
    case Functional::GagliardoCutoff: return scalar(gagliardo(c.field, c.domain, c.s, c.family.p, param));
    }
    throw std::invalid_argument("evaluate_case: unknown functional");
}

inline SweepReport run_sweep(const SweepCase& c)
{
    SweepReport rep;
    rep.case_id = c.id;
    rep.functional = functional_name(c.functional);
    rep.family = c.functional == Functional::FractionalS || c.functional == Functional::GagliardoCutoff
                     ? "gagliardo"
                     : (c.functional == Functional::FractionalBall ? family_name(Family::TruncatedPower)
                        : c.functional == Functional::FractionalLog ? "log-scaled"
                                                                    : family_name(c.family.family));
    rep.d = c.family.dim;
    rep.p = c.family.p;
    rep.target_kind = target_kind_name(c.target_kind);
    const bool limit = c.target_kind != TargetKind::Divergent && c.target_kind != TargetKind::Finite;
    rep.target = limit ? c.target_value : std::numeric_limits<double>::quiet_NaN();
    rep.mode = mode_name(c.mode);
    rep.seed = c.seed;
    rep.expected = c.expected;

    // s grids climb towards 1, all others fall towards 0.
    const bool up = c.functional == Functional::FractionalS;
    for (std::size_t i = 1; i < c.grid.size(); ++i)
        require(up ? c.grid[i] > c.grid[i - 1] : c.grid[i] < c.grid[i - 1],
                "run_sweep: grid must approach the limit monotonically in case " + c.id);

    try {
        for (double param : c.grid) {
            const auto e = evaluate_case(c, param);
            SweepRow row;
            row.param = param;
            row.value = e.value;
            row.std_error = e.std_error;
            row.n = e.n_samples;
            if (limit) {
                row.abs_err = std::abs(e.value - c.target_value);
                row.rel_err = c.target_value != 0.0 ? row.abs_err / std::abs(c.target_value)
                                                    : std::numeric_limits<double>::quiet_NaN();
            } else {
                row.abs_err = row.rel_err = std::numeric_limits<double>::quiet_NaN();
            }
            rep.rows.push_back(row);
        }
    } catch (const std::exception& ex) {
        rep.error = ex.what();
    }
    const double scale = c.tolerance_scale ? *c.tolerance_scale : std::abs(c.target_value);
    rep.verdict = rep.error.empty() ? judge(rep.rows, c.target_kind, c.target_value, scale) : Verdict::Inconclusive;
    rep.final_error = rep.rows.empty() ? std::numeric_limits<double>::quiet_NaN() : rep.rows.back().abs_err;
    return rep;
}

/// The three fractional scalings swept to their limits for u on a one-dimensional domain.
/// variant 1: s in {0.8, 0.9, 0.95, 0.99}; 2: eps grid; 3: eps in {1e-2, ..., 1e-32}.
inline SweepReport fractional_limits(const Field& u, const Domain& dom, double p, int variant)
{
    require(variant >= 1 && variant <= 3, "fractional_limits: variant must be 1, 2 or 3");
    const int d = dom.dim();
    const double grad = grad_lp_norm(u, dom, p);
    const double K = kdp_mean(d, p);
    const double area = sphere_area(d);
    SweepCase c;
    c.field = u;
    c.domain = dom;
    c.family.dim = d;
    c.family.p = p;
    c.target_kind = TargetKind::GradLp;
    if (variant == 1) {
        c.id = "fractional-s-limit";
        c.functional = Functional::FractionalS;
        c.grid = {0.8, 0.9, 0.95, 0.99};
        c.target_value = area / p * K * grad;
    } else if (variant == 2) {
        c.id = "fractional-ball-limit";
        c.functional = Functional::FractionalBall;
        c.family.family = Family::TruncatedPower;
        c.target_value = area / d * K * grad;
    } else {
        c.id = "fractional-log-limit";
        c.functional = Functional::FractionalLog;
        c.grid = {1e-2, 1e-4, 1e-8, 1e-16, 1e-32};
        c.target_value = area * K * grad;
    }
    return run_sweep(c);
}

/// Per-case seed derived from the master seed and the case index.
inline std::uint64_t case_seed(std::uint64_t master, std::size_t index)
{
    return splitmix64(master ^ splitmix64(static_cast<std::uint64_t>(index) + 1));
}

/// The curated acceptance suite; every target is recomputed from the fields and constants modules.
inline std::vector<SweepCase> builtin_suite(std::uint64_t master_seed = 42, std::int64_t n = 1'000'000)
{
    std::vector<SweepCase> out;
    const auto unit = Domain::interval(0.0, 1.0);
    const auto sym = Domain::interval(-1.0, 1.0);
    const auto x = Field::linear(Vec{1.0});
    const auto jump = Field::sign_jump(1);
    auto spec = [](Family f, int d, double p) {
        KernelSpec k;
        k.family = f;
        k.dim = d;
        k.p = p;
        return k;
    };

    {
        SweepCase c;
        c.id = "w1p-limit-linear";
        c.family = spec(Family::Stable, 1, 2.0);
        c.target_value = kdp_mean(1, 2.0) * grad_lp_norm(x, unit, 2.0);
        out.push_back(c);
        c.id = "w1p-limit-linear-mc";
        c.mode = Mode::MonteCarlo;
        out.push_back(c);
        c.id = "w1p-limit-linear-rescaled";
        c.mode = Mode::Deterministic1D;
        c.family = spec(Family::Rescaled, 1, 2.0);
        out.push_back(c);
        c.id = "w1p-limit-linear-truncated";
        c.family = spec(Family::TruncatedPower, 1, 2.0);
        out.push_back(c);
    }
    {
        SweepCase c;
        c.id = "w1p-limit-gaussian-disk-mc";
        c.field = Field::gaussian(2);
        c.domain = Domain::ball(Vec{0.0, 0.0}, 3.0);
        c.family = spec(Family::Stable, 2, 2.0);
        c.mode = Mode::MonteCarlo;
        c.target_value = kdp_mean(2, 2.0) * grad_lp_norm(c.field, c.domain, 2.0);
        out.push_back(c);
    }
    {
        SweepCase c;
        c.id = "bv-limit-signjump";
        c.field = jump;
        c.domain = sym;
        c.family = spec(Family::Stable, 1, 1.0);
        c.target_kind = TargetKind::BVSeminorm;
        c.target_value = kdp_mean(1, 1.0) * bv_seminorm(jump, sym);
        out.push_back(c);

        c.id = "slit-interval-mismatch";
        c.domain = Domain::slit_interval();
        c.target_value = kdp_mean(1, 1.0) * bv_seminorm(jump, c.domain);
        c.expected = Verdict::LimitMismatch;
        out.push_back(c);
    }
    {
        SweepCase c;
        c.id = "constant-field-zero";
        c.field = Field::linear(Vec{0.0}, 1.0);
        c.family = spec(Family::Stable, 1, 2.0);
        c.target_kind = TargetKind::Zero;
        c.target_value = kdp_mean(1, 2.0) * grad_lp_norm(c.field, unit, 2.0);
        out.push_back(c);
    }
    for (double p : {1.0, 2.0}) {
        SweepCase c;
        c.id = p == 1.0 ? "boundary-collapse-tent-p1" : "boundary-collapse-tent-p2";
        c.functional = Functional::CrossEnergy;
        c.field = Field::tent(1);
        c.family = spec(Family::Stable, 1, p);
        c.target_kind = TargetKind::Zero;
        c.target_value = 0.0;
        c.tolerance_scale = c.field.sobolev_norm_p(p);
        out.push_back(c);
    }
    {
        SweepCase c;
        c.id = "local-measure-linear";
        c.functional = Functional::LocalMeasure;
        c.subdomain = Domain::interval(0.25, 0.75);
        c.family = spec(Family::Stable, 1, 2.0);
        c.target_value = kdp_mean(1, 2.0) * grad_lp_norm(x, *c.subdomain, 2.0);
        out.push_back(c);

        c.id = "local-measure-signjump";
        c.field = jump;
        c.domain = sym;
        c.subdomain = Domain::interval(-0.5, 0.5);
        c.family = spec(Family::Stable, 1, 1.0);
        c.target_kind = TargetKind::BVSeminorm;
        c.target_value = kdp_mean(1, 1.0) * bv_seminorm(jump, *c.subdomain);
        out.push_back(c);
    }
    for (int d : {1, 2}) {
        SweepCase c;
        c.id = "generator-gaussian-d" + std::to_string(d);
        c.functional = Functional::Generator;
        c.field = Field::gaussian(d);
        c.domain = Domain::full_space(d);
        c.point = Vec(d);
        c.family = spec(Family::Stable, d, 2.0);
        c.target_kind = TargetKind::Pointwise;
        c.target_value = -c.field.laplacian(c.point) / (2.0 * d);
        out.push_back(c);
    }
    {
        SweepCase c;
        c.id = "dirac-pairing-bump";
        c.functional = Functional::DiracPairing;
        c.field = Field::smooth_bump(1);
        c.domain = Domain::full_space(1);
        c.family = spec(Family::TruncatedPower, 1, 1.0);
        c.target_kind = TargetKind::Pointwise;
        c.target_value = c.field.eval(Vec{0.0});
        out.push_back(c);
    }
    {
        const double K = kdp_mean(1, 2.0), area = sphere_area(1), grad = grad_lp_norm(x, unit, 2.0);
        SweepCase c;
        c.family = spec(Family::Stable, 1, 2.0);
        c.id = "fractional-s-limit";
        c.functional = Functional::FractionalS;
        c.grid = {0.8, 0.9, 0.95, 0.99};
        c.target_value = area / 2.0 * K * grad;
        out.push_back(c);
        c.id = "fractional-ball-limit";
        c.functional = Functional::FractionalBall;
        c.family.family = Family::TruncatedPower;
        c.grid = default_eps_grid();
        c.target_value = area / 1.0 * K * grad;
        out.push_back(c);
        c.id = "fractional-log-limit";
        c.functional = Functional::FractionalLog;
        c.grid = {1e-2, 1e-4, 1e-8, 1e-16, 1e-32};
        c.target_value = area * K * grad;
        out.push_back(c);
    }
    {
        SweepCase c;
        c.id = "slit-gagliardo-divergent";
        c.functional = Functional::GagliardoCutoff;
        c.field = jump;
        c.domain = Domain::slit_interval();
        c.family = spec(Family::Stable, 1, 2.0);
        c.grid = {1e-2, 1e-3, 1e-4, 1e-5};
        c.s = 0.5;
        c.target_kind = TargetKind::Divergent;
        c.target_value = std::numeric_limits<double>::quiet_NaN();
        c.expected = Verdict::Diverged;
        out.push_back(c);
        c.id = "slit-gagliardo-finite";
        c.s = 0.25;
        c.target_kind = TargetKind::Finite;
        c.expected = Verdict::Converged;
        out.push_back(c);
    }
    for (std::size_t i = 0; i < out.size(); ++i) {
        out[i].seed = case_seed(master_seed, i);
        out[i].n = n;
    }
    return out;
}

inline std::vector<SweepReport> run_suite(const std::vector<SweepCase>& cases)
{
    return map_indexed<SweepReport>(cases.size(), [&](std::size_t i) { return run_sweep(cases[i]); });
}

} // namespace bbm
