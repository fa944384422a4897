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

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <limits>
#include <string>
#include <vector>

#include "bbm/constants.hpp"
#include "bbm/core.hpp"
#include "bbm/fields.hpp"
#include "bbm/geometry.hpp"
#include "bbm/kernels.hpp"
#include "bbm/parallel.hpp"
#include "bbm/quadrature.hpp"
#include "bbm/rng.hpp"

namespace bbm {

enum class Mode { MonteCarlo, Deterministic1D };

inline std::string mode_name(Mode m) { return m == Mode::MonteCarlo ? "mc" : "deterministic-1d"; }

struct EnergyEstimate {
    double value = 0.0;
    double std_error = 0.0;
    std::int64_t n_samples = 0;
    double eps = 0.0;
    std::string kernel_id, domain_id, field_id;
    Mode mode = Mode::Deterministic1D;
};

struct McOptions {
    std::int64_t n = 1'000'000;
    std::uint64_t seed = 42;
};

/// Second set of a pair energy: a domain or its complement.
struct PairTarget {
    Domain domain;
    bool complement = false;

    bool contains(const Vec& y) const { return domain.contains(y) != complement; }
};

namespace detail {

inline constexpr std::int64_t kChunk = 1 << 14;

inline std::vector<Interval> target_intervals(const PairTarget& t)
{
    const double inf = std::numeric_limits<double>::infinity();
    if (!t.domain.bounded()) {
        require(t.domain.kind() == DomainKind::FullSpace, "1-D pair energy: unsupported unbounded domain");
        return t.complement ? std::vector<Interval>{} : std::vector<Interval>{{-inf, inf}};
    }
    const auto ivs = t.domain.intervals();
    if (!t.complement) return ivs;
    std::vector<Interval> out;
    double lo = -inf;
    for (const auto& iv : ivs) {
        if (iv.lo > lo) out.push_back({lo, iv.lo});
        lo = iv.hi;
    }
    out.push_back({lo, inf});
    return out;
}

// Expectation of g(r) under the kernel's radial law restricted to r > cut, split at
// the given radii. Closed laws integrate in q = F(r); others integrate g f in r.
template <class G>
quad::Result radial_expectation(const RadialKernel& k, G&& g, std::vector<double> radii, double cut = 0.0,
                                const quad::Options& opt = {})
{
    const double inf = std::numeric_limits<double>::infinity();
    for (double x : k.kinks()) radii.push_back(x);
    std::erase_if(radii, [&](double x) { return !(x > cut) || !std::isfinite(x); });
    std::sort(radii.begin(), radii.end());
    radii.erase(std::unique(radii.begin(), radii.end()), radii.end());

    if (k.has_closed_form_law()) {
        const double q0 = cut > 0.0 ? k.cdf(cut) : 0.0;
        std::vector<double> qs{q0};
        for (double x : radii) {
            const double q = k.cdf(x);
            if (q > qs.back() && q < 1.0) qs.push_back(q);
        }
        if (qs.back() < 1.0) qs.push_back(1.0);
        if (qs.size() < 2) return {};
        auto h = [&](double q) { return g(std::max(k.inverse_cdf(q), 1e-300)); };
        return quad::integrate(h, std::span<const double>(qs), opt);
    }

    auto h = [&](double r) { return g(r) * k.radial_density(r); };
    std::vector<double> pts;
    if (cut > 0.0) pts.push_back(cut);
    double hi = k.support_radius() ? *k.support_radius() : inf;
    for (double x : radii)
        if (x < hi && (pts.empty() || x > pts.back())) pts.push_back(x);
    if (std::isfinite(hi) && (pts.empty() || hi > pts.back())) pts.push_back(hi);
    if (pts.empty()) pts.push_back(1.0);
    quad::Result out;
    if (cut == 0.0) out += quad::integrate_lower_singular(h, pts.front(), opt);
    if (pts.size() >= 2) out += quad::integrate(h, std::span<const double>(pts), opt);
    if (!std::isfinite(hi)) out += quad::integrate_upper_tail(h, pts.back(), opt);
    return out;
}

// Mean over S^{d-1} of the antipodally symmetrized g, (g(w) + g(-w)) / 2; d <= 3.
template <class G>
double symmetric_sphere_mean(int d, G&& g)
{
    auto sym = [&](const Vec& w) { return 0.5 * (g(w) + g(-w)); };
    if (d == 1) return sym(Vec{1.0});
    quad::Options opt;
    opt.abs_tol = 1e-15;
    opt.rel_tol = 1e-11;
    if (d == 2) {
        auto f = [&](double t) { return sym(Vec{std::cos(t), std::sin(t)}); };
        return quad::integrate(f, 0.0, kPi, opt).value / kPi;
    }
    require(d == 3, "sphere mean: deterministic angular quadrature supports d <= 3");
    auto outer = [&](double th) {
        auto inner = [&](double ph) {
            return sym(Vec{std::sin(ph) * std::cos(th), std::sin(ph) * std::sin(th), std::cos(ph)}) * std::sin(ph);
        };
        return quad::integrate(inner, 0.0, kPi, opt).value;
    };
    return quad::integrate(outer, 0.0, kPi, opt).value / (2.0 * kPi);
}

// Pairwise distances between interval endpoints and field breakpoints: the radii at
// which the x-integrals change analytic form.
inline std::vector<double> critical_radii(const std::vector<Interval>& a, const std::vector<Interval>& b,
                                          const std::vector<double>& field_bps)
{
    std::vector<double> pts = field_bps;
    for (const auto* list : {&a, &b})
        for (const auto& iv : *list)
            for (double x : {iv.lo, iv.hi})
                if (std::isfinite(x)) pts.push_back(x);
    std::vector<double> out{1.0};
    for (std::size_t i = 0; i < pts.size(); ++i)
        for (std::size_t j = i + 1; j < pts.size(); ++j) {
            const double dd = std::abs(pts[i] - pts[j]);
            if (dd > 0.0) out.push_back(dd);
        }
    return out;
}

// One-dimensional pair integrand: (I(r) + I(-r)) / (1 ^ r^p) with
// I(s) = int_{x in A, x + s in B} |u(x + s) - u(x)|^p dx.
class PairIntegrand1D {
public:
    PairIntegrand1D(const Field& u, std::vector<Interval> a, std::vector<Interval> b, double p)
        : u_(u), a_(std::move(a)), b_(std::move(b)), p_(p)
    {
        require(u.dim() == 1, "1-D pair energy: field must be one-dimensional");
        if (u.regularity() == Regularity::PiecewiseConstant)
            pieces_ = u.constant_pieces_1d();
        else
            bps_ = u.breakpoints_1d();
    }

    double operator()(double r) const
    {
        double total = 0.0;
        for (double sgn : {1.0, -1.0}) total += one_side(sgn, r);
        return total;
    }

    std::vector<double> radii() const
    {
        std::vector<double> bp = bps_;
        for (const auto& pc : pieces_)
            for (double x : {pc.lo, pc.hi})
                if (std::isfinite(x)) bp.push_back(x);
        return critical_radii(a_, b_, bp);
    }

private:
    // Returns the side integral divided by r^p for r < 1, raw for r >= 1.
    double one_side(double sgn, double r) const
    {
        const double s = sgn * r;
        double total = 0.0;
        for (const auto& ia : a_)
            for (const auto& ib : b_) {
                const double lo = std::max(ia.lo, ib.lo - s), hi = std::min(ia.hi, ib.hi - s);
                if (!(hi > lo)) continue;
                total += pieces_.empty() ? smooth_part(lo, hi, sgn, r) : jump_part(lo, hi, s, r);
            }
        return total;
    }

    double smooth_part(double lo, double hi, double sgn, double r) const
    {
        const Vec w{sgn};
        auto g = [&](double x) {
            const Vec xv{x};
            const double v = r < 1.0 ? u_.difference_quotient(xv, w, r) : u_.eval(Vec{x + sgn * r}) - u_.eval(xv);
            return std::pow(std::abs(v), p_);
        };
        if (u_.kind() == FieldKind::Linear) return (hi - lo) * g(0.5 * (lo + hi));
        std::vector<double> pts{lo};
        for (double b : bps_)
            for (double x : {b, b - sgn * r})
                if (x > lo && x < hi) pts.push_back(x);
        std::sort(pts.begin(), pts.end());
        pts.push_back(hi);
        // Difference quotients of a curved field carry ~1e-16 / r of roundoff, so the
        // inner rule stops near that floor instead of chasing it.
        quad::Options opt;
        opt.abs_tol = 1e-15;
        opt.rel_tol = 1e-11;
        opt.max_intervals = 64;
        return quad::integrate(g, std::span<const double>(pts), opt).value;
    }

    double jump_part(double lo, double hi, double s, double r) const
    {
        const double scale = r < 1.0 ? std::pow(r, -p_) : 1.0;
        double total = 0.0;
        for (const auto& pi : pieces_)
            for (const auto& pj : pieces_) {
                if (pi.value == pj.value) continue;
                // x in [lo, hi] n P_i with x + s in P_j.
                const double a = std::max(lo, pi.lo), b = std::min(hi, pi.hi);
                const double len = std::min(b, pj.hi - s) - std::max(a, pj.lo - s);
                if (len > 0.0) total += len * std::pow(std::abs(pj.value - pi.value), p_);
            }
        return total * scale;
    }

    Field u_;
    std::vector<Interval> a_, b_;
    double p_;
    std::vector<double> bps_;
    std::vector<Piece> pieces_;
};

inline quad::Options deterministic_options()
{
    quad::Options opt;
    opt.abs_tol = 1e-13;
    opt.rel_tol = 1e-11;
    opt.max_intervals = 20000;
    return opt;
}

inline EnergyEstimate pair_energy_1d(const Field& u, const Domain& a, const PairTarget& b, const RadialKernel& k,
                                     double cut = 0.0)
{
    require(a.dim() == 1 && b.domain.dim() == 1 && k.dim() == 1, "deterministic mode is one-dimensional");
    require(a.bounded(), "pair energy: first domain must be bounded");
    const PairIntegrand1D J(u, a.intervals(), target_intervals(b), k.p());
    auto opt = deterministic_options();
    if (u.regularity() != Regularity::PiecewiseConstant && u.kind() != FieldKind::Linear) opt.rel_tol = 1e-9;
    const auto res = radial_expectation(k, J, J.radii(), cut, opt);
    EnergyEstimate e;
    e.value = 0.5 * res.checked("deterministic energy for " + u.id() + " on " + a.id());
    e.eps = k.eps();
    e.kernel_id = k.id();
    e.domain_id = a.id();
    e.field_id = u.id();
    e.mode = Mode::Deterministic1D;
    return e;
}

inline EnergyEstimate pair_energy_mc(const Field& u, const Domain& a, const PairTarget& b, const RadialKernel& k,
                                     const McOptions& mc)
{
    require(a.dim() == k.dim() && u.dim() == k.dim() && b.domain.dim() == k.dim(), "pair energy: dimension mismatch");
    require(a.bounded(), "pair energy: first domain must be bounded");
    require(mc.n >= 2, "pair energy: need at least two samples");
    k.prepare();
    const double vol = a.volume();
    const double p = k.p();
    const auto chunks = static_cast<std::size_t>((mc.n + kChunk - 1) / kChunk);
    struct Sums {
        double s1 = 0.0, s2 = 0.0;
    };
    auto parts = map_indexed<Sums>(chunks, [&](std::size_t c) {
        Stream rng(mc.seed, c);
        const std::int64_t m = std::min<std::int64_t>(kChunk, mc.n - static_cast<std::int64_t>(c) * kChunk);
        CompensatedSum s1, s2;
        for (std::int64_t i = 0; i < m; ++i) {
            const Vec x = a.sample_uniform(rng);
            const double r = k.sample_radius(rng);
            const Vec w = rng.unit_vector(k.dim());
            const Vec y = x + r * w;
            double v = 0.0;
            if (b.contains(y)) {
                const double diff = r < 1.0 ? u.difference_quotient(x, w, r) : u.eval(y) - u.eval(x);
                v = vol * std::pow(std::abs(diff), p);
                if (!std::isfinite(v))
                    throw NumericalError("non-finite field difference at x = " + format_double(x[0]) +
                                             ", r = " + format_double(r),
                                         std::numeric_limits<double>::infinity());
            }
            s1.add(v);
            s2.add(v * v);
        }
        return Sums{s1.value(), s2.value()};
    });
    CompensatedSum s1, s2;
    for (const auto& s : parts) {
        s1.add(s.s1);
        s2.add(s.s2);
    }
    const double n = static_cast<double>(mc.n);
    const double mean = s1.value() / n;
    const double var = std::max(0.0, (s2.value() - n * mean * mean) / (n - 1.0));
    EnergyEstimate e;
    e.value = mean;
    e.std_error = std::sqrt(var / n);
    e.n_samples = mc.n;
    e.eps = k.eps();
    e.kernel_id = k.id();
    e.domain_id = a.id();
    e.field_id = u.id();
    e.mode = Mode::MonteCarlo;
    return e;
}

} // namespace detail

/// int_Omega int_Omega |u(x) - u(y)|^p nu(x - y) dy dx by importance-sampled Monte Carlo.
inline EnergyEstimate energy(const Field& u, const Domain& dom, const RadialKernel& k, const McOptions& mc = {})
{
    return detail::pair_energy_mc(u, dom, {dom, false}, k, mc);
}

/// Deterministic one-dimensional version of energy().
inline EnergyEstimate energy_1d(const Field& u, const Domain& dom, const RadialKernel& k)
{
    return detail::pair_energy_1d(u, dom, {dom, false}, k);
}

/// int_Omega int_{Omega^c} |u(x) - u(y)|^p nu(x - y) dy dx.
inline EnergyEstimate cross_energy(const Field& u, const Domain& dom, const RadialKernel& k, const McOptions& mc = {})
{
    return detail::pair_energy_mc(u, dom, {dom, true}, k, mc);
}

inline EnergyEstimate cross_energy_1d(const Field& u, const Domain& dom, const RadialKernel& k)
{
    return detail::pair_energy_1d(u, dom, {dom, true}, k);
}

/// Energy over pairs x in a, y in b (or y outside b when complement is set).
inline EnergyEstimate pair_energy(const Field& u, const Domain& a, const PairTarget& b, const RadialKernel& k,
                                  const McOptions& mc = {})
{
    return detail::pair_energy_mc(u, a, b, k, mc);
}

inline EnergyEstimate pair_energy_1d(const Field& u, const Domain& a, const PairTarget& b, const RadialKernel& k)
{
    return detail::pair_energy_1d(u, a, b, k);
}

/// mu_eps(E) = int_E int_Omega |u(x) - u(y)|^p nu(x - y) dy dx for E compactly inside Omega.
inline EnergyEstimate local_measure(const Field& u, const Domain& dom, const Domain& sub, const RadialKernel& k,
                                    const McOptions& mc = {})
{
    require(compactly_contains(dom, sub), "local_measure: subdomain " + sub.id() + " is not compactly contained in " + dom.id());
    return detail::pair_energy_mc(u, sub, {dom, false}, k, mc);
}

inline EnergyEstimate local_measure_1d(const Field& u, const Domain& dom, const Domain& sub, const RadialKernel& k)
{
    require(compactly_contains(dom, sub), "local_measure: subdomain " + sub.id() + " is not compactly contained in " + dom.id());
    return detail::pair_energy_1d(u, sub, {dom, false}, k);
}

/// L_eps u(x) = -(1/2) int (u(x + h) + u(x - h) - 2 u(x)) nu(h) dh for p = 2 and smooth u.
inline double generator(const Field& u, const Vec& x, const RadialKernel& k)
{
    require(k.p() == 2.0, "generator: kernel exponent p must be 2");
    require(u.regularity() == Regularity::Smooth, "generator: field must be smooth");
    require(u.dim() == k.dim() && x.dim() == k.dim(), "generator: dimension mismatch");
    const int d = k.dim();
    const double ux = u.eval(x);
    const double small = u.laplacian(x) / d;
    // Sphere mean of the second difference, divided by (1 ^ r^2).
    auto g = [&](double r) {
        if (r < 1e-4) return small;
        const double m = detail::symmetric_sphere_mean(d, [&](const Vec& w) {
            const Vec h = r * w;
            return u.eval(x + h) + u.eval(x - h) - 2.0 * ux;
        });
        return r < 1.0 ? m / (r * r) : m;
    };
    // Second differences lose about 1e-16 / r^2 to cancellation, so ask for less.
    auto opt = detail::deterministic_options();
    opt.rel_tol = 1e-9;
    opt.abs_tol = 1e-10;
    const auto res = detail::radial_expectation(k, g, {}, 0.0, opt);
    return -0.5 * res.checked("generator(" + u.id() + ")");
}

/// int phi(h) (1 ^ |h|^p) nu(h) dh: pairing with the unit-mass p-Levy measure, p = 1.
inline double dirac_pairing(const Field& phi, const RadialKernel& k)
{
    require(k.p() == 1.0, "dirac_pairing: kernel exponent p must be 1");
    require(phi.dim() == k.dim(), "dirac_pairing: dimension mismatch");
    const int d = k.dim();
    const Vec origin(d);
    auto g = [&](double r) { return detail::symmetric_sphere_mean(d, [&](const Vec& w) { return phi.eval(r * w); }); };
    std::vector<double> radii;
    if (phi.kind() == FieldKind::SmoothBump || phi.kind() == FieldKind::OddBump) radii.push_back(phi.radius());
    return detail::radial_expectation(k, g, radii, 0.0, detail::deterministic_options()).checked("dirac_pairing");
}

/// int phi(h) nu(h) dh without the (1 ^ |h|^p) weight. Diverges for p = 1 kernels
/// that are not integrable at the origin; the result then reports non-convergence.
inline quad::Result raw_dirac_pairing(const Field& phi, const RadialKernel& k)
{
    require(phi.dim() == k.dim(), "raw_dirac_pairing: dimension mismatch");
    const int d = k.dim();
    std::vector<double> radii;
    if (phi.kind() == FieldKind::SmoothBump || phi.kind() == FieldKind::OddBump) radii.push_back(phi.radius());
    // Integrate the profile in r directly; the q-route clamps r away from 0 and would hide a divergence.
    const double area = sphere_area(d);
    auto f = [&](double r) {
        const double m = detail::symmetric_sphere_mean(d, [&](const Vec& w) { return phi.eval(r * w); });
        return area * m * k.profile(r) * std::pow(r, d - 1);
    };
    std::vector<double> pts;
    for (double x : k.kinks()) pts.push_back(x);
    for (double x : radii) pts.push_back(x);
    std::sort(pts.begin(), pts.end());
    pts.erase(std::unique(pts.begin(), pts.end()), pts.end());
    const double hi = k.support_radius() ? *k.support_radius() : std::numeric_limits<double>::infinity();
    std::erase_if(pts, [&](double x) { return x > hi; });
    quad::Result out = quad::integrate_lower_singular(f, pts.front(), detail::deterministic_options());
    if (pts.size() >= 2) out += quad::integrate(f, std::span<const double>(pts), detail::deterministic_options());
    if (!std::isfinite(hi)) out += quad::integrate_upper_tail(f, pts.back(), detail::deterministic_options());
    return out;
}

/// Gagliardo seminorm int int |u(x) - u(y)|^p / |x - y|^{d + s p} over Omega x Omega,
/// restricted to |x - y| >= cutoff when cutoff > 0. One-dimensional domains.
inline double gagliardo(const Field& u, const Domain& dom, double s, double p, double cutoff = 0.0)
{
    require(s > 0.0 && s < 1.0, "gagliardo: s must lie in (0, 1), got " + format_double(s));
    require(p >= 1.0, "gagliardo: p must be >= 1");
    require(cutoff >= 0.0, "gagliardo: cutoff must be >= 0");
    require(dom.dim() == 1, "gagliardo: deterministic seminorm supports d = 1");
    // |h|^{-d-sp} is the stable profile with eps = p(1 - s), up to its normalizer.
    const double eps = p * (1.0 - s);
    const auto k = make_stable(1, p, eps);
    const double a = eps * (p - eps) / (p * sphere_area(1));
    return detail::pair_energy_1d(u, dom, {dom, false}, k, cutoff).value / a;
}

/// (1/|log eps|) int int_{|x-y| > eps} |u(x) - u(y)|^p / |x - y|^{d+p}, one-dimensional domains.
inline double log_scaled_seminorm(const Field& u, const Domain& dom, double p, double eps)
{
    require(eps > 0.0 && eps < 1.0, "log_scaled_seminorm: eps must lie in (0, 1)");
    require(dom.dim() == 1 && u.dim() == 1, "log_scaled_seminorm: one-dimensional only");
    const detail::PairIntegrand1D J(u, dom.intervals(), dom.intervals(), p);
    // With r = e^t the integrand is J(r) min(1, r^p) r^{-p}.
    auto g = [&](double t) {
        const double r = std::exp(t);
        return r < 1.0 ? J(r) : J(r) * std::pow(r, -p);
    };
    const auto ivs = dom.intervals();
    const double diam = ivs.back().hi - ivs.front().lo;
    std::vector<double> pts{std::log(eps)};
    for (double c : J.radii())
        if (c > eps && c < diam) pts.push_back(std::log(c));
    std::sort(pts.begin(), pts.end());
    pts.erase(std::unique(pts.begin(), pts.end()), pts.end());
    if (diam > eps) pts.push_back(std::log(diam));
    if (pts.size() < 2) return 0.0;
    const double v = quad::integrate(g, std::span<const double>(pts), detail::deterministic_options())
                         .checked("log_scaled_seminorm");
    return v / std::abs(std::log(eps));
}

} // namespace bbm
