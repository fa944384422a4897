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
#include <functional>
#include <limits>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <vector>

// Boost 1.74's pchip calls unqualified isnan.
#include <math.h>
#include <boost/math/interpolators/pchip.hpp>

#include "bbm/core.hpp"
#include "bbm/quadrature.hpp"
#include "bbm/rng.hpp"

namespace bbm {

enum class Family { Stable, Rescaled, TruncatedPower, SmoothedPower, LogLimit, SmoothedLogBall, Custom };

inline std::string family_name(Family f)
{
    switch (f) {
    case Family::Stable: return "stable";
    case Family::Rescaled: return "rescaled";
    case Family::TruncatedPower: return "truncated-power";
    case Family::SmoothedPower: return "smoothed-power";
    case Family::LogLimit: return "log-limit";
    case Family::SmoothedLogBall: return "smoothed-log-ball";
    case Family::Custom: return "custom";
    }
    return "custom";
}

inline Family parse_family(const std::string& s)
{
    for (auto f : {Family::Stable, Family::Rescaled, Family::TruncatedPower, Family::SmoothedPower, Family::LogLimit,
                   Family::SmoothedLogBall})
        if (family_name(f) == s) return f;
    throw std::invalid_argument("unknown kernel family '" + s +
                                "' (expected stable, rescaled, truncated-power, smoothed-power, log-limit, "
                                "smoothed-log-ball)");
}

/// Flat description of a family member. Rescaled kernels use a stable base
/// with exponent base_eps. SmoothedPower with beta == -dim is the log case.
struct KernelSpec {
    Family family = Family::Stable;
    int dim = 1;
    double p = 2.0;
    double eps = 0.1;
    double beta = 0.0;
    double eps0 = 0.5;
    double base_eps = 0.5;

    bool operator==(const KernelSpec&) const = default;
};

namespace detail {

// Inverse-CDF table for laws without a closed form: PCHIP in (log r, q) both ways,
// with power-law extrapolation past the first and last node.
struct LawTable {
    static constexpr int kNodes = 4096;
    static constexpr double kLostMass = 1e-9;

    using Pchip = boost::math::interpolators::pchip<std::vector<double>>;
    std::optional<Pchip> forward;
    std::optional<Pchip> inverse;
    double r_lo = 0.0, r_hi = 0.0, q_lo = 0.0, q_hi = 1.0;
    double k_lo = 1.0, k_hi = 1.0;
    bool bounded = false;
};

} // namespace detail

class RadialKernel;
inline std::shared_ptr<detail::LawTable> build_law_table(const RadialKernel& k);

/// One member nu_eps of a radial p-Levy kernel family. Immutable and cheap to copy.
class RadialKernel {
public:
    struct Parts {
        KernelSpec spec;
        std::string id;
        std::function<double(double)> profile;
        // |S^{d-1}| (1 ^ r^p) nu(r) r^{d-1}; derived from profile when empty.
        std::function<double(double)> density;
        std::optional<double> support;
        std::vector<double> kinks;
        std::function<double(double)> cdf;
        std::function<double(double)> inverse_cdf;
    };

    explicit RadialKernel(Parts parts) : s_(std::make_shared<State>())
    {
        require(parts.spec.dim >= 1 && parts.spec.dim <= kMaxDim, "kernel: dimension out of range");
        require(parts.spec.p >= 1.0, "kernel: p must be >= 1");
        require(static_cast<bool>(parts.profile), "kernel: profile required");
        if (!parts.density) {
            const int d = parts.spec.dim;
            const double p = parts.spec.p;
            const double area = sphere_area(d);
            parts.density = [prof = parts.profile, d, p, area](double r) {
                return area * std::min(1.0, std::pow(r, p)) * prof(r) * std::pow(r, d - 1);
            };
        }
        auto& k = parts.kinks;
        if (parts.support) k.push_back(*parts.support);
        k.push_back(1.0);
        std::sort(k.begin(), k.end());
        k.erase(std::unique(k.begin(), k.end()), k.end());
        if (parts.support) std::erase_if(k, [&](double x) { return x > *parts.support; });
        std::erase_if(k, [](double x) { return !(x > 0.0); });
        s_->parts = std::move(parts);
    }

    const KernelSpec& spec() const noexcept { return s_->parts.spec; }
    int dim() const noexcept { return spec().dim; }
    double p() const noexcept { return spec().p; }
    double eps() const noexcept { return spec().eps; }
    Family family() const noexcept { return spec().family; }
    const std::string& id() const noexcept { return s_->parts.id; }

    double profile(double r) const { return s_->parts.profile(r); }
    double radial_density(double r) const
    {
        if (support_radius() && r >= *support_radius()) return 0.0;
        return s_->parts.density(r);
    }
    std::optional<double> support_radius() const { return s_->parts.support; }
    /// Radii where the profile or its weight is not smooth, ascending; includes 1 and the support edge.
    const std::vector<double>& kinks() const noexcept { return s_->parts.kinks; }
    bool has_closed_form_law() const noexcept { return static_cast<bool>(s_->parts.cdf); }

    /// Cumulative mass of the radial probability law (closed form or table).
    double cdf(double r) const
    {
        if (!(r > 0.0)) return 0.0;
        if (has_closed_form_law()) return s_->parts.cdf(r);
        const auto& t = table();
        if (t.bounded && r >= t.r_hi) return 1.0;
        if (r <= t.r_lo) return t.q_lo * std::pow(r / t.r_lo, t.k_lo);
        if (r >= t.r_hi) return 1.0 - (1.0 - t.q_hi) * std::pow(r / t.r_hi, -t.k_hi);
        return std::clamp((*t.forward)(std::log(r)), 0.0, 1.0);
    }

    double inverse_cdf(double q) const
    {
        require(q >= 0.0 && q <= 1.0, "inverse_cdf: q must lie in [0, 1]");
        if (has_closed_form_law()) return s_->parts.inverse_cdf(q);
        const auto& t = table();
        if (q <= t.q_lo) return t.r_lo * std::pow(q / t.q_lo, 1.0 / t.k_lo);
        if (q >= t.q_hi) {
            if (t.bounded) return t.r_hi;
            return t.r_hi * std::pow((1.0 - q) / (1.0 - t.q_hi), -1.0 / t.k_hi);
        }
        return std::exp((*t.inverse)(q));
    }

    double sample_radius(Stream& rng) const { return inverse_cdf(rng.uniform()); }

    /// h in R^d with |h| from the weighted radial law and a uniform direction.
    Vec sample_offset(Stream& rng) const
    {
        const double r = sample_radius(rng);
        return r * rng.unit_vector(dim());
    }

    /// Forces the inverse-CDF table to be built now (no-op for closed-form laws).
    void prepare() const
    {
        if (!has_closed_form_law()) (void)table();
    }

private:
    struct State {
        Parts parts;
        mutable std::once_flag once;
        mutable std::shared_ptr<detail::LawTable> table;
    };

    const detail::LawTable& table() const
    {
        std::call_once(s_->once, [this] { s_->table = build_law_table(*this); });
        return *s_->table;
    }

    std::shared_ptr<State> s_;
};

namespace detail {

inline std::string kernel_id(const KernelSpec& s)
{
    std::string id = family_name(s.family) + "(d=" + std::to_string(s.dim) + ",p=" + format_double(s.p) +
                     ",eps=" + format_double(s.eps);
    switch (s.family) {
    case Family::Rescaled: id += ",base_eps=" + format_double(s.base_eps); break;
    case Family::TruncatedPower: id += ",beta=" + format_double(s.beta); break;
    case Family::SmoothedPower: id += ",beta=" + format_double(s.beta) + ",eps0=" + format_double(s.eps0); break;
    case Family::LogLimit:
    case Family::SmoothedLogBall: id += ",eps0=" + format_double(s.eps0); break;
    default: break;
    }
    return id + ")";
}

// Integral of the radial weight over (lo, hi), split at the kernel's kinks.
// lo == 0 and hi == inf are handled by the singular and tail transforms.
template <class W>
quad::Result radial_integral(const RadialKernel& k, W&& weight, double lo, double hi, const quad::Options& opt = {})
{
    const int d = k.dim();
    const double area = sphere_area(d);
    auto f = [&](double r) { return area * weight(r) * k.profile(r) * std::pow(r, d - 1); };
    if (k.support_radius()) hi = std::min(hi, *k.support_radius());
    quad::Result out;
    if (!(hi > lo)) return out;

    std::vector<double> pts;
    for (double x : k.kinks())
        if (x > lo && x < hi) pts.push_back(x);
    if (lo > 0.0) pts.insert(pts.begin(), lo);
    if (std::isfinite(hi)) pts.push_back(hi);
    if (lo == 0.0) {
        if (pts.empty()) pts.push_back(1.0);
        out += quad::integrate_lower_singular(f, pts.front(), opt);
    }
    if (pts.size() >= 2) out += quad::integrate(f, std::span<const double>(pts), opt);
    if (!std::isfinite(hi)) out += quad::integrate_upper_tail(f, pts.back(), opt);
    return out;
}

} // namespace detail

/// |S^{d-1}| int_0^inf (1 ^ r^p) nu(r) r^{d-1} dr, computed from the profile alone.
inline quad::Result normalization_result(const RadialKernel& k, const quad::Options& opt = {})
{
    const double p = k.p();
    return detail::radial_integral(k, [p](double r) { return std::min(1.0, std::pow(r, p)); }, 0.0,
                                   std::numeric_limits<double>::infinity(), opt);
}

inline double normalization(const RadialKernel& k)
{
    return normalization_result(k).checked("normalization(" + k.id() + ")");
}

/// Tail mass int_{|h| > delta} (1 ^ |h|^p) nu(h) dh.
inline double mass_outside(const RadialKernel& k, double delta)
{
    require(delta > 0.0, "mass_outside: delta must be positive");
    const double p = k.p();
    return detail::radial_integral(k, [p](double r) { return std::min(1.0, std::pow(r, p)); }, delta,
                                   std::numeric_limits<double>::infinity())
        .checked("mass_outside(" + k.id() + ")");
}

/// Truncated moment int_{|h| <= R} (1 ^ |h|^beta) nu(h) dh.
inline double weighted_moment(const RadialKernel& k, double beta, double R)
{
    require(beta >= k.p(), "weighted_moment: beta must be >= p");
    require(R > 0.0, "weighted_moment: R must be positive");
    return detail::radial_integral(k, [beta](double r) { return std::min(1.0, std::pow(r, beta)); }, 0.0, R)
        .checked("weighted_moment(" + k.id() + ")");
}

inline std::shared_ptr<detail::LawTable> build_law_table(const RadialKernel& k)
{
    using detail::LawTable;
    auto t = std::make_shared<LawTable>();
    const double inf = std::numeric_limits<double>::infinity();
    auto dens = [&](double r) { return k.radial_density(r); };
    auto mass = [&](double a, double b) {
        const double p = k.p();
        return detail::radial_integral(k, [p](double r) { return std::min(1.0, std::pow(r, p)); }, a, b)
            .checked("inverse-CDF table for " + k.id());
    };

    const double total = mass(0.0, inf);
    if (!(total > 0.0) || !std::isfinite(total))
        throw NumericalError("inverse-CDF table for " + k.id() + ": non-finite or zero total mass", inf);

    const double lost = LawTable::kLostMass * total;
    double r_lo = k.kinks().front();
    double below = mass(0.0, r_lo);
    for (int i = 0; i < 400 && below > lost; ++i) {
        r_lo *= 0.1;
        below = mass(0.0, r_lo);
    }
    double r_hi = 1.0;
    double above = 0.0;
    if (k.support_radius()) {
        r_hi = *k.support_radius();
        t->bounded = true;
    } else {
        r_hi = std::max(1.0, k.kinks().back());
        above = mass(r_hi, inf);
        for (int i = 0; i < 400 && above > lost; ++i) {
            r_hi *= 10.0;
            above = mass(r_hi, inf);
        }
    }

    std::vector<double> lr(LawTable::kNodes), q(LawTable::kNodes);
    const double l0 = std::log(r_lo), l1 = std::log(r_hi);
    CompensatedSum cum;
    cum.add(below);
    double prev = r_lo;
    for (int i = 0; i < LawTable::kNodes; ++i) {
        const double x = i + 1 == LawTable::kNodes ? r_hi : std::exp(l0 + (l1 - l0) * i / (LawTable::kNodes - 1));
        if (i > 0) cum.add(mass(prev, x));
        lr[i] = std::log(x);
        q[i] = cum.value() / total;
        prev = x;
        if (!std::isfinite(q[i])) throw NumericalError("inverse-CDF table for " + k.id() + ": non-finite CDF", inf);
    }
    if (t->bounded) q.back() = 1.0;

    // Keep strictly increasing q so both interpolants are well defined.
    std::vector<double> xs, ys;
    for (std::size_t i = 0; i < q.size(); ++i) {
        if (!ys.empty() && !(q[i] > ys.back())) continue;
        xs.push_back(lr[i]);
        ys.push_back(q[i]);
    }
    if (xs.size() < 4) throw NumericalError("inverse-CDF table for " + k.id() + ": degenerate CDF", inf);

    t->r_lo = std::exp(xs.front());
    t->r_hi = std::exp(xs.back());
    t->q_lo = ys.front();
    t->q_hi = ys.back();
    t->k_lo = t->q_lo > 0.0 ? std::max(1e-6, t->r_lo * dens(t->r_lo) / total / t->q_lo) : 1.0;
    if (!t->bounded && t->q_hi < 1.0)
        t->k_hi = std::max(1e-6, t->r_hi * dens(t->r_hi) / total / (1.0 - t->q_hi));
    t->forward.emplace(std::vector<double>(xs), std::vector<double>(ys));
    t->inverse.emplace(std::move(ys), std::move(xs));
    return t;
}

/// Stable family: nu(h) = a |h|^{-d-p+eps}, a = eps (p - eps) / (p |S^{d-1}|).
inline RadialKernel make_stable(int dim, double p, double eps)
{
    require(dim >= 1, "make_stable: dim must be >= 1");
    require(p >= 1.0, "make_stable: p must be >= 1");
    require(eps > 0.0 && eps < p, "make_stable: eps must lie in (0, p), got " + format_double(eps));
    const double area = sphere_area(dim);
    const double a = eps * (p - eps) / (p * area);
    require(a > 0.0, "make_stable: normalizer vanishes");
    const double q1 = (p - eps) / p;
    RadialKernel::Parts parts;
    parts.spec = {Family::Stable, dim, p, eps, 0.0, 0.5, 0.5};
    parts.id = detail::kernel_id(parts.spec);
    parts.profile = [a, dim, p, eps](double r) { return a * std::pow(r, -dim - p + eps); };
    parts.density = [q1, p, eps](double r) {
        return r <= 1.0 ? eps * q1 * std::pow(r, eps - 1.0) : (p - eps) * (eps / p) * std::pow(r, eps - p - 1.0);
    };
    parts.cdf = [q1, p, eps](double r) {
        return r <= 1.0 ? q1 * std::pow(r, eps) : 1.0 - (eps / p) * std::pow(r, eps - p);
    };
    parts.inverse_cdf = [q1, p, eps](double q) {
        if (q <= q1) return std::exp(std::log(q / q1) / eps);
        return std::exp(std::log((1.0 - q) * p / eps) / (eps - p));
    };
    return RadialKernel(std::move(parts));
}

/// Rescaled family built from a normalized base profile:
/// eps^{-d-p} nu(h/eps) on |h| <= eps, eps^{-d} |h|^{-p} nu(h/eps) on eps < |h| <= 1,
/// eps^{-d} nu(h/eps) beyond. Its weighted radial law is the base law scaled by eps.
inline RadialKernel make_rescaled(const RadialKernel& base, double eps)
{
    require(eps > 0.0 && eps <= 1.0, "make_rescaled: eps must lie in (0, 1], got " + format_double(eps));
    const auto m = normalization_result(base);
    if (!m.converged || std::abs(m.value - 1.0) > 1e-6)
        throw std::invalid_argument("make_rescaled: base profile is not normalized (measured mass " +
                                    format_double(m.value) + ", error " + format_double(m.abs_error) + ")");
    const int d = base.dim();
    const double p = base.p();
    RadialKernel::Parts parts;
    parts.spec = base.spec();
    parts.spec.family = Family::Rescaled;
    parts.spec.base_eps = base.eps();
    parts.spec.eps = eps;
    parts.id = base.family() == Family::Stable ? detail::kernel_id(parts.spec)
                                                : "rescaled(" + base.id() + ",eps=" + format_double(eps) + ")";
    parts.profile = [base, d, p, eps](double r) {
        const double v = base.profile(r / eps);
        if (r <= eps) return std::pow(eps, -d - p) * v;
        if (r <= 1.0) return std::pow(eps, -d) * std::pow(r, -p) * v;
        return std::pow(eps, -d) * v;
    };
    parts.density = [base, eps](double r) { return base.radial_density(r / eps) / eps; };
    if (base.support_radius()) parts.support = eps * *base.support_radius();
    parts.kinks = {eps};
    for (double x : base.kinks()) parts.kinks.push_back(eps * x);
    parts.cdf = [base, eps](double r) { return base.cdf(r / eps); };
    parts.inverse_cdf = [base, eps](double q) { return eps * base.inverse_cdf(q); };
    return RadialKernel(std::move(parts));
}

inline RadialKernel make_rescaled_stable(int dim, double p, double base_eps, double eps)
{
    return make_rescaled(make_stable(dim, p, base_eps), eps);
}

/// (d + beta) / (|S^{d-1}| eps^{d+beta}) |h|^{beta-p} on the ball of radius eps.
inline RadialKernel make_truncated_power(int dim, double p, double beta, double eps)
{
    require(dim >= 1 && p >= 1.0, "make_truncated_power: need dim >= 1 and p >= 1");
    require(beta > -dim, "make_truncated_power: beta must exceed -dim, got " + format_double(beta));
    require(eps > 0.0 && eps < 1.0, "make_truncated_power: eps must lie in (0, 1), got " + format_double(eps));
    const double k = dim + beta;
    const double c = k / (sphere_area(dim) * std::pow(eps, k));
    RadialKernel::Parts parts;
    parts.spec = {Family::TruncatedPower, dim, p, eps, beta, 0.5, 0.5};
    parts.id = detail::kernel_id(parts.spec);
    parts.profile = [c, beta, p, eps](double r) { return r < eps ? c * std::pow(r, beta - p) : 0.0; };
    parts.density = [k, eps](double r) { return r < eps ? k / eps * std::pow(r / eps, k - 1.0) : 0.0; };
    parts.support = eps;
    parts.cdf = [k, eps](double r) { return r >= eps ? 1.0 : std::pow(r / eps, k); };
    parts.inverse_cdf = [k, eps](double q) { return eps * std::pow(q, 1.0 / k); };
    return RadialKernel(std::move(parts));
}

/// 1 / (|S^{d-1}| log(eps0/eps)) |h|^{-d-p} on the annulus eps < |h| < eps0.
inline RadialKernel make_log_limit(int dim, double p, double eps, double eps0)
{
    require(dim >= 1 && p >= 1.0, "make_log_limit: need dim >= 1 and p >= 1");
    require(eps > 0.0 && eps < eps0 && eps0 <= 1.0, "make_log_limit: need 0 < eps < eps0 <= 1");
    const double L = std::log(eps0 / eps);
    const double c = 1.0 / (sphere_area(dim) * L);
    RadialKernel::Parts parts;
    parts.spec = {Family::LogLimit, dim, p, eps, 0.0, eps0, 0.5};
    parts.id = detail::kernel_id(parts.spec);
    parts.profile = [c, dim, p, eps, eps0](double r) {
        return r > eps && r < eps0 ? c * std::pow(r, -dim - p) : 0.0;
    };
    parts.density = [L, eps, eps0](double r) { return r > eps && r < eps0 ? 1.0 / (L * r) : 0.0; };
    parts.support = eps0;
    parts.kinks = {eps};
    parts.cdf = [L, eps, eps0](double r) {
        if (r <= eps) return 0.0;
        if (r >= eps0) return 1.0;
        return std::log(r / eps) / L;
    };
    parts.inverse_cdf = [L, eps](double q) { return eps * std::exp(q * L); };
    return RadialKernel(std::move(parts));
}

/// Normalizing constant b_eps of the smoothed family, from its t-integral.
/// beta == -dim selects the logarithmic case.
inline quad::Result smoothed_power_b(int dim, double beta, double eps, double eps0)
{
    require(dim >= 1, "smoothed_power_b: dim must be >= 1");
    require(eps > 0.0 && eps < eps0, "smoothed_power_b: need 0 < eps < eps0");
    const double t0 = eps / (eps + eps0);
    if (beta == -dim) {
        auto f = [dim](double t) { return std::pow(1.0 - t, dim - 1) / t; };
        auto res = quad::integrate(f, t0, 1.0);
        const double L = std::abs(std::log(eps));
        res.value /= L;
        res.abs_error /= L;
        return res;
    }
    require(beta > -dim, "smoothed_power_b: beta must be >= -dim");
    const double k = dim + beta;
    // eps^{d+beta} t^{-d-beta-1} = (eps/t)^{d+beta} / t keeps the integrand well scaled.
    auto f = [dim, k, eps](double t) { return std::pow(eps / t, k) * std::pow(1.0 - t, dim - 1) / t; };
    return quad::integrate(f, t0, 1.0);
}

/// (|h| + eps)^beta |h|^{-p} / (|S^{d-1}| b_eps) on the ball of radius eps0; for
/// beta == -dim the extra 1/|log eps| factor of the logarithmic case is included.
inline RadialKernel make_smoothed_power(int dim, double p, double beta, double eps, double eps0)
{
    require(dim >= 1 && p >= 1.0, "make_smoothed_power: need dim >= 1 and p >= 1");
    require(eps > 0.0 && eps < eps0 && eps0 < 1.0, "make_smoothed_power: need 0 < eps < eps0 < 1");
    require(beta >= -dim, "make_smoothed_power: beta must be >= -dim");
    const bool log_case = beta == -dim;
    const double b = smoothed_power_b(dim, beta, eps, eps0).checked("smoothed-power b_eps");
    const double scale = log_case ? std::abs(std::log(eps)) * b : b;
    const double c = 1.0 / (sphere_area(dim) * scale);
    RadialKernel::Parts parts;
    parts.spec = {Family::SmoothedPower, dim, p, eps, beta, eps0, 0.5};
    parts.id = detail::kernel_id(parts.spec);
    parts.profile = [c, beta, p, eps, eps0](double r) {
        return r < eps0 ? c * std::pow(r + eps, beta) * std::pow(r, -p) : 0.0;
    };
    parts.density = [scale, beta, dim, eps, eps0](double r) {
        return r < eps0 ? std::pow(r + eps, beta) * std::pow(r, dim - 1) / scale : 0.0;
    };
    parts.support = eps0;
    parts.kinks = {eps};
    return RadialKernel(std::move(parts));
}

/// The third smoothed kernel exactly as printed: (|h| + eps)^{-d-p} / (|S^{d-1}| |log eps| b_eps)
/// on the ball of radius eps, with b_eps integrated from eps/(eps + eps0). Its
/// p-Levy mass is not 1 unless the cutoff is eps0.
inline RadialKernel make_smoothed_log_ball(int dim, double p, double eps, double eps0)
{
    require(dim >= 1 && p >= 1.0, "make_smoothed_log_ball: need dim >= 1 and p >= 1");
    require(eps > 0.0 && eps < eps0 && eps0 < 1.0, "make_smoothed_log_ball: need 0 < eps < eps0 < 1");
    const double t0 = eps / (eps + eps0);
    const double L = std::abs(std::log(eps));
    auto f = [dim, p](double t) { return std::pow(1.0 - t, dim + p - 1.0) / t; };
    const double b = quad::integrate(f, t0, 1.0).checked("smoothed-log-ball b_eps") / L;
    const double c = 1.0 / (sphere_area(dim) * L * b);
    RadialKernel::Parts parts;
    parts.spec = {Family::SmoothedLogBall, dim, p, eps, 0.0, eps0, 0.5};
    parts.id = detail::kernel_id(parts.spec);
    parts.profile = [c, dim, p, eps](double r) { return r < eps ? c * std::pow(r + eps, -dim - p) : 0.0; };
    parts.support = eps;
    return RadialKernel(std::move(parts));
}

/// Kernel from an arbitrary radial profile; its law is tabulated on first use.
inline RadialKernel make_custom(int dim, double p, std::function<double(double)> profile,
                                std::optional<double> support = std::nullopt, std::vector<double> kinks = {},
                                std::string id = "custom")
{
    RadialKernel::Parts parts;
    parts.spec = {Family::Custom, dim, p, 0.0, 0.0, 0.5, 0.5};
    parts.id = std::move(id);
    parts.profile = std::move(profile);
    parts.support = support;
    parts.kinks = std::move(kinks);
    return RadialKernel(std::move(parts));
}

inline RadialKernel make_kernel(const KernelSpec& s)
{
    switch (s.family) {
    case Family::Stable: return make_stable(s.dim, s.p, s.eps);
    case Family::Rescaled: return make_rescaled_stable(s.dim, s.p, s.base_eps, s.eps);
    case Family::TruncatedPower: return make_truncated_power(s.dim, s.p, s.beta, s.eps);
    case Family::SmoothedPower: return make_smoothed_power(s.dim, s.p, s.beta, s.eps, s.eps0);
    case Family::LogLimit: return make_log_limit(s.dim, s.p, s.eps, s.eps0);
    case Family::SmoothedLogBall: return make_smoothed_log_ball(s.dim, s.p, s.eps, s.eps0);
    case Family::Custom: break;
    }
    throw std::invalid_argument("make_kernel: custom kernels have no flat spec");
}

/// Largest admissible eps for a family (exclusive bound).
inline double family_eps_max(const KernelSpec& s)
{
    switch (s.family) {
    case Family::Stable: return s.p;
    case Family::Rescaled: return 1.0;
    case Family::TruncatedPower: return 1.0;
    case Family::SmoothedPower:
    case Family::LogLimit:
    case Family::SmoothedLogBall: return s.eps0;
    case Family::Custom: break;
    }
    return 0.0;
}

} // namespace bbm
