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
#include <sstream>
#include <string>
#include <vector>

#include "bbm/core.hpp"
#include "bbm/geometry.hpp"
#include "bbm/quadrature.hpp"

namespace bbm {

enum class FieldKind { Linear, Gaussian, Tent, SmoothBump, OddBump, PiecewiseConstant, SignJump };
enum class Regularity { Smooth, Lipschitz, PiecewiseConstant };

inline std::string field_kind_name(FieldKind k)
{
    switch (k) {
    case FieldKind::Linear: return "linear";
    case FieldKind::Gaussian: return "gaussian";
    case FieldKind::Tent: return "tent";
    case FieldKind::SmoothBump: return "bump";
    case FieldKind::OddBump: return "odd-bump";
    case FieldKind::PiecewiseConstant: return "piecewise";
    case FieldKind::SignJump: return "sign-jump";
    }
    return "";
}

inline FieldKind parse_field_kind(const std::string& s)
{
    for (auto k : {FieldKind::Linear, FieldKind::Gaussian, FieldKind::Tent, FieldKind::SmoothBump, FieldKind::OddBump,
                   FieldKind::PiecewiseConstant, FieldKind::SignJump})
        if (field_kind_name(k) == s) return k;
    throw std::invalid_argument("unknown field '" + s +
                                "' (expected linear, gaussian, tent, bump, odd-bump, piecewise, sign-jump)");
}

/// Constant-valued region of a piecewise-constant field: a ball or the half-space x_axis > offset.
struct Region {
    enum class Shape { Ball, HalfSpace } shape = Shape::Ball;
    Vec center;
    double radius = 0.0;
    int axis = 0;
    double offset = 0.0;
    double value = 1.0;

    bool contains(const Vec& x) const
    {
        if (shape == Shape::Ball) return (x - center).norm2() < radius * radius;
        return x[axis] > offset;
    }
    bool on_boundary(const Vec& x) const
    {
        if (shape == Shape::Ball) return (x - center).norm2() == radius * radius;
        return x[axis] == offset;
    }
    bool operator==(const Region&) const = default;
};

/// A constant piece of a one-dimensional piecewise-constant field.
struct Piece {
    double lo, hi, value;
};

/// Test function u = scale * base(x - center) + offset.
class Field {
public:
    /// u(x) = slope . x + intercept.
    static Field linear(Vec slope, double intercept = 0.0)
    {
        Field f(FieldKind::Linear, slope.dim());
        f.slope_ = slope;
        f.offset_ = intercept;
        return f;
    }
    /// exp(-|x - c|^2).
    static Field gaussian(int dim) { return Field(FieldKind::Gaussian, dim); }
    /// max(0, 1 - |x - c|).
    static Field tent(int dim) { return Field(FieldKind::Tent, dim); }
    /// (1 - |x - c|^2 / R^2)^3 inside the ball, zero outside; C^2 with value 1 at c.
    static Field smooth_bump(int dim, double radius = 1.0)
    {
        require(radius > 0.0, "smooth_bump: radius must be positive");
        Field f(FieldKind::SmoothBump, dim);
        f.radius_ = radius;
        return f;
    }
    /// (x_1 - c_1) times the smooth bump: odd about c, vanishing at c.
    static Field odd_bump(int dim, double radius = 1.0)
    {
        Field f = smooth_bump(dim, radius);
        f.kind_ = FieldKind::OddBump;
        return f;
    }
    /// -h on {x_d < 0}, +h on {x_d > 0}.
    static Field sign_jump(int dim, double half_jump = 0.5)
    {
        require(half_jump > 0.0, "sign_jump: half_jump must be positive");
        Field f(FieldKind::SignJump, dim);
        f.half_jump_ = half_jump;
        return f;
    }
    /// Background value plus regions with their own values. Regions must not overlap.
    static Field piecewise(int dim, std::vector<Region> regions, double background = 0.0)
    {
        for (const auto& r : regions) {
            require(r.shape != Region::Shape::Ball || (r.center.dim() == dim && r.radius > 0.0),
                    "piecewise: ball regions need a center of the field's dimension and positive radius");
            require(r.shape != Region::Shape::HalfSpace || (r.axis >= 0 && r.axis < dim),
                    "piecewise: half-space axis out of range");
        }
        Field f(FieldKind::PiecewiseConstant, dim);
        f.regions_ = std::move(regions);
        f.background_ = background;
        return f;
    }
    /// Indicator-type field: value inside Ball(center, radius), background elsewhere.
    static Field ball_indicator(Vec center, double radius, double value = 1.0, double background = 0.0)
    {
        const int d = center.dim();
        return piecewise(d, {Region{Region::Shape::Ball, center, radius, 0, 0.0, value}}, background);
    }

    Field scaled(double c) const
    {
        Field f = *this;
        f.scale_ *= c;
        f.offset_ *= c;
        return f;
    }
    Field shifted(double c) const
    {
        Field f = *this;
        f.offset_ += c;
        return f;
    }
    Field centered_at(Vec c) const
    {
        require(c.dim() == dim_, "centered_at: dimension mismatch");
        Field f = *this;
        f.center_ = c;
        return f;
    }

    FieldKind kind() const noexcept { return kind_; }
    int dim() const noexcept { return dim_; }
    double scale() const noexcept { return scale_; }
    double offset() const noexcept { return offset_; }
    const Vec& slope() const noexcept { return slope_; }
    const Vec& center() const noexcept { return center_; }
    double radius() const noexcept { return radius_; }
    double half_jump() const noexcept { return half_jump_; }
    double background() const noexcept { return background_; }
    const std::vector<Region>& regions() const noexcept { return regions_; }

    Regularity regularity() const noexcept
    {
        switch (kind_) {
        case FieldKind::Gaussian:
        case FieldKind::SmoothBump:
        case FieldKind::OddBump:
        case FieldKind::Linear: return Regularity::Smooth;
        case FieldKind::Tent: return Regularity::Lipschitz;
        default: return Regularity::PiecewiseConstant;
        }
    }

    double eval(const Vec& x) const
    {
        const Vec y = x - center_;
        double v = 0.0;
        switch (kind_) {
        case FieldKind::Linear: return slope_.dot(x) * scale_ + offset_;
        case FieldKind::Gaussian: v = std::exp(-y.norm2()); break;
        case FieldKind::Tent: v = std::max(0.0, 1.0 - y.norm()); break;
        case FieldKind::SmoothBump: v = bump(y.norm2()); break;
        case FieldKind::OddBump: v = y[0] * bump(y.norm2()); break;
        case FieldKind::SignJump: v = y[dim_ - 1] < 0.0 ? -half_jump_ : (y[dim_ - 1] > 0.0 ? half_jump_ : 0.0); break;
        case FieldKind::PiecewiseConstant: v = piecewise_value(x); break;
        }
        return scale_ * v + offset_;
    }

    Vec grad(const Vec& x) const
    {
        const Vec y = x - center_;
        Vec g(dim_);
        switch (kind_) {
        case FieldKind::Linear: return slope_ * scale_;
        case FieldKind::Gaussian: g = y * (-2.0 * std::exp(-y.norm2())); break;
        case FieldKind::Tent: {
            const double n = y.norm();
            if (n < 1.0 && n > 0.0) g = y * (-1.0 / n);
            break;
        }
        case FieldKind::SmoothBump: g = y * bump_radial_slope(y.norm2()); break;
        case FieldKind::OddBump:
            g = y * (y[0] * bump_radial_slope(y.norm2()));
            g[0] += bump(y.norm2());
            break;
        case FieldKind::SignJump:
            if (y[dim_ - 1] == 0.0)
                throw std::domain_error("grad: sign-jump field has no gradient on its interface");
            break;
        case FieldKind::PiecewiseConstant:
            for (const auto& r : regions_)
                if (r.on_boundary(x)) throw std::domain_error("grad: piecewise field has no gradient on an interface");
            break;
        }
        return g * scale_;
    }

    double laplacian(const Vec& x) const
    {
        require(regularity() == Regularity::Smooth, "laplacian: field must be smooth");
        const Vec y = x - center_;
        const double n2 = y.norm2();
        double v = 0.0;
        switch (kind_) {
        case FieldKind::Linear: return 0.0;
        case FieldKind::Gaussian: v = (4.0 * n2 - 2.0 * dim_) * std::exp(-n2); break;
        case FieldKind::SmoothBump: v = bump_laplacian(n2); break;
        case FieldKind::OddBump: v = y[0] * bump_laplacian(n2) + 2.0 * y[0] * bump_radial_slope(n2); break;
        default: break;
        }
        return scale_ * v;
    }

    /// (u(x + r w) - u(x)) / r, with the directional derivative as the r -> 0 limit.
    double difference_quotient(const Vec& x, const Vec& w, double r) const
    {
        if (kind_ == FieldKind::Linear) return scale_ * slope_.dot(w);
        if (regularity() == Regularity::PiecewiseConstant) {
            if (r == 0.0) return 0.0;
            return (eval(x + r * w) - eval(x)) / r;
        }
        if (r < 1e-9) return grad(x).dot(w);
        return (eval(x + r * w) - eval(x)) / r;
    }

    /// Abscissae where a one-dimensional field is not smooth.
    std::vector<double> breakpoints_1d() const
    {
        require(dim_ == 1, "breakpoints_1d: field must be one-dimensional");
        const double c = center_[0];
        switch (kind_) {
        case FieldKind::Tent: return {c - 1.0, c, c + 1.0};
        case FieldKind::SmoothBump:
        case FieldKind::OddBump: return {c - radius_, c + radius_};
        case FieldKind::SignJump: return {c};
        case FieldKind::PiecewiseConstant: {
            std::vector<double> b;
            for (const auto& r : regions_) {
                if (r.shape == Region::Shape::Ball) {
                    b.push_back(r.center[0] - r.radius);
                    b.push_back(r.center[0] + r.radius);
                } else {
                    b.push_back(r.offset);
                }
            }
            std::sort(b.begin(), b.end());
            b.erase(std::unique(b.begin(), b.end()), b.end());
            return b;
        }
        default: return {};
        }
    }

    /// Constant pieces of a one-dimensional piecewise-constant field, covering R.
    std::vector<Piece> constant_pieces_1d() const
    {
        require(dim_ == 1 && regularity() == Regularity::PiecewiseConstant,
                "constant_pieces_1d: needs a one-dimensional piecewise-constant field");
        const double inf = std::numeric_limits<double>::infinity();
        auto cuts = breakpoints_1d();
        cuts.insert(cuts.begin(), -inf);
        cuts.push_back(inf);
        std::vector<Piece> out;
        for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
            const double a = cuts[i], b = cuts[i + 1];
            const double mid = std::isfinite(a) && std::isfinite(b) ? 0.5 * (a + b) : (std::isfinite(a) ? a + 1.0 : b - 1.0);
            const double v = eval(Vec{mid});
            if (!out.empty() && out.back().value == v)
                out.back().hi = b;
            else
                out.push_back({a, b, v});
        }
        return out;
    }

    double lipschitz_constant() const
    {
        const double s = std::abs(scale_);
        switch (kind_) {
        case FieldKind::Linear: return s * slope_.norm();
        case FieldKind::Gaussian: return s * std::sqrt(2.0) * std::exp(-0.5);
        case FieldKind::Tent: return s;
        case FieldKind::SmoothBump: return s * 6.0 / radius_ * (16.0 / 25.0) / std::sqrt(5.0);
        // |grad(x_1 f)| <= |f| + |x_1| |grad f| with |x_1| <= R.
        case FieldKind::OddBump: return s * (1.0 + 6.0 * (16.0 / 25.0) / std::sqrt(5.0));
        default: return std::numeric_limits<double>::infinity();
        }
    }

    /// ||u||_{L^p(R^d)}^p + ||grad u||_{L^p(R^d)}^p for decaying fields.
    double sobolev_norm_p(double p) const
    {
        require(p >= 1.0, "sobolev_norm_p: p must be >= 1");
        require(offset_ == 0.0, "sobolev_norm_p: field with nonzero offset is not in L^p(R^d)");
        const double area = sphere_area(dim_);
        const int d = dim_;
        double body = 0.0, slope = 0.0;
        switch (kind_) {
        case FieldKind::Tent:
            body = area * beta_function(p + 1.0, d);
            slope = ball_volume(d, 1.0);
            break;
        case FieldKind::Gaussian: {
            auto fb = [p, d](double r) { return std::exp(-p * r * r) * std::pow(r, d - 1); };
            auto fs = [p, d](double r) { return std::pow(2.0 * r, p) * std::exp(-p * r * r) * std::pow(r, d - 1); };
            body = area * (quad::integrate(fb, 0.0, 12.0).checked("sobolev norm"));
            slope = area * (quad::integrate(fs, 0.0, 12.0).checked("sobolev norm"));
            break;
        }
        case FieldKind::SmoothBump: {
            const double R = radius_;
            auto fb = [&](double r) { return std::pow(bump(r * r), p) * std::pow(r, d - 1); };
            auto fs = [&](double r) { return std::pow(std::abs(bump_radial_slope(r * r)) * r, p) * std::pow(r, d - 1); };
            body = area * quad::integrate(fb, 0.0, R).checked("sobolev norm");
            slope = area * quad::integrate(fs, 0.0, R).checked("sobolev norm");
            break;
        }
        default: throw std::invalid_argument("sobolev_norm_p: supported for tent, gaussian and bump fields");
        }
        return std::pow(std::abs(scale_), p) * (body + slope);
    }

    std::string id() const
    {
        std::ostringstream os;
        os << field_kind_name(kind_) << "(d=" << dim_;
        auto vec = [](const Vec& v) {
            std::string s = "[";
            for (int i = 0; i < v.dim(); ++i) s += (i ? "," : "") + format_double(v[i]);
            return s + "]";
        };
        switch (kind_) {
        case FieldKind::Linear: os << ",slope=" << vec(slope_); break;
        case FieldKind::SmoothBump:
        case FieldKind::OddBump: os << ",R=" << format_double(radius_); break;
        case FieldKind::SignJump: os << ",h=" << format_double(half_jump_); break;
        case FieldKind::PiecewiseConstant: os << ",regions=" << regions_.size(); break;
        default: break;
        }
        if (scale_ != 1.0) os << ",scale=" << format_double(scale_);
        if (offset_ != 0.0) os << ",offset=" << format_double(offset_);
        if (center_.norm2() != 0.0) os << ",center=" << vec(center_);
        os << ")";
        return os.str();
    }

    bool operator==(const Field& o) const
    {
        return kind_ == o.kind_ && dim_ == o.dim_ && scale_ == o.scale_ && offset_ == o.offset_ &&
               slope_ == o.slope_ && center_ == o.center_ && radius_ == o.radius_ && half_jump_ == o.half_jump_ &&
               regions_ == o.regions_ && background_ == o.background_;
    }

private:
    Field(FieldKind k, int dim) : kind_(k), dim_(dim), slope_(dim), center_(dim)
    {
        require(dim >= 1 && dim <= kMaxDim, "field: dimension out of range");
    }

    double bump(double n2) const
    {
        const double s = n2 / (radius_ * radius_);
        return s < 1.0 ? (1.0 - s) * (1.0 - s) * (1.0 - s) : 0.0;
    }
    // grad bump = y * bump_radial_slope(|y|^2).
    double bump_radial_slope(double n2) const
    {
        const double R2 = radius_ * radius_;
        const double s = n2 / R2;
        return s < 1.0 ? -6.0 * (1.0 - s) * (1.0 - s) / R2 : 0.0;
    }
    double bump_laplacian(double n2) const
    {
        const double R2 = radius_ * radius_;
        const double s = n2 / R2;
        return s < 1.0 ? -6.0 / R2 * (1.0 - s) * ((1.0 - s) * dim_ - 4.0 * s) : 0.0;
    }
    double piecewise_value(const Vec& x) const
    {
        for (const auto& r : regions_)
            if (r.contains(x)) return r.value;
        return background_;
    }

    FieldKind kind_;
    int dim_;
    double scale_ = 1.0;
    double offset_ = 0.0;
    Vec slope_;
    Vec center_;
    double radius_ = 1.0;
    double half_jump_ = 0.5;
    std::vector<Region> regions_;
    double background_ = 0.0;
};

namespace detail {

// Nested adaptive quadrature of g over a bounded box, ball or slit ball (d <= 3),
// or an interval union; coordinates are integrated innermost-last.
template <class G>
double integrate_over(const Domain& dom, G&& g, const std::vector<double>& kinks_1d = {})
{
    require(dom.bounded(), "integrate_over: domain must be bounded");
    const int d = dom.dim();
    quad::Options opt;
    opt.abs_tol = 1e-13;
    opt.rel_tol = 1e-11;
    if (d == 1) {
        double total = 0.0;
        for (const auto& iv : dom.intervals()) {
            std::vector<double> pts{iv.lo};
            for (double k : kinks_1d)
                if (k > iv.lo && k < iv.hi) pts.push_back(k);
            pts.push_back(iv.hi);
            total += quad::integrate([&](double t) { return g(Vec{t}); }, std::span<const double>(pts), opt)
                         .checked("integral over " + dom.id());
        }
        return total;
    }
    require(d <= 3, "integrate_over: nested quadrature supports d <= 3");
    require(dom.kind() == DomainKind::Box || dom.kind() == DomainKind::Ball || dom.kind() == DomainKind::SlitBall,
            "integrate_over: supported domains are boxes, balls and slit balls");
    opt.rel_tol = 1e-10;
    Vec x(d);
    std::function<double(int)> level = [&](int k) -> double {
        std::vector<std::pair<double, double>> ranges;
        if (dom.kind() == DomainKind::Box) {
            ranges.push_back({dom.lower()[k], dom.upper()[k]});
        } else {
            double rho2 = dom.radius() * dom.radius();
            for (int i = 0; i < k; ++i) rho2 -= (x[i] - dom.center()[i]) * (x[i] - dom.center()[i]);
            if (rho2 <= 0.0) return 0.0;
            const double c = dom.center()[k], rho = std::sqrt(rho2);
            if (dom.kind() == DomainKind::SlitBall && k == d - 1 && dom.gap() > 0.0) {
                if (rho > dom.gap()) {
                    ranges.push_back({c - rho, c - dom.gap()});
                    ranges.push_back({c + dom.gap(), c + rho});
                }
            } else {
                ranges.push_back({c - rho, c + rho});
            }
        }
        double total = 0.0;
        for (const auto& [a, b] : ranges) {
            auto inner = [&](double t) {
                x[k] = t;
                return k + 1 == d ? g(x) : level(k + 1);
            };
            total += quad::integrate(inner, a, b, opt).value;
        }
        return total;
    };
    return level(0);
}

} // namespace detail

/// int_Omega |grad u|^p dx; closed forms for linear fields and radial fields on centered balls.
inline double grad_lp_norm(const Field& u, const Domain& dom, double p)
{
    require(p >= 1.0, "grad_lp_norm: p must be >= 1");
    require(u.regularity() != Regularity::PiecewiseConstant,
            "grad_lp_norm: piecewise-constant fields have no L^p gradient; use bv_seminorm");
    require(u.dim() == dom.dim(), "grad_lp_norm: dimension mismatch");
    if (u.kind() == FieldKind::Linear) return std::pow(u.lipschitz_constant(), p) * dom.volume();

    const bool radial = u.kind() == FieldKind::Gaussian || u.kind() == FieldKind::Tent || u.kind() == FieldKind::SmoothBump;
    if (radial && dom.dim() >= 2 && (dom.kind() == DomainKind::Ball || dom.kind() == DomainKind::SlitBall) &&
        dom.center() == u.center() && dom.gap() == 0.0) {
        const int d = u.dim();
        auto f = [&](double r) {
            Vec y(d);
            y[0] = r;
            return std::pow(u.grad(y + u.center()).norm(), p) * std::pow(r, d - 1);
        };
        std::vector<double> pts{0.0};
        if (u.kind() == FieldKind::Tent && dom.radius() > 1.0) pts.push_back(1.0);
        if (u.kind() == FieldKind::SmoothBump && dom.radius() > u.radius()) pts.push_back(u.radius());
        pts.push_back(dom.radius());
        quad::Options opt;
        opt.abs_tol = 1e-14;
        return sphere_area(d) * quad::integrate(f, std::span<const double>(pts), opt).checked("grad_lp_norm");
    }
    std::vector<double> kinks;
    if (u.dim() == 1) kinks = u.breakpoints_1d();
    return detail::integrate_over(dom, [&](const Vec& x) { return std::pow(u.grad(x).norm(), p); }, kinks);
}

namespace detail {

// (d-1)-measure of the hyperplane {x_axis = c} inside the domain (a point count in d = 1).
inline double hyperplane_measure(const Domain& dom, int axis, double c)
{
    const int d = dom.dim();
    if (d == 1) return dom.contains(Vec{c}) ? 1.0 : 0.0;
    switch (dom.kind()) {
    case DomainKind::Box: {
        if (!(dom.lower()[axis] < c && c < dom.upper()[axis])) return 0.0;
        double m = 1.0;
        for (int i = 0; i < d; ++i)
            if (i != axis) m *= dom.upper()[i] - dom.lower()[i];
        return m;
    }
    case DomainKind::Ball:
    case DomainKind::SlitBall: {
        const double t = c - dom.center()[axis];
        if (!(std::abs(t) < dom.radius())) return 0.0;
        if (dom.kind() == DomainKind::SlitBall && axis == d - 1 && std::abs(t) <= dom.gap()) return 0.0;
        if (dom.kind() == DomainKind::SlitBall && axis != d - 1)
            throw std::invalid_argument("bv_seminorm: interface transverse to the slit has no closed form here");
        return ball_volume(d - 1, std::sqrt(dom.radius() * dom.radius() - t * t));
    }
    default: break;
    }
    throw std::invalid_argument("bv_seminorm: no closed-form interface measure in domain " + dom.id());
}

// Surface measure of the sphere |x - c| = r inside the domain: full or empty only.
inline double sphere_measure(const Domain& dom, const Vec& c, double r)
{
    const int d = dom.dim();
    if (d == 1) return (dom.contains(Vec{c[0] - r}) ? 1.0 : 0.0) + (dom.contains(Vec{c[0] + r}) ? 1.0 : 0.0);
    const auto sphere_ball = Domain::ball(c, r);
    if (compactly_contains(dom, sphere_ball)) return sphere_area(d) * std::pow(r, d - 1);
    if (dom.kind() == DomainKind::Ball || dom.kind() == DomainKind::SlitBall) {
        if ((c - dom.center()).norm() >= r + dom.radius()) return 0.0;
    }
    if (dom.kind() == DomainKind::Box) {
        bool apart = false;
        for (int i = 0; i < d; ++i)
            apart = apart || c[i] + r <= dom.lower()[i] || c[i] - r >= dom.upper()[i];
        if (apart) return 0.0;
    }
    throw std::invalid_argument("bv_seminorm: sphere interface only partly inside " + dom.id() +
                                " has no closed-form measure");
}

} // namespace detail

/// |u|_BV(Omega) for a piecewise-constant field: jump times interface measure inside Omega.
inline double bv_seminorm(const Field& u, const Domain& dom)
{
    require(u.regularity() == Regularity::PiecewiseConstant, "bv_seminorm: field must be piecewise constant");
    require(u.dim() == dom.dim(), "bv_seminorm: dimension mismatch");
    const double s = std::abs(u.scale());
    const int d = u.dim();
    if (u.kind() == FieldKind::SignJump)
        return s * 2.0 * u.half_jump() * detail::hyperplane_measure(dom, d - 1, u.center()[d - 1]);
    double total = 0.0;
    for (const auto& r : u.regions()) {
        const double jump = std::abs(r.value - u.background());
        if (jump == 0.0) continue;
        if (r.shape == Region::Shape::HalfSpace)
            total += jump * detail::hyperplane_measure(dom, r.axis, r.offset);
        else
            total += jump * detail::sphere_measure(dom, r.center, r.radius);
    }
    return s * total;
}

} // namespace bbm
