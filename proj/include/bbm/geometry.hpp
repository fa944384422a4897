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
#include <string>
#include <utility>
#include <vector>

#include "bbm/core.hpp"
#include "bbm/quadrature.hpp"
#include "bbm/rng.hpp"

namespace bbm {

struct Interval {
    double lo, hi;
    double length() const { return hi - lo; }
    bool operator==(const Interval&) const = default;
};

enum class DomainKind { IntervalUnion, Box, Ball, SlitBall, SlitInterval, HalfSpace, FullSpace };

inline std::string domain_kind_name(DomainKind k)
{
    switch (k) {
    case DomainKind::IntervalUnion: return "intervals";
    case DomainKind::Box: return "box";
    case DomainKind::Ball: return "ball";
    case DomainKind::SlitBall: return "slit-ball";
    case DomainKind::SlitInterval: return "slit-interval";
    case DomainKind::HalfSpace: return "half-space";
    case DomainKind::FullSpace: return "full-space";
    }
    return "full-space";
}

inline DomainKind parse_domain_kind(const std::string& s)
{
    for (auto k : {DomainKind::IntervalUnion, DomainKind::Box, DomainKind::Ball, DomainKind::SlitBall,
                   DomainKind::SlitInterval, DomainKind::HalfSpace, DomainKind::FullSpace})
        if (domain_kind_name(k) == s) return k;
    throw std::invalid_argument("unknown domain '" + s +
                                "' (expected intervals, box, ball, slit-ball, slit-interval, half-space, full-space)");
}

/// Open region of R^d. Slit kinds remove the hyperplane x_d = c_d (or a slab of
/// half-width gap around it after shrinking); points on it are never contained.
class Domain {
public:
    static Domain intervals(std::vector<Interval> ivs)
    {
        require(!ivs.empty(), "interval union must not be empty");
        std::sort(ivs.begin(), ivs.end(), [](const Interval& a, const Interval& b) { return a.lo < b.lo; });
        for (std::size_t i = 0; i < ivs.size(); ++i) {
            require(ivs[i].lo < ivs[i].hi, "interval union: each interval needs lo < hi");
            if (i > 0) require(ivs[i - 1].hi <= ivs[i].lo, "interval union: intervals must be pairwise disjoint");
        }
        Domain d(DomainKind::IntervalUnion, 1);
        d.ivs_ = std::move(ivs);
        return d;
    }

    static Domain interval(double lo, double hi) { return intervals({{lo, hi}}); }

    static Domain box(Vec lo, Vec hi)
    {
        require(lo.dim() == hi.dim() && lo.dim() >= 1, "box: corners must share a positive dimension");
        for (int i = 0; i < lo.dim(); ++i) require(lo[i] < hi[i], "box: need lo < hi in every coordinate");
        Domain d(DomainKind::Box, lo.dim());
        d.lo_ = lo;
        d.hi_ = hi;
        return d;
    }

    static Domain ball(Vec center, double radius)
    {
        require(center.dim() >= 1 && radius > 0.0, "ball: need dim >= 1 and radius > 0");
        Domain d(DomainKind::Ball, center.dim());
        d.center_ = center;
        d.radius_ = radius;
        return d;
    }

    static Domain slit_ball(Vec center, double radius, double gap = 0.0)
    {
        require(center.dim() >= 1 && radius > 0.0, "slit-ball: need dim >= 1 and radius > 0");
        require(gap >= 0.0 && gap < radius, "slit-ball: gap must lie in [0, radius)");
        Domain d(DomainKind::SlitBall, center.dim());
        d.center_ = center;
        d.radius_ = radius;
        d.gap_ = gap;
        return d;
    }

    /// (-1, 0) U (0, 1).
    static Domain slit_interval() { return Domain(DomainKind::SlitInterval, 1); }

    /// {x : sign * (x_axis - offset) > 0}.
    static Domain half_space(int dim, int axis, double offset, double sign = 1.0)
    {
        require(axis >= 0 && axis < dim, "half-space: axis out of range");
        require(sign == 1.0 || sign == -1.0, "half-space: sign must be +1 or -1");
        Domain d(DomainKind::HalfSpace, dim);
        d.axis_ = axis;
        d.offset_ = offset;
        d.sign_ = sign;
        return d;
    }

    static Domain full_space(int dim) { return Domain(DomainKind::FullSpace, dim); }

    DomainKind kind() const noexcept { return kind_; }
    int dim() const noexcept { return dim_; }
    bool bounded() const noexcept { return kind_ != DomainKind::HalfSpace && kind_ != DomainKind::FullSpace; }

    const Vec& lower() const noexcept { return lo_; }
    const Vec& upper() const noexcept { return hi_; }
    const Vec& center() const noexcept { return center_; }
    double radius() const noexcept { return radius_; }
    double gap() const noexcept { return gap_; }
    int axis() const noexcept { return axis_; }
    double offset() const noexcept { return offset_; }
    double sign() const noexcept { return sign_; }

    bool contains(const Vec& x) const
    {
        switch (kind_) {
        case DomainKind::IntervalUnion:
            return std::any_of(ivs_.begin(), ivs_.end(), [&](const Interval& iv) { return x[0] > iv.lo && x[0] < iv.hi; });
        case DomainKind::SlitInterval: return (x[0] > -1.0 && x[0] < 0.0) || (x[0] > 0.0 && x[0] < 1.0);
        case DomainKind::Box:
            for (int i = 0; i < dim_; ++i)
                if (!(x[i] > lo_[i] && x[i] < hi_[i])) return false;
            return true;
        case DomainKind::Ball: return (x - center_).norm2() < radius_ * radius_;
        case DomainKind::SlitBall:
            return (x - center_).norm2() < radius_ * radius_ && std::abs(x[dim_ - 1] - center_[dim_ - 1]) > gap_;
        case DomainKind::HalfSpace: return sign_ * (x[axis_] - offset_) > 0.0;
        case DomainKind::FullSpace: return true;
        }
        return false;
    }

    /// Open intervals of a one-dimensional domain, ascending.
    std::vector<Interval> intervals() const
    {
        require(dim_ == 1 && bounded(), "intervals(): only for bounded one-dimensional domains");
        switch (kind_) {
        case DomainKind::IntervalUnion: return ivs_;
        case DomainKind::SlitInterval: return {{-1.0, 0.0}, {0.0, 1.0}};
        case DomainKind::Box: return {{lo_[0], hi_[0]}};
        case DomainKind::Ball: return {{center_[0] - radius_, center_[0] + radius_}};
        case DomainKind::SlitBall:
            return {{center_[0] - radius_, center_[0] - gap_}, {center_[0] + gap_, center_[0] + radius_}};
        default: break;
        }
        return {};
    }

    double volume() const
    {
        switch (kind_) {
        case DomainKind::IntervalUnion: {
            double v = 0.0;
            for (const auto& iv : ivs_) v += iv.length();
            return v;
        }
        case DomainKind::SlitInterval: return 2.0;
        case DomainKind::Box: {
            double v = 1.0;
            for (int i = 0; i < dim_; ++i) v *= hi_[i] - lo_[i];
            return v;
        }
        case DomainKind::Ball: return ball_volume(dim_, radius_);
        case DomainKind::SlitBall: {
            const double full = ball_volume(dim_, radius_);
            if (gap_ == 0.0) return full;
            if (dim_ == 1) return 2.0 * (radius_ - gap_);
            // Remove the slab |x_d| <= gap: cross-sections are (d-1)-balls.
            const int k = dim_ - 1;
            const double R = radius_;
            auto slice = [k, R](double t) { return ball_volume(k, std::sqrt(R * R - t * t)); };
            return full - 2.0 * quad::integrate(slice, 0.0, gap_).checked("slit-ball volume");
        }
        default: break;
        }
        throw std::invalid_argument("volume: domain '" + domain_kind_name(kind_) + "' is unbounded");
    }

    std::pair<Vec, Vec> bounding_box() const
    {
        switch (kind_) {
        case DomainKind::IntervalUnion: return {Vec{ivs_.front().lo}, Vec{ivs_.back().hi}};
        case DomainKind::SlitInterval: return {Vec{-1.0}, Vec{1.0}};
        case DomainKind::Box: return {lo_, hi_};
        case DomainKind::Ball:
        case DomainKind::SlitBall: {
            Vec lo = center_, hi = center_;
            for (int i = 0; i < dim_; ++i) {
                lo[i] -= radius_;
                hi[i] += radius_;
            }
            return {lo, hi};
        }
        default: break;
        }
        throw std::invalid_argument("bounding_box: domain '" + domain_kind_name(kind_) + "' is unbounded");
    }

    /// Uniform point by rejection from the bounding box.
    Vec sample_uniform(Stream& rng) const
    {
        require(bounded(), "sample_uniform: cannot sample from unbounded domain '" + domain_kind_name(kind_) + "'");
        const auto [lo, hi] = bounding_box();
        Vec x(dim_);
        for (;;) {
            for (int i = 0; i < dim_; ++i) x[i] = rng.uniform(lo[i], hi[i]);
            if (contains(x)) return x;
        }
    }

    /// {x in domain : dist(x, boundary) > delta}.
    Domain inner_shrink(double delta) const
    {
        require(delta > 0.0, "inner_shrink: delta must be positive");
        const std::string empty = "inner_shrink: domain vanishes at delta = " + format_double(delta);
        switch (kind_) {
        case DomainKind::IntervalUnion:
        case DomainKind::SlitInterval: {
            std::vector<Interval> out;
            for (const auto& iv : intervals())
                if (iv.hi - iv.lo > 2.0 * delta) out.push_back({iv.lo + delta, iv.hi - delta});
            require(!out.empty(), empty);
            return Domain::intervals(out);
        }
        case DomainKind::Box: {
            Vec lo = lo_, hi = hi_;
            for (int i = 0; i < dim_; ++i) {
                lo[i] += delta;
                hi[i] -= delta;
                require(lo[i] < hi[i], empty);
            }
            return Domain::box(lo, hi);
        }
        case DomainKind::Ball:
            require(radius_ > delta, empty);
            return Domain::ball(center_, radius_ - delta);
        case DomainKind::SlitBall:
            require(radius_ - delta > gap_ + delta, empty);
            return Domain::slit_ball(center_, radius_ - delta, gap_ + delta);
        case DomainKind::HalfSpace: return Domain::half_space(dim_, axis_, offset_ + sign_ * delta, sign_);
        case DomainKind::FullSpace: return *this;
        }
        return *this;
    }

    /// domain + B_delta(0).
    Domain outer_grow(double delta) const
    {
        require(delta > 0.0, "outer_grow: delta must be positive");
        switch (kind_) {
        case DomainKind::IntervalUnion:
        case DomainKind::SlitInterval: {
            std::vector<Interval> out;
            for (const auto& iv : intervals()) {
                const Interval g{iv.lo - delta, iv.hi + delta};
                if (!out.empty() && g.lo <= out.back().hi)
                    out.back().hi = std::max(out.back().hi, g.hi);
                else
                    out.push_back(g);
            }
            return Domain::intervals(out);
        }
        case DomainKind::Box: {
            Vec lo = lo_, hi = hi_;
            for (int i = 0; i < dim_; ++i) {
                lo[i] -= delta;
                hi[i] += delta;
            }
            return Domain::box(lo, hi);
        }
        case DomainKind::Ball: return Domain::ball(center_, radius_ + delta);
        case DomainKind::SlitBall:
            if (gap_ > delta) return Domain::slit_ball(center_, radius_ + delta, gap_ - delta);
            return Domain::ball(center_, radius_ + delta);
        case DomainKind::HalfSpace: return Domain::half_space(dim_, axis_, offset_ - sign_ * delta, sign_);
        case DomainKind::FullSpace: return *this;
        }
        return *this;
    }

    std::string id() const
    {
        auto vec = [](const Vec& v) {
            std::string s = "[";
            for (int i = 0; i < v.dim(); ++i) s += (i ? "," : "") + format_double(v[i]);
            return s + "]";
        };
        switch (kind_) {
        case DomainKind::IntervalUnion: {
            std::string s = "intervals(";
            for (std::size_t i = 0; i < ivs_.size(); ++i)
                s += (i ? "," : "") + format_double(ivs_[i].lo) + ":" + format_double(ivs_[i].hi);
            return s + ")";
        }
        case DomainKind::SlitInterval: return "slit-interval";
        case DomainKind::Box: return "box(" + vec(lo_) + "," + vec(hi_) + ")";
        case DomainKind::Ball: return "ball(" + vec(center_) + "," + format_double(radius_) + ")";
        case DomainKind::SlitBall:
            return "slit-ball(" + vec(center_) + "," + format_double(radius_) +
                   (gap_ > 0.0 ? ",gap=" + format_double(gap_) : "") + ")";
        case DomainKind::HalfSpace:
            return "half-space(d=" + std::to_string(dim_) + ",axis=" + std::to_string(axis_) +
                   ",offset=" + format_double(offset_) + ",sign=" + format_double(sign_) + ")";
        case DomainKind::FullSpace: return "full-space(d=" + std::to_string(dim_) + ")";
        }
        return "";
    }

    bool operator==(const Domain& o) const
    {
        return kind_ == o.kind_ && dim_ == o.dim_ && ivs_ == o.ivs_ && lo_ == o.lo_ && hi_ == o.hi_ &&
               center_ == o.center_ && radius_ == o.radius_ && gap_ == o.gap_ && axis_ == o.axis_ &&
               offset_ == o.offset_ && sign_ == o.sign_;
    }

private:
    Domain(DomainKind k, int dim) : kind_(k), dim_(dim)
    {
        require(dim >= 1 && dim <= kMaxDim, "domain: dimension out of range");
    }

    DomainKind kind_;
    int dim_;
    std::vector<Interval> ivs_;
    Vec lo_, hi_, center_;
    double radius_ = 0.0, gap_ = 0.0;
    int axis_ = 0;
    double offset_ = 0.0, sign_ = 1.0;
};

/// True when the closure of inner lies inside outer at positive distance from its boundary.
/// Supported for one-dimensional domains and for boxes and balls inside boxes, balls and slit balls.
inline bool compactly_contains(const Domain& outer, const Domain& inner)
{
    require(outer.dim() == inner.dim(), "compactly_contains: dimension mismatch");
    if (outer.kind() == DomainKind::FullSpace) return true;
    if (outer.dim() == 1 && outer.bounded() && inner.bounded()) {
        const auto out = outer.intervals();
        for (const auto& iv : inner.intervals()) {
            const bool inside = std::any_of(out.begin(), out.end(),
                                            [&](const Interval& o) { return o.lo < iv.lo && iv.hi < o.hi; });
            if (!inside) return false;
        }
        return true;
    }
    require(inner.kind() == DomainKind::Box || inner.kind() == DomainKind::Ball,
            "compactly_contains: inner domain must be a box or a ball");
    const int d = inner.dim();
    const auto [ilo, ihi] = inner.bounding_box();
    switch (outer.kind()) {
    case DomainKind::Box:
        for (int i = 0; i < d; ++i)
            if (!(outer.lower()[i] < ilo[i] && ihi[i] < outer.upper()[i])) return false;
        return true;
    case DomainKind::Ball:
    case DomainKind::SlitBall: {
        double far = 0.0;
        if (inner.kind() == DomainKind::Ball) {
            far = (inner.center() - outer.center()).norm() + inner.radius();
        } else {
            Vec corner(d);
            for (int i = 0; i < d; ++i)
                corner[i] = std::max(std::abs(ilo[i] - outer.center()[i]), std::abs(ihi[i] - outer.center()[i]));
            far = corner.norm();
        }
        if (!(far < outer.radius())) return false;
        if (outer.kind() == DomainKind::SlitBall) {
            const double c = outer.center()[d - 1];
            const bool above = ilo[d - 1] > c + outer.gap();
            const bool below = ihi[d - 1] < c - outer.gap();
            return above || below;
        }
        return true;
    }
    case DomainKind::HalfSpace:
        return outer.sign() > 0 ? ilo[outer.axis()] > outer.offset() : ihi[outer.axis()] < outer.offset();
    default: break;
    }
    throw std::invalid_argument("compactly_contains: unsupported outer domain '" + domain_kind_name(outer.kind()) + "'");
}

} // namespace bbm
