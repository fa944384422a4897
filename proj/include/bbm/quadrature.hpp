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
#include <array>
#include <cmath>
#include <limits>
#include <queue>
#include <span>
#include <sstream>
#include <string>
#include <vector>

#include "bbm/core.hpp"

// Globally adaptive Gauss-Kronrod (10/21 point) quadrature.
namespace bbm::quad {

struct Options {
    double abs_tol = 1e-12;
    double rel_tol = 1e-12;
    int max_intervals = 4000;
    // Width in log r of the resolved part of a semi-infinite or singular range.
    double log_span = 60.0;
};

struct Result {
    double value = 0.0;
    double abs_error = 0.0;
    bool converged = true;
    long evaluations = 0;

    /// Value if converged, otherwise throws NumericalError with the achieved error.
    double checked(const std::string& what) const
    {
        if (!converged) {
            std::ostringstream os;
            os << what << ": quadrature did not converge (estimate " << value << ", achieved error "
               << abs_error << ")";
            throw NumericalError(os.str(), abs_error);
        }
        return value;
    }

    Result& operator+=(const Result& o)
    {
        value += o.value;
        abs_error += o.abs_error;
        converged = converged && o.converged;
        evaluations += o.evaluations;
        return *this;
    }
};

namespace detail {

inline constexpr std::array<double, 11> kXgk = {
    0.995657163025808080735527280689003, 0.973906528517171720077964012084452,
    0.930157491355708226001207180059508, 0.865063366688984510732096688423493,
    0.780817726586416897063717578345042, 0.679409568299024406234327365114874,
    0.562757134668604683339000099272694, 0.433395394129247190799265943165784,
    0.294392862701460198131126603103866, 0.148874338981631210884826001129720,
    0.000000000000000000000000000000000};

inline constexpr std::array<double, 11> kWgk = {
    0.011694638867371874278064396062192, 0.032558162307964727478818972459390,
    0.054755896574351996031381300244580, 0.075039674810919952767043140916190,
    0.093125454583697605535065465083366, 0.109387158802297641899210590325805,
    0.123491976262065851077208703207491, 0.134709217311473325928054001771707,
    0.142775938577060080797094273138717, 0.147739104901338491374841515972068,
    0.149445554002916905664936468389821};

inline constexpr std::array<double, 5> kWg = {
    0.066671344308688137593568809893332, 0.149451349150580593145776339657697,
    0.219086362515982043995534934228163, 0.269266719309996355091226921569469,
    0.295524224714752870173892994651338};

struct Panel {
    double a, b, value, error;
    bool operator<(const Panel& o) const { return error < o.error; }
};

template <class F>
Panel gk21(F& f, double a, double b)
{
    constexpr double eps = std::numeric_limits<double>::epsilon();
    constexpr double uflow = std::numeric_limits<double>::min();
    const double centr = 0.5 * (a + b);
    const double hlgth = 0.5 * (b - a);
    const double dhlgth = std::abs(hlgth);

    std::array<double, 10> fv1{}, fv2{};
    const double fc = f(centr);
    double resg = 0.0;
    double resk = kWgk[10] * fc;
    double resabs = std::abs(resk);
    for (int j = 0; j < 5; ++j) {
        const int jtw = 2 * j + 1;
        const double absc = hlgth * kXgk[jtw];
        const double f1 = f(centr - absc), f2 = f(centr + absc);
        fv1[jtw] = f1;
        fv2[jtw] = f2;
        resg += kWg[j] * (f1 + f2);
        resk += kWgk[jtw] * (f1 + f2);
        resabs += kWgk[jtw] * (std::abs(f1) + std::abs(f2));
    }
    for (int j = 0; j < 5; ++j) {
        const int jtwm1 = 2 * j;
        const double absc = hlgth * kXgk[jtwm1];
        const double f1 = f(centr - absc), f2 = f(centr + absc);
        fv1[jtwm1] = f1;
        fv2[jtwm1] = f2;
        resk += kWgk[jtwm1] * (f1 + f2);
        resabs += kWgk[jtwm1] * (std::abs(f1) + std::abs(f2));
    }
    const double reskh = 0.5 * resk;
    double resasc = kWgk[10] * std::abs(fc - reskh);
    for (int j = 0; j < 10; ++j) resasc += kWgk[j] * (std::abs(fv1[j] - reskh) + std::abs(fv2[j] - reskh));

    const double result = resk * hlgth;
    resabs *= dhlgth;
    resasc *= dhlgth;
    double abserr = std::abs((resk - resg) * hlgth);
    if (resasc != 0.0 && abserr != 0.0) abserr = resasc * std::min(1.0, std::pow(200.0 * abserr / resasc, 1.5));
    if (resabs > uflow / (50.0 * eps)) abserr = std::max(eps * 50.0 * resabs, abserr);
    if (!std::isfinite(result)) abserr = std::numeric_limits<double>::infinity();
    return {a, b, result, abserr};
}

} // namespace detail

/// Integral of f over the union of consecutive panels [pts[i], pts[i+1]].
/// Breakpoints should sit on kinks or integrable endpoint singularities.
template <class F>
Result integrate(F&& f, std::span<const double> pts, const Options& opt = {})
{
    require(pts.size() >= 2, "integrate: need at least two points");
    std::priority_queue<detail::Panel> heap;
    Result out;
    double total = 0.0, err = 0.0;
    for (std::size_t i = 0; i + 1 < pts.size(); ++i) {
        if (!(pts[i] < pts[i + 1])) {
            require(pts[i] == pts[i + 1], "integrate: breakpoints must be nondecreasing");
            continue;
        }
        auto pnl = detail::gk21(f, pts[i], pts[i + 1]);
        out.evaluations += 21;
        total += pnl.value;
        err += pnl.error;
        heap.push(pnl);
    }
    if (heap.empty()) return out;

    const auto tolerance = [&] { return std::max(opt.abs_tol, opt.rel_tol * std::abs(total)); };
    bool roundoff = false;
    while (err > tolerance() && static_cast<int>(heap.size()) < opt.max_intervals) {
        const auto worst = heap.top();
        if (!std::isfinite(worst.error)) break;
        const double mid = 0.5 * (worst.a + worst.b);
        if (!(worst.a < mid && mid < worst.b)) {
            roundoff = true;
            break;
        }
        heap.pop();
        auto left = detail::gk21(f, worst.a, mid);
        auto right = detail::gk21(f, mid, worst.b);
        out.evaluations += 42;
        total += left.value + right.value - worst.value;
        err += left.error + right.error - worst.error;
        heap.push(left);
        heap.push(right);
    }

    // Re-accumulate to drop the drift of the running sums.
    CompensatedSum vs, es;
    for (auto h = heap; !h.empty(); h.pop()) {
        vs.add(h.top().value);
        es.add(h.top().error);
    }
    out.value = vs.value();
    out.abs_error = es.value();
    out.converged = !roundoff && std::isfinite(out.value) && out.abs_error <= tolerance();
    return out;
}

template <class F>
Result integrate(F&& f, double a, double b, const Options& opt = {})
{
    const std::array<double, 2> pts{a, b};
    return integrate(f, std::span<const double>(pts), opt);
}

namespace detail {

// Integrates g over [u0, u1] in the log variable and closes the open end with
// the exact tail of an exponential fitted to g at that end. A nondecaying end
// means the integral diverges.
template <class G>
Result log_variable(G& g, double u0, double u1, bool open_low, const Options& opt)
{
    Result body = integrate(g, u0, u1, opt);
    const double ue = open_low ? u0 : u1;
    const double step = open_low ? 1.0 : -1.0;
    const double g0 = g(ue), g1 = g(ue + step), g2 = g(ue + 2.0 * step);
    body.evaluations += 3;
    if (g0 == 0.0 && g1 == 0.0) return body;
    if (!(g0 > 0.0 && g1 > 0.0 && g2 > 0.0)) {
        body.converged = false;
        body.abs_error = std::numeric_limits<double>::infinity();
        return body;
    }
    const double rate = std::log(g1 / g0);
    const double rate2 = std::log(g2 / g1);
    if (!(rate > 1e-3)) {
        body.converged = false;
        body.abs_error = std::numeric_limits<double>::infinity();
        return body;
    }
    const double tail = g0 / rate;
    body.value += tail;
    body.abs_error += rate2 > 0.0 ? std::abs(tail - g0 / rate2) : std::abs(tail);
    body.converged = body.converged && std::isfinite(body.value);
    return body;
}

} // namespace detail

/// Integral of f over (0, b] for f with an integrable power-type singularity at 0.
/// Uses r = e^u and an analytic power-law closure below r = b e^{-log_span}.
template <class F>
Result integrate_lower_singular(F&& f, double b, const Options& opt = {})
{
    require(b > 0.0, "integrate_lower_singular: b must be positive");
    const double ub = std::log(b);
    const double u0 = std::max(ub - opt.log_span, -700.0);
    auto g = [&](double u) {
        const double r = std::exp(u);
        return f(r) * r;
    };
    return detail::log_variable(g, u0, ub, true, opt);
}

/// Integral of f over [a, inf) for f decaying like a power. Uses r = e^u with an
/// analytic closure beyond r = a e^{log_span}.
template <class F>
Result integrate_upper_tail(F&& f, double a, const Options& opt = {})
{
    require(a > 0.0, "integrate_upper_tail: a must be positive");
    const double ua = std::log(a);
    const double u1 = std::min(ua + opt.log_span, 700.0);
    auto g = [&](double u) {
        const double r = std::exp(u);
        return f(r) * r;
    };
    return detail::log_variable(g, ua, u1, false, opt);
}

} // namespace bbm::quad
