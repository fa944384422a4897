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
#include <optional>

#include "bbm/core.hpp"
#include "bbm/parallel.hpp"
#include "bbm/quadrature.hpp"
#include "bbm/rng.hpp"

// K_{d,p}: the mean of |w . e|^p over the unit sphere S^{d-1}.
namespace bbm {

/// Sphere mean by latitude quadrature: (|S^{d-2}|/|S^{d-1}|) 2 int_0^{pi/2} cos^p(t) sin^{d-2}(t) dt.
inline double kdp_mean(int dim, double p)
{
    require(dim >= 1, "kdp_mean: dim must be >= 1");
    require(p >= 1.0, "kdp_mean: p must be >= 1");
    if (dim == 1) return 1.0;
    const double ratio = std::exp(std::lgamma(0.5 * dim) - std::lgamma(0.5 * (dim - 1))) / std::sqrt(kPi);
    auto f = [dim, p](double t) { return std::pow(std::cos(t), p) * std::pow(std::sin(t), dim - 2); };
    quad::Options opt;
    opt.abs_tol = 1e-15;
    opt.rel_tol = 1e-13;
    return ratio * 2.0 * quad::integrate(f, 0.0, 0.5 * kPi, opt).checked("kdp_mean");
}

/// Gamma(d/2) Gamma((p+1)/2) / (Gamma((d+p)/2) Gamma(1/2)).
inline double kdp_closed(int dim, double p)
{
    require(dim >= 1 && p >= 1.0, "kdp_closed: need dim >= 1 and p >= 1");
    return std::tgamma(0.5 * dim) * std::tgamma(0.5 * (p + 1.0)) / (std::tgamma(0.5 * (dim + p)) * std::sqrt(kPi));
}

/// The displayed variant with Gamma((d-1)/2) in the numerator; kept for discrepancy reports.
inline double kdp_printed(int dim, double p)
{
    require(dim >= 2 && p >= 1.0, "kdp_printed: need dim >= 2 and p >= 1");
    return std::tgamma(0.5 * (dim - 1)) * std::tgamma(0.5 * (p + 1.0)) /
           (std::tgamma(0.5 * (dim + p)) * std::sqrt(kPi));
}

struct McValue {
    double value = 0.0;
    double std_error = 0.0;
    std::int64_t n = 0;
};

/// Monte Carlo sphere mean of |w . e|^p with w uniform on S^{d-1}. Work is cut into
/// fixed chunks with their own streams, so the result does not depend on thread count.
inline McValue kdp_mc(int dim, double p, std::int64_t n, std::uint64_t seed, std::optional<Vec> direction = std::nullopt)
{
    require(dim >= 1 && p >= 1.0, "kdp_mc: need dim >= 1 and p >= 1");
    require(n >= 2, "kdp_mc: need n >= 2");
    Vec e = direction ? *direction : Vec::axis(dim, 0);
    require(e.dim() == dim && e.norm() > 0.0, "kdp_mc: direction must be a nonzero vector of the right dimension");
    e *= 1.0 / e.norm();

    constexpr std::int64_t kChunk = 1 << 14;
    const auto chunks = static_cast<std::size_t>((n + kChunk - 1) / kChunk);
    struct Sums {
        double s1 = 0.0, s2 = 0.0;
    };
    auto parts = map_indexed<Sums>(chunks, [&](std::size_t c) {
        Stream rng(seed, c);
        const std::int64_t m = std::min<std::int64_t>(kChunk, n - static_cast<std::int64_t>(c) * kChunk);
        CompensatedSum a, b;
        for (std::int64_t i = 0; i < m; ++i) {
            const double v = std::pow(std::abs(rng.unit_vector(dim).dot(e)), p);
            a.add(v);
            b.add(v * v);
        }
        return Sums{a.value(), b.value()};
    });
    CompensatedSum s1, s2;
    for (const auto& s : parts) {
        s1.add(s.s1);
        s2.add(s.s2);
    }
    const double nn = static_cast<double>(n);
    const double mean = s1.value() / nn;
    const double var = std::max(0.0, (s2.value() - nn * mean * mean) / (nn - 1.0));
    return {mean, std::sqrt(var / nn), n};
}

/// All routes side by side.
struct Kdp {
    int dim = 1;
    double p = 1.0;
    double value_mean = 1.0;
    double value_closed = 1.0;
    double value_printed = std::nan("");
    double discrepancy = 0.0;
    double printed_discrepancy = std::nan("");
};

inline Kdp kdp(int dim, double p)
{
    Kdp k;
    k.dim = dim;
    k.p = p;
    k.value_mean = kdp_mean(dim, p);
    k.value_closed = kdp_closed(dim, p);
    k.discrepancy = std::abs(k.value_mean - k.value_closed);
    if (dim >= 2) {
        k.value_printed = kdp_printed(dim, p);
        k.printed_discrepancy = std::abs(k.value_mean - k.value_printed);
    }
    return k;
}

} // namespace bbm
