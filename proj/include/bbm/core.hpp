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
#include <charconv>
#include <cmath>
#include <cstddef>
#include <initializer_list>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace bbm {

inline constexpr int kMaxDim = 8;
inline constexpr double kPi = 3.14159265358979323846;

/// Raised when a quadrature or table construction cannot reach its requested
/// accuracy. Carries the error estimate that was actually achieved.
class NumericalError : public std::runtime_error {
public:
    NumericalError(const std::string& what, double achieved_error)
        : std::runtime_error(what), achieved_error_(achieved_error) {}

    double achieved_error() const noexcept { return achieved_error_; }

private:
    double achieved_error_;
};

inline void require(bool cond, const std::string& msg)
{
    if (!cond) throw std::invalid_argument(msg);
}

/// Small fixed-capacity point/vector in R^d, d <= kMaxDim.
class Vec {
public:
    Vec() = default;

    explicit Vec(int dim) : dim_(checked_dim(dim)) {}

    Vec(std::initializer_list<double> xs) : dim_(checked_dim(static_cast<int>(xs.size())))
    {
        std::copy(xs.begin(), xs.end(), x_.begin());
    }

    static Vec from(std::span<const double> xs)
    {
        Vec v(static_cast<int>(xs.size()));
        std::copy(xs.begin(), xs.end(), v.x_.begin());
        return v;
    }

    static Vec axis(int dim, int k)
    {
        Vec v(dim);
        v[k] = 1.0;
        return v;
    }

    int dim() const noexcept { return dim_; }
    double& operator[](int i) noexcept { return x_[static_cast<std::size_t>(i)]; }
    double operator[](int i) const noexcept { return x_[static_cast<std::size_t>(i)]; }

    std::span<const double> coords() const noexcept { return {x_.data(), static_cast<std::size_t>(dim_)}; }

    double dot(const Vec& o) const noexcept
    {
        double s = 0.0;
        for (int i = 0; i < dim_; ++i) s += x_[i] * o.x_[i];
        return s;
    }
    double norm2() const noexcept { return dot(*this); }
    double norm() const noexcept { return std::sqrt(norm2()); }

    Vec& operator+=(const Vec& o) noexcept
    {
        for (int i = 0; i < dim_; ++i) x_[i] += o.x_[i];
        return *this;
    }
    Vec& operator-=(const Vec& o) noexcept
    {
        for (int i = 0; i < dim_; ++i) x_[i] -= o.x_[i];
        return *this;
    }
    Vec& operator*=(double s) noexcept
    {
        for (int i = 0; i < dim_; ++i) x_[i] *= s;
        return *this;
    }

    friend Vec operator+(Vec a, const Vec& b) noexcept { return a += b; }
    friend Vec operator-(Vec a, const Vec& b) noexcept { return a -= b; }
    friend Vec operator*(double s, Vec a) noexcept { return a *= s; }
    friend Vec operator*(Vec a, double s) noexcept { return a *= s; }
    friend Vec operator-(Vec a) noexcept { return a *= -1.0; }

    friend bool operator==(const Vec& a, const Vec& b) noexcept
    {
        if (a.dim_ != b.dim_) return false;
        for (int i = 0; i < a.dim_; ++i)
            if (a.x_[i] != b.x_[i]) return false;
        return true;
    }

private:
    static int checked_dim(int d)
    {
        require(d >= 0 && d <= kMaxDim, "dimension must lie in [0, " + std::to_string(kMaxDim) + "]");
        return d;
    }

    std::array<double, kMaxDim> x_{};
    int dim_ = 0;
};

/// Neumaier-compensated running sum.
class CompensatedSum {
public:
    void add(double v) noexcept
    {
        const double t = sum_ + v;
        if (std::abs(sum_) >= std::abs(v))
            comp_ += (sum_ - t) + v;
        else
            comp_ += (v - t) + sum_;
        sum_ = t;
    }
    double value() const noexcept { return sum_ + comp_; }

private:
    double sum_ = 0.0;
    double comp_ = 0.0;
};

/// |S^{d-1}|, the surface measure of the unit sphere in R^d (|S^0| = 2).
inline double sphere_area(int d)
{
    require(d >= 1, "sphere_area: dimension must be >= 1");
    return 2.0 * std::pow(kPi, 0.5 * d) / std::tgamma(0.5 * d);
}

/// Lebesgue measure of the ball of radius r in R^d.
inline double ball_volume(int d, double r)
{
    require(d >= 0, "ball_volume: dimension must be >= 0");
    return std::pow(kPi, 0.5 * d) / std::tgamma(0.5 * d + 1.0) * std::pow(r, d);
}

/// Shortest decimal text that parses back to the same double.
inline std::string format_double(double v)
{
    std::array<char, 32> buf{};
    const auto res = std::to_chars(buf.data(), buf.data() + buf.size(), v);
    return std::string(buf.data(), res.ptr);
}

inline double beta_function(double x, double y)
{
    return std::exp(std::lgamma(x) + std::lgamma(y) - std::lgamma(x + y));
}

} // namespace bbm
