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

#include <array>
#include <cmath>
#include <cstdint>

#include "bbm/core.hpp"

namespace bbm {

/// Philox4x32-10 block function (Salmon et al. counter-based generator).
inline std::array<std::uint32_t, 4> philox4x32(std::array<std::uint32_t, 4> ctr, std::array<std::uint32_t, 2> key)
{
    constexpr std::uint32_t kM0 = 0xD2511F53u, kM1 = 0xCD9E8D57u;
    constexpr std::uint32_t kW0 = 0x9E3779B9u, kW1 = 0xBB67AE85u;
    for (int round = 0; round < 10; ++round) {
        if (round > 0) {
            key[0] += kW0;
            key[1] += kW1;
        }
        const std::uint64_t p0 = static_cast<std::uint64_t>(kM0) * ctr[0];
        const std::uint64_t p1 = static_cast<std::uint64_t>(kM1) * ctr[2];
        ctr = {static_cast<std::uint32_t>(p1 >> 32) ^ ctr[1] ^ key[0], static_cast<std::uint32_t>(p1),
               static_cast<std::uint32_t>(p0 >> 32) ^ ctr[3] ^ key[1], static_cast<std::uint32_t>(p0)};
    }
    return ctr;
}

inline std::uint64_t splitmix64(std::uint64_t x)
{
    x += 0x9E3779B97F4A7C15ull;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ull;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBull;
    return x ^ (x >> 31);
}

/// Independent random stream addressed by (seed, stream id). Two streams with
/// different ids never share a Philox counter.
class Stream {
public:
    Stream(std::uint64_t seed, std::uint64_t stream_id)
        : key_{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32)}, stream_(stream_id)
    {
    }

    std::uint64_t next_u64()
    {
        if (used_ == 2) refill();
        const std::uint64_t v = (static_cast<std::uint64_t>(buf_[2 * used_]) << 32) | buf_[2 * used_ + 1];
        ++used_;
        return v;
    }

    /// Uniform on the open interval (0, 1) with 53 random bits.
    double uniform() { return (static_cast<double>(next_u64() >> 11) + 0.5) * 0x1.0p-53; }

    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

    double normal()
    {
        if (has_spare_) {
            has_spare_ = false;
            return spare_;
        }
        const double u1 = uniform(), u2 = uniform();
        const double rad = std::sqrt(-2.0 * std::log(u1));
        spare_ = rad * std::sin(2.0 * kPi * u2);
        has_spare_ = true;
        return rad * std::cos(2.0 * kPi * u2);
    }

    /// Uniform direction on S^{d-1}; in d = 1 a random sign.
    Vec unit_vector(int dim)
    {
        Vec w(dim);
        if (dim == 1) {
            w[0] = (next_u64() >> 63) ? 1.0 : -1.0;
            return w;
        }
        double n2 = 0.0;
        do {
            for (int i = 0; i < dim; ++i) w[i] = normal();
            n2 = w.norm2();
        } while (n2 == 0.0);
        return w * (1.0 / std::sqrt(n2));
    }

private:
    void refill()
    {
        const std::array<std::uint32_t, 4> ctr{static_cast<std::uint32_t>(block_), static_cast<std::uint32_t>(block_ >> 32),
                                               static_cast<std::uint32_t>(stream_),
                                               static_cast<std::uint32_t>(stream_ >> 32)};
        buf_ = philox4x32(ctr, key_);
        ++block_;
        used_ = 0;
    }

    std::array<std::uint32_t, 2> key_;
    std::uint64_t stream_;
    std::uint64_t block_ = 0;
    std::array<std::uint32_t, 4> buf_{};
    int used_ = 2;
    double spare_ = 0.0;
    bool has_spare_ = false;
};

} // namespace bbm
