#pragma once

#include <cmath>
#include <cstdint>
#include <numbers>
#include <utility>

namespace lora {

// Counter-based stream: each Monte Carlo trial owns a private generator
// derived from (seed, trial index), so results do not depend on thread
// count or scheduling.
class TrialRng {
  public:
    TrialRng(std::uint64_t seed, std::uint64_t trial) {
        state_ = mix(seed + 0x9E3779B97F4A7C15ULL * (trial + 1));
        state_ = mix(state_ ^ trial);
    }

    std::uint64_t next() {
        state_ += 0x9E3779B97F4A7C15ULL;
        return mix(state_);
    }

    // uniform in [0, 1)
    double u01() { return double(next() >> 11) * 0x1.0p-53; }

    // uniform in (0, 1], safe under log()
    double u01_pos() { return double((next() >> 11) + 1) * 0x1.0p-53; }

    // uniform integer in [0, bound); Lemire multiply-shift
    std::uint64_t below(std::uint64_t bound) {
        unsigned __int128 m = (unsigned __int128)next() * bound;
        auto lo = (std::uint64_t)m;
        if (lo < bound) {
            std::uint64_t threshold = (0 - bound) % bound;
            while (lo < threshold) {
                m = (unsigned __int128)next() * bound;
                lo = (std::uint64_t)m;
            }
        }
        return (std::uint64_t)(m >> 64);
    }

    // one circular complex Gaussian sample, unit per-component variance
    std::pair<double, double> normal2() {
        double r = std::sqrt(-2.0 * std::log(u01_pos()));
        double t = 2.0 * std::numbers::pi * u01();
        return {r * std::cos(t), r * std::sin(t)};
    }

  private:
    static std::uint64_t mix(std::uint64_t z) {
        z ^= z >> 30;
        z *= 0xBF58476D1CE4E5B9ULL;
        z ^= z >> 27;
        z *= 0x94D049BB133111EBULL;
        z ^= z >> 31;
        return z;
    }

    std::uint64_t state_;
};

}  // namespace lora
