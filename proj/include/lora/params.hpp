#pragma once

#include <stdexcept>
#include <string>

namespace lora {

// Symbol geometry: n = 2^sf chips per symbol, one sample per chip.
struct LoraParams {
    int sf = 7;
    int n = 128;
};

// sf 7..12 are the deployed factors; 4..6 are admitted so brute-force
// reference computations stay affordable in tests.
inline LoraParams make_params(int sf) {
    if (sf < 4 || sf > 12)
        throw std::invalid_argument("spreading factor must be in [4, 12], got " + std::to_string(sf));
    return LoraParams{sf, 1 << sf};
}

}  // namespace lora
