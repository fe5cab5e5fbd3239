#pragma once

#include <cstdint>
#include <limits>
#include <random>
#include <vector>

namespace atdeec {

// Deterministic random stream used everywhere randomness is needed.
//
// The engine is std::mt19937_64, whose raw output sequence is fixed by the
// C++ standard, so traces reproduce bit-for-bit across compilers and
// platforms. Standard-library distributions are implementation-defined and
// are deliberately not used; the mappings below are part of the contract.
class SeededRng {
public:
    explicit SeededRng(std::uint64_t seed) : engine_(seed) {}

    // Algorithm identifier recorded in run outputs.
    static const char* algorithm() { return "mt19937_64"; }

    // Uniform double in [0, 1), 53-bit resolution.
    double uniform01() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

    // Uniform double in [lo, hi).
    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform01(); }

    // Uniform integer in [0, n), rejection sampled to avoid modulo bias.
    std::uint64_t below(std::uint64_t n) {
        const std::uint64_t max = std::numeric_limits<std::uint64_t>::max();
        const std::uint64_t limit = max - max % n;
        std::uint64_t x;
        do {
            x = engine_();
        } while (x >= limit);
        return x % n;
    }

    // Fisher-Yates shuffle driven by below(), so the permutation is
    // reproducible regardless of the standard library in use.
    template <typename T>
    void shuffle(std::vector<T>& v) {
        for (std::size_t i = v.size(); i > 1; --i) {
            const std::size_t j = static_cast<std::size_t>(below(i));
            std::swap(v[i - 1], v[j]);
        }
    }

private:
    std::mt19937_64 engine_;
};

}  // namespace atdeec
