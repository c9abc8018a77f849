#pragma once

#include <cstdint>
#include <random>
#include <string>
#include <vector>

namespace eai {

// Seeded generator whose outputs are identical on every platform: the
// engine is mt19937_64 (fully specified by the standard) and the
// distributions are computed here rather than by the library.
class Rng {
public:
    explicit Rng(std::uint64_t seed = 0) : engine_(seed) {}

    std::uint64_t next_u64() { return engine_(); }
    // Uniform in [0, 1) with 53 random bits.
    double uniform01() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }
    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform01(); }
    // Standard normal via Box-Muller (one draw per call, no caching).
    double normal();
    // Uniform integer in [0, n).
    std::uint64_t below(std::uint64_t n);

    template <class T>
    void shuffle(std::vector<T>& items) {
        for (std::size_t i = items.size(); i > 1; --i) {
            const auto j = static_cast<std::size_t>(below(i));
            std::swap(items[i - 1], items[j]);
        }
    }

    std::string state() const;
    void set_state(const std::string& text);

private:
    std::mt19937_64 engine_;
};

}  // namespace eai
