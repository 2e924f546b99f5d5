#pragma once

#include <cstdint>
#include <random>
#include <vector>

namespace lscr {

// Seeded RNG wrapper. mt19937_64 output is fully specified by the standard;
// the bounded draws below avoid std::uniform_int_distribution, whose exact
// sequence is implementation-defined, so generated artifacts are byte-stable
// across toolchains.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : eng_(seed) {}

    std::uint64_t next() { return eng_(); }

    // Uniform-ish draw in [0, n). Modulo bias is irrelevant at the n used here.
    std::uint64_t below(std::uint64_t n) { return n ? eng_() % n : 0; }

    std::size_t index(std::size_t n) { return static_cast<std::size_t>(below(n)); }

    double unit() { return static_cast<double>(eng_() >> 11) * 0x1.0p-53; }

    bool coin() { return (eng_() & 1u) != 0; }

    // Fisher-Yates.
    template <typename T>
    void shuffle(std::vector<T>& v) {
        for (std::size_t i = v.size(); i > 1; --i) {
            std::size_t j = index(i);
            std::swap(v[i - 1], v[j]);
        }
    }

    template <typename T>
    const T& pick(const std::vector<T>& v) {
        return v[index(v.size())];
    }

private:
    std::mt19937_64 eng_;
};

} // namespace lscr
