#pragma once

#include <cmath>
#include <cstdint>
#include <random>

namespace qest {

// Deterministic random stream with a fixed draw cost per call:
// uniform01() consumes one engine word, normal() consumes exactly two
// (Box-Muller, no caching). Child streams are derived from (seed, index)
// so ensemble results do not depend on scheduling.
class Rng {
  public:
    explicit Rng(std::uint64_t seed) : eng_(seed) {}

    // Uniform on [0, 1) with 53-bit resolution.
    double uniform01() { return static_cast<double>(eng_() >> 11) * 0x1.0p-53; }

    // Uniform on (0, 1], never exactly zero.
    double uniform01_open_low() {
        return (static_cast<double>(eng_() >> 11) + 1.0) * 0x1.0p-53;
    }

    // Standard normal deviate.
    double normal() {
        const double u1 = uniform01_open_low();
        const double u2 = uniform01();
        return std::sqrt(-2.0 * std::log(u1)) *
               std::cos(2.0 * 3.14159265358979323846 * u2);
    }

    bool bernoulli(double p) { return uniform01() < p; }

    // Deterministic child stream for run `index` under a master seed.
    static Rng child(std::uint64_t master_seed, std::uint64_t index) {
        return Rng(splitmix64(master_seed + 0x9e3779b97f4a7c15ULL * (index + 1)));
    }

  private:
    static std::uint64_t splitmix64(std::uint64_t x) {
        x += 0x9e3779b97f4a7c15ULL;
        x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
        x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
        return x ^ (x >> 31);
    }

    std::mt19937_64 eng_;
};

}  // namespace qest
