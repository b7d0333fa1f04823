#pragma once

#include <cmath>
#include <complex>
#include <cstdint>
#include <numbers>

namespace stbclab {

// Counter-based random stream: a SplitMix64 sequence keyed by an arbitrary
// set of 64-bit labels. Streams derived from the same master seed but
// different labels are independent for simulation purposes, and a stream's
// output depends only on (seed, labels), never on which worker runs it.
class Rng {
  public:
    explicit Rng(std::uint64_t seed) : state_(seed) {}

    std::uint64_t next() {
        std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ULL);
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        return z ^ (z >> 31);
    }

    // Uniform in [0, 1) with 53-bit resolution.
    double uniform01() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

    // Uniform integer in [0, n). Multiply-shift; exact for the power-of-two
    // constellation orders used here, bias < n * 2^-64 otherwise.
    std::uint32_t below(std::uint32_t n) {
        return static_cast<std::uint32_t>((static_cast<unsigned __int128>(next()) * n) >> 64);
    }

    // One standard normal pair via Box-Muller.
    void gaussian_pair(double& g0, double& g1) {
        const double u1 = 1.0 - uniform01();  // (0, 1], keeps log finite
        const double u2 = uniform01();
        const double r = std::sqrt(-2.0 * std::log(u1));
        const double t = 2.0 * std::numbers::pi * u2;
        g0 = r * std::cos(t);
        g1 = r * std::sin(t);
    }

    double gaussian() {
        double g0, g1;
        gaussian_pair(g0, g1);
        return g0;
    }

    // Circularly symmetric complex Gaussian with E|z|^2 = 1.
    std::complex<double> cn01() {
        double g0, g1;
        gaussian_pair(g0, g1);
        return {g0 * std::numbers::sqrt2 / 2.0, g1 * std::numbers::sqrt2 / 2.0};
    }

  private:
    std::uint64_t state_;
};

inline std::uint64_t stream_key(std::uint64_t seed, std::uint64_t a, std::uint64_t b) {
    Rng h(seed);
    std::uint64_t k = h.next();
    k ^= a;
    Rng h2(k);
    k = h2.next() ^ b;
    Rng h3(k);
    return h3.next();
}

inline Rng derive_stream(std::uint64_t seed, std::uint64_t a, std::uint64_t b) {
    return Rng(stream_key(seed, a, b));
}

}  // namespace stbclab
