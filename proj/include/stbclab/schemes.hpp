#pragma once

#include <array>
#include <numbers>
#include <numeric>
#include <stdexcept>
#include <string>
#include <string_view>

namespace stbclab {

enum class Scheme { alamouti, jafarkhani, ozbek4x3, ciod4x4, aciod4x3, jag4x3, jag4x4 };

struct Rational {
    long long num = 0;
    long long den = 1;

    constexpr Rational() = default;
    constexpr Rational(long long n, long long d) : num(n), den(d) {
        const long long g = std::gcd(num, den);
        if (g != 0) {
            num /= g;
            den /= g;
        }
        if (den < 0) {
            num = -num;
            den = -den;
        }
    }

    double value() const { return static_cast<double>(num) / static_cast<double>(den); }

    std::string str() const {
        if (den == 1) return std::to_string(num);
        return std::to_string(num) + "/" + std::to_string(den);
    }

    friend constexpr bool operator==(const Rational& a, const Rational& b) {
        return a.num == b.num && a.den == b.den;
    }
};

inline constexpr double deg2rad(double d) { return d * std::numbers::pi / 180.0; }
inline constexpr double rad2deg(double r) { return r * 180.0 / std::numbers::pi; }

// Default encoding angles for the rate-2 schemes, pinned from the
// constrained 0.25-degree grid search in default_angle_search(): maximize
// the QAM-4 pair-term minimum subject to full diversity on BPSK, QAM-4 and
// QAM-16, rotated and unrotated. The unconstrained per-constellation optima
// (26.5 degrees on QAM-4, 14 degrees on QAM-16, via the `angles`
// subcommand) trade one constellation's diversity away; 28 degrees keeps
// them all while costing QAM-4 only 0.7 dB of pair distance.
inline constexpr double kDefaultAlpha1 = deg2rad(28.0);
inline constexpr double kDefaultAlpha2 = deg2rad(28.0);

struct SchemeDescriptor {
    Scheme id;
    std::string name;  // CLI token
    int T;             // epochs (channel uses) per block
    int N;             // transmit antennas
    int K;             // symbols per block
    bool has_angles = false;
    double alpha1 = 0.0;
    double alpha2 = 0.0;

    Rational rate() const { return {K, T}; }
    int pairs() const { return K / 2; }
};

inline const SchemeDescriptor& descriptor(Scheme s) {
    static const std::array<SchemeDescriptor, 7> table = {{
        {Scheme::alamouti, "alamouti", 2, 2, 2},
        {Scheme::jafarkhani, "jafarkhani", 4, 4, 4},
        {Scheme::ozbek4x3, "ozbek4x3", 4, 3, 4},
        {Scheme::ciod4x4, "ciod4x4", 4, 4, 4},
        {Scheme::aciod4x3, "aciod4x3", 4, 3, 4},
        {Scheme::jag4x3, "jag4x3", 4, 3, 8, true, kDefaultAlpha1, kDefaultAlpha2},
        {Scheme::jag4x4, "jag4x4", 4, 4, 8, true, kDefaultAlpha1, kDefaultAlpha2},
    }};
    return table[static_cast<size_t>(s)];
}

inline constexpr std::array<Scheme, 7> kAllSchemes = {
    Scheme::alamouti, Scheme::jafarkhani, Scheme::ozbek4x3, Scheme::ciod4x4,
    Scheme::aciod4x3, Scheme::jag4x3,     Scheme::jag4x4};

inline Scheme scheme_from_token(std::string_view token) {
    for (Scheme s : kAllSchemes)
        if (descriptor(s).name == token) return s;
    throw std::invalid_argument(
        "unknown scheme '" + std::string(token) +
        "' (choose alamouti, jafarkhani, ozbek4x3, ciod4x4, aciod4x3, jag4x3 or jag4x4)");
}

inline bool is_jagannath(Scheme s) { return s == Scheme::jag4x3 || s == Scheme::jag4x4; }

inline void check_pair_angle(double alpha) {
    if (!(alpha > 0.0 && alpha < std::numbers::pi / 2.0))
        throw std::invalid_argument("pair encoding angle must lie strictly inside (0, pi/2)");
}

}  // namespace stbclab
