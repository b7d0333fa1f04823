#pragma once

#include <cmath>
#include <complex>
#include <limits>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "stbclab/matrix.hpp"
#include "stbclab/rng.hpp"

namespace stbclab {

// A finite signal constellation, normalized to unit average energy.
// Points are ordered (row-major over the QAM grid, real part ascending
// fastest) so that indices are stable across runs.
struct Constellation {
    std::string name;
    std::vector<cplx> points;
    double rotation = 0.0;  // radians, already applied to the points

    int order() const { return static_cast<int>(points.size()); }

    double avg_energy() const {
        double s = 0.0;
        for (const cplx& p : points) s += std::norm(p);
        return s / static_cast<double>(points.size());
    }

    double min_distance() const {
        double d = std::numeric_limits<double>::infinity();
        for (size_t i = 0; i < points.size(); ++i)
            for (size_t j = i + 1; j < points.size(); ++j)
                d = std::min(d, std::abs(points[i] - points[j]));
        return d;
    }
};

// Square/standard QAM of order 2, 4 or 16, scaled to unit average energy
// (1/sqrt(2) for QAM-4, 1/sqrt(10) for QAM-16).
inline Constellation build_qam(int order) {
    Constellation c;
    switch (order) {
        case 2:
            c.name = "bpsk";
            c.points = {{-1.0, 0.0}, {1.0, 0.0}};
            break;
        case 4: {
            c.name = "qam4";
            const double a = 1.0 / std::sqrt(2.0);
            for (int iy = 0; iy < 2; ++iy)
                for (int ix = 0; ix < 2; ++ix)
                    c.points.emplace_back((2 * ix - 1) * a, (2 * iy - 1) * a);
            break;
        }
        case 16: {
            c.name = "qam16";
            const double a = 1.0 / std::sqrt(10.0);
            const double level[4] = {-3.0, -1.0, 1.0, 3.0};
            for (int iy = 0; iy < 4; ++iy)
                for (int ix = 0; ix < 4; ++ix)
                    c.points.emplace_back(level[ix] * a, level[iy] * a);
            break;
        }
        default:
            throw std::invalid_argument("unsupported QAM order " + std::to_string(order) +
                                        " (supported: 2, 4, 16)");
    }
    return c;
}

inline Constellation rotate_constellation(const Constellation& c, double theta) {
    Constellation out = c;
    const cplx w = std::polar(1.0, theta);
    for (cplx& p : out.points) p *= w;
    out.rotation = c.rotation + theta;
    return out;
}

// Nearest constellation point; ties break toward the lowest index.
inline std::pair<int, cplx> slice_nearest(const Constellation& c, cplx y) {
    int best = 0;
    double best_d = std::numeric_limits<double>::infinity();
    for (int i = 0; i < c.order(); ++i) {
        const double d = std::norm(y - c.points[i]);
        if (d < best_d) {
            best_d = d;
            best = i;
        }
    }
    return {best, c.points[best]};
}

inline int slice_nearest_index(const Constellation& c, cplx y) {
    return slice_nearest(c, y).first;
}

// k i.i.d. uniform draws; k = 0 yields an empty list.
inline std::vector<cplx> sample_symbols(const Constellation& c, int k, Rng& rng) {
    if (k < 0) throw std::invalid_argument("sample_symbols: negative count");
    std::vector<cplx> out;
    out.reserve(k);
    for (int i = 0; i < k; ++i) out.push_back(c.points[rng.below(c.order())]);
    return out;
}

inline std::vector<int> sample_symbol_indices(const Constellation& c, int k, Rng& rng) {
    if (k < 0) throw std::invalid_argument("sample_symbols: negative count");
    std::vector<int> out;
    out.reserve(k);
    for (int i = 0; i < k; ++i) out.push_back(static_cast<int>(rng.below(c.order())));
    return out;
}

inline Constellation constellation_from_token(std::string_view token) {
    if (token == "bpsk") return build_qam(2);
    if (token == "qam4") return build_qam(4);
    if (token == "qam16") return build_qam(16);
    throw std::invalid_argument("unknown modulation '" + std::string(token) +
                                "' (choose bpsk, qam4 or qam16)");
}

}  // namespace stbclab
