#pragma once

#include <bit>
#include <cmath>
#include <limits>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "stbclab/constellation.hpp"
#include "stbclab/encode.hpp"
#include "stbclab/schemes.hpp"

namespace stbclab {

// Maximal rate of a square-matrix-embeddable complex orthogonal design,
// ceil(log2 N + 1) / (2 ceil(log2 N)). N = 1 is the trivial single-antenna
// case, reported as rate 1 by convention.
inline Rational ostbc_max_rate(int n) {
    if (n < 1) throw std::invalid_argument("ostbc_max_rate: antenna count must be >= 1");
    if (n == 1) return {1, 1};
    const long long c = std::bit_width(static_cast<unsigned>(n - 1));  // ceil(log2 n)
    return {c + 1, 2 * c};
}

// All pairwise differences x - u over the constellation, deduplicated to
// 1e-12 absolute, first occurrence kept.
inline std::vector<cplx> difference_set(const Constellation& c) {
    std::vector<cplx> out;
    for (const cplx& x : c.points) {
        for (const cplx& u : c.points) {
            const cplx d = x - u;
            bool seen = false;
            for (const cplx& e : out)
                if (std::abs(e - d) <= 1e-12) {
                    seen = true;
                    break;
                }
            if (!seen) out.push_back(d);
        }
    }
    return out;
}

struct DiversityReport {
    Scheme scheme;
    std::string constellation;
    double min_det = 0.0;        // min det((X-U)^H (X-U)) over admissible difference tuples
    bool full_diversity = false; // min_det > 1e-12
    std::vector<cplx> witness;   // minimizing difference tuple (d1..d8)
};

inline constexpr double kFullDiversityTol = 1e-12;

// det((X-U)^H (X-U)) of a difference tuple, via the closed-form
// factorization into the two per-half pair-term energies.
inline double pairwise_det_formula(Scheme scheme, std::span<const cplx> d, double alpha1,
                                   double alpha2) {
    if (d.size() != 8) throw std::invalid_argument("pairwise_det_formula: expected 8 differences");
    const double c_half = std::norm(pair_term(d[0], d[1], alpha1)) +
                          std::norm(pair_term(d[2], d[3], alpha2));
    const double d_half = std::norm(pair_term(d[4], d[5], alpha1)) +
                          std::norm(pair_term(d[6], d[7], alpha2));
    if (scheme == Scheme::jag4x3) return d_half * (c_half + d_half) * c_half;
    if (scheme == Scheme::jag4x4) return (c_half * d_half) * (c_half * d_half);
    throw std::invalid_argument("pairwise_det_formula: rate-2 schemes only");
}

namespace detail {

struct PairMin {
    double value;
    cplx a, b;
};

// min |J(a, b, alpha)|^2 over difference pairs (a, b) != (0, 0).
inline PairMin min_pair_energy(const std::vector<cplx>& diffs, double alpha) {
    PairMin best{std::numeric_limits<double>::infinity(), 0.0, 0.0};
    for (const cplx& a : diffs) {
        for (const cplx& b : diffs) {
            if (a == cplx(0.0) && b == cplx(0.0)) continue;
            const double e = std::norm(pair_term(a, b, alpha));
            if (e < best.value) best = {e, a, b};
        }
    }
    return best;
}

}  // namespace detail

// Minimum determinant over codeword pairs that differ in both diagonal
// halves. A half's energy C = |J1|^2 + |J2|^2 is minimized by zeroing one
// pair and minimizing the other, so the four-difference search collapses to
// the per-angle pair minima; the determinant is then monotone in the two
// half energies and bottoms out with both halves at the global pair minimum.
inline DiversityReport min_coding_gain(Scheme scheme, const Constellation& c, double alpha1,
                                       double alpha2) {
    if (!is_jagannath(scheme))
        throw std::invalid_argument("min_coding_gain: rate-2 schemes only");
    check_pair_angle(alpha1);
    check_pair_angle(alpha2);
    const std::vector<cplx> diffs = difference_set(c);
    const detail::PairMin m1 = detail::min_pair_energy(diffs, alpha1);
    const detail::PairMin m2 = detail::min_pair_energy(diffs, alpha2);

    std::vector<cplx> half(4, 0.0);
    if (m1.value <= m2.value) {
        half[0] = m1.a;
        half[1] = m1.b;
    } else {
        half[2] = m2.a;
        half[3] = m2.b;
    }
    DiversityReport rep;
    rep.scheme = scheme;
    rep.constellation = c.name;
    rep.witness = {half[0], half[1], half[2], half[3], half[0], half[1], half[2], half[3]};
    rep.min_det = pairwise_det_formula(scheme, rep.witness, alpha1, alpha2);
    rep.full_diversity = rep.min_det > kFullDiversityTol;
    return rep;
}

struct AngleSearchResult {
    double alpha1 = 0.0;
    double alpha2 = 0.0;
    double min_det = 0.0;
};

// Grid search over (0, pi/2)^2 maximizing the minimum determinant. The
// objective is min(m(alpha1), m(alpha2)) pushed through a monotone map, so
// the two axes decouple and one scan of the grid suffices; ties resolve to
// the smallest angle, hence the smallest (alpha1, alpha2) lexicographically.
inline AngleSearchResult optimize_angles(Scheme scheme, const Constellation& c,
                                         double grid_step) {
    if (!is_jagannath(scheme))
        throw std::invalid_argument("optimize_angles: rate-2 schemes only");
    if (!(grid_step > 0.0)) throw std::invalid_argument("optimize_angles: grid step must be > 0");
    const std::vector<cplx> diffs = difference_set(c);
    double best_m = -1.0;
    double best_alpha = 0.0;
    for (int k = 1;; ++k) {
        const double alpha = k * grid_step;
        if (!(alpha < std::numbers::pi / 2.0)) break;
        const double m = detail::min_pair_energy(diffs, alpha).value;
        if (m > best_m) {
            best_m = m;
            best_alpha = alpha;
        }
    }
    if (best_m < 0.0) throw std::invalid_argument("optimize_angles: grid step leaves no interior point");
    AngleSearchResult res;
    res.alpha1 = best_alpha;
    res.alpha2 = best_alpha;
    res.min_det = min_coding_gain(scheme, c, res.alpha1, res.alpha2).min_det;
    return res;
}

// Derivation of the shipped default pair angles: on the same grid the
// plain optimizer uses, maximize the QAM-4 pair-term minimum (QAM-4 is the
// rate-2 schemes' headline operating point) subject to full diversity of
// both schemes on every supported constellation, rotated and unrotated.
// The unconstrained QAM-4 optimum atan(1/2) is excluded by the constraint:
// tan(alpha) = 1/2 is realizable as a QAM-16 difference ratio, which
// collapses the QAM-16 minimum determinant.
inline AngleSearchResult default_angle_search(double grid_step) {
    if (!(grid_step > 0.0)) throw std::invalid_argument("default_angle_search: grid step must be > 0");
    std::vector<Constellation> family;
    for (int order : {2, 4, 16}) {
        family.push_back(build_qam(order));
        family.push_back(rotate_constellation(build_qam(order), deg2rad(31.7175)));
    }
    const std::vector<cplx> qam4_diffs = difference_set(build_qam(4));
    double best_m = -1.0;
    double best_alpha = 0.0;
    for (int k = 1;; ++k) {
        const double alpha = k * grid_step;
        if (!(alpha < std::numbers::pi / 2.0)) break;
        bool diverse = true;
        for (const Constellation& c : family) {
            for (Scheme s : {Scheme::jag4x3, Scheme::jag4x4}) {
                if (min_coding_gain(s, c, alpha, alpha).min_det <= kFullDiversityTol) {
                    diverse = false;
                    break;
                }
            }
            if (!diverse) break;
        }
        if (!diverse) continue;
        const double m = detail::min_pair_energy(qam4_diffs, alpha).value;
        if (m > best_m) {
            best_m = m;
            best_alpha = alpha;
        }
    }
    if (best_m < 0.0)
        throw std::runtime_error("default_angle_search: no grid angle satisfies the constraints");
    AngleSearchResult res;
    res.alpha1 = best_alpha;
    res.alpha2 = best_alpha;
    res.min_det = min_coding_gain(Scheme::jag4x4, build_qam(4), best_alpha, best_alpha).min_det;
    return res;
}

struct RateDelayRow {
    std::string design;
    int tx_antennas;
    Rational rate;
    int delay;
    std::optional<Scheme> scheme;  // set when the design is implemented here
};

inline std::vector<RateDelayRow> rate_delay_table() {
    return {
        {"Jagannath 4x3", 3, {2, 1}, 4, Scheme::jag4x3},
        {"Jagannath 4x4", 4, {2, 1}, 4, Scheme::jag4x4},
        {"ACIOD", 3, {1, 1}, 4, Scheme::aciod4x3},
        {"CIOD", 4, {1, 1}, 4, Scheme::ciod4x4},
        {"Jafarkhani", 4, {1, 1}, 4, Scheme::jafarkhani},
        {"Ozbek et al.", 3, {1, 1}, 4, Scheme::ozbek4x3},
        {"Tarokh et al.", 3, {3, 4}, 4, std::nullopt},
        {"Tarokh et al.", 4, {3, 4}, 4, std::nullopt},
        {"Grover et al.", 4, {1, 1}, 8, std::nullopt},
    };
}

}  // namespace stbclab
