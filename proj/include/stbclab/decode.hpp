#pragma once

#include <array>
#include <cmath>
#include <cstdint>
#include <limits>
#include <stdexcept>
#include <vector>

#include "stbclab/channel.hpp"
#include "stbclab/constellation.hpp"
#include "stbclab/encode.hpp"
#include "stbclab/matrix.hpp"
#include "stbclab/schemes.hpp"

namespace stbclab {

struct DecodedBlock {
    std::vector<int> indices;       // K constellation indices
    std::vector<cplx> symbols;      // K constellation points
    std::vector<double> pair_cost;  // K/2 per-pair costs (conditional-ML decoder)
    bool erased = false;            // degenerate channel, no decision made
    long cost_evaluations = 0;      // candidate cost evaluations (complexity probe)
};

namespace detail {

// The rate-2 codes place symbol pairs 0,1 on epochs 0-1 and pairs 2,3 on
// epochs 2-3; each half uses two of the transmit antennas.
struct PairHalf {
    int ant_a, ant_b;  // transmit antennas carrying this half
};

inline std::array<PairHalf, 2> pair_halves(Scheme s) {
    if (s == Scheme::jag4x3) return {{{1, 2}, {0, 1}}};
    if (s == Scheme::jag4x4) return {{{0, 1}, {2, 3}}};
    throw std::invalid_argument("pair decoding applies to the rate-2 schemes only");
}

// Angle selector: pairs 0,2 use alpha1; pairs 1,3 use alpha2.
inline double pair_angle(const SchemeDescriptor& d, int pair) {
    return (pair % 2 == 0) ? d.alpha1 : d.alpha2;
}

// Channel-energy selector: pairs 0,1 share psi[0]; pairs 2,3 share psi[1].
inline int pair_psi_index(int pair) { return pair / 2; }

}  // namespace detail

// Matched-filter equalization of the two Alamouti-structured halves.
// For receive antenna i and half with antennas (a, b):
//   [q_hi, q_lo] = W_i [z_even, conj(z_odd)],  W_i = [[ha*, hb], [hb*, -ha]]
// which turns the received pair into (|ha|^2 + |hb|^2) times the two pair
// terms plus equalized noise.
inline std::vector<std::array<cplx, 4>> evcm_equalize(const ReceivedBlock& rx,
                                                      const ChannelRealization& ch, Scheme scheme) {
    const SchemeDescriptor& d = descriptor(scheme);
    if (rx.y.rows() != d.T || rx.y.cols() != ch.rx() || ch.tx() != d.N)
        throw std::invalid_argument("evcm_equalize: dimension mismatch");
    const auto halves = detail::pair_halves(scheme);
    std::vector<std::array<cplx, 4>> q(ch.rx());
    for (int i = 0; i < ch.rx(); ++i) {
        for (int h = 0; h < 2; ++h) {
            const cplx ha = ch.h(halves[h].ant_a, i);
            const cplx hb = ch.h(halves[h].ant_b, i);
            const cplx z1 = rx.y(2 * h, i);
            const cplx z2c = std::conj(rx.y(2 * h + 1, i));
            q[i][2 * h] = std::conj(ha) * z1 + hb * z2c;
            q[i][2 * h + 1] = std::conj(hb) * z1 - ha * z2c;
        }
    }
    return q;
}

inline std::vector<std::array<cplx, 4>> evcm_equalize_p3(const ReceivedBlock& rx,
                                                         const ChannelRealization& ch) {
    return evcm_equalize(rx, ch, Scheme::jag4x3);
}

inline std::vector<std::array<cplx, 4>> evcm_equalize_p4(const ReceivedBlock& rx,
                                                         const ChannelRealization& ch) {
    return evcm_equalize(rx, ch, Scheme::jag4x4);
}

// Receive-antenna averages of the equalized observations plus the
// channel-energy sums needed to rescale them. In the noiseless case
// beta[p] = scale() * psi[m] * J_pair(p).
struct SufficientStatistics {
    std::array<cplx, 4> beta{};
    std::array<double, 2> psi{};
    double rho = 0.0;
    int n_rx = 0;
    Scheme scheme = Scheme::jag4x3;

    double scale() const {
        return std::sqrt(rho / static_cast<double>(descriptor(scheme).N)) /
               static_cast<double>(n_rx);
    }
};

inline SufficientStatistics sufficient_stats(const std::vector<std::array<cplx, 4>>& q,
                                             const ChannelRealization& ch, double rho,
                                             Scheme scheme) {
    SufficientStatistics st;
    st.rho = rho;
    st.n_rx = ch.rx();
    st.scheme = scheme;
    const auto halves = detail::pair_halves(scheme);
    for (const auto& qi : q)
        for (int p = 0; p < 4; ++p) st.beta[p] += qi[p];
    for (int p = 0; p < 4; ++p) st.beta[p] /= static_cast<double>(ch.rx());
    for (int h = 0; h < 2; ++h) {
        double e = 0.0;
        for (int i = 0; i < ch.rx(); ++i)
            e += std::norm(ch.h(halves[h].ant_a, i)) + std::norm(ch.h(halves[h].ant_b, i));
        st.psi[h] = e;
    }
    return st;
}

// Conditional ML detection: per pair, each candidate for the even symbol is
// peeled off the statistic, the odd symbol is sliced from what remains, and
// the candidate with the smallest residual cost wins. Exactly Q cost
// evaluations per pair.
inline DecodedBlock conditional_ml_decode(const SufficientStatistics& st, const Constellation& c,
                                          const SchemeDescriptor& d) {
    DecodedBlock out;
    out.indices.assign(8, 0);
    out.symbols.assign(8, 0.0);
    out.pair_cost.assign(4, 0.0);
    for (int p = 0; p < 4; ++p) {
        const double alpha = detail::pair_angle(d, p);
        const double g = st.scale() * st.psi[detail::pair_psi_index(p)];
        const double g_sin = g * std::sin(alpha);
        const double g_cos = g * std::cos(alpha);
        if (!(g_sin > 0.0)) {
            out.erased = true;
            return out;
        }
        int best_odd = 0, best_even = 0;
        double best_cost = std::numeric_limits<double>::infinity();
        for (int even = 0; even < c.order(); ++even) {
            const cplx conj_even = std::conj(c.points[even]);
            const cplx beta_tilde = st.beta[p] + g_cos * conj_even;
            const int odd = slice_nearest_index(c, beta_tilde / g_sin);
            const cplx model = g_sin * c.points[odd] - g_cos * conj_even;
            const double cost = std::norm(st.beta[p] - model);
            ++out.cost_evaluations;
            if (cost < best_cost) {
                best_cost = cost;
                best_odd = odd;
                best_even = even;
            }
        }
        out.indices[2 * p] = best_odd;
        out.indices[2 * p + 1] = best_even;
        out.symbols[2 * p] = c.points[best_odd];
        out.symbols[2 * p + 1] = c.points[best_even];
        out.pair_cost[p] = best_cost;
    }
    return out;
}

// ---------------------------------------------------------------------------
// Exhaustive ML oracle: argmin over enumerated codewords of
// ||Y - sqrt(rho/N) C H||_F^2, ties broken by enumeration order (last symbol
// index varies fastest). Kept deliberately direct -- candidates run through
// the real encoder and the real transmit model.

inline constexpr long kExhaustiveGuard = 10'000'000;

namespace detail {

inline double metric_rows(const CMat& y, const CMat& model, int row_begin, int row_end) {
    double m = 0.0;
    for (int r = row_begin; r < row_end; ++r)
        for (int c = 0; c < y.cols(); ++c) m += std::norm(y(r, c) - model(r, c));
    return m;
}

// Enumerates Q^|group| assignments of the symbols named in `group` (all
// other symbols zero) and returns the assignment minimizing the metric over
// rows [row_begin, row_end).
inline void exhaustive_group_search(const ReceivedBlock& rx, const ChannelRealization& ch,
                                    const SchemeDescriptor& d, const Constellation& c,
                                    const std::vector<int>& group, int row_begin, int row_end,
                                    DecodedBlock& out) {
    const double s = std::sqrt(rx.rho / static_cast<double>(d.N));
    const int q = c.order();
    double total = 1.0;
    for (size_t i = 0; i < group.size(); ++i) total *= q;
    if (total > static_cast<double>(kExhaustiveGuard))
        throw std::invalid_argument("exhaustive_ml_decode: search space exceeds the enumeration guard");

    std::vector<cplx> x(d.K, 0.0);
    std::vector<int> idx(group.size(), 0);
    std::vector<int> best_idx = idx;
    double best = std::numeric_limits<double>::infinity();
    while (true) {
        for (size_t i = 0; i < group.size(); ++i) x[group[i]] = c.points[idx[i]];
        CMat model = encode(d, x).entries * ch.h;
        model *= s;
        const double m = metric_rows(rx.y, model, row_begin, row_end);
        ++out.cost_evaluations;
        if (m < best) {
            best = m;
            best_idx = idx;
        }
        int k = static_cast<int>(group.size()) - 1;
        while (k >= 0 && ++idx[k] == q) idx[k--] = 0;
        if (k < 0) break;
    }
    for (size_t i = 0; i < group.size(); ++i) {
        out.indices[group[i]] = best_idx[i];
        out.symbols[group[i]] = c.points[best_idx[i]];
    }
}

}  // namespace detail

inline DecodedBlock exhaustive_ml_decode(const ReceivedBlock& rx, const ChannelRealization& ch,
                                         const SchemeDescriptor& d, const Constellation& c) {
    if (rx.y.rows() != d.T || ch.tx() != d.N || rx.y.cols() != ch.rx())
        throw std::invalid_argument("exhaustive_ml_decode: dimension mismatch");
    DecodedBlock out;
    out.indices.assign(d.K, 0);
    out.symbols.assign(d.K, 0.0);
    out.pair_cost.assign(d.K / 2, 0.0);
    if (is_jagannath(d.id)) {
        // The two diagonal halves occupy disjoint epochs, so the metric
        // splits into two independent four-symbol searches.
        detail::exhaustive_group_search(rx, ch, d, c, {0, 1, 2, 3}, 0, 2, out);
        detail::exhaustive_group_search(rx, ch, d, c, {4, 5, 6, 7}, 2, 4, out);
    } else {
        std::vector<int> all(d.K);
        for (int i = 0; i < d.K; ++i) all[i] = i;
        detail::exhaustive_group_search(rx, ch, d, c, all, 0, d.T, out);
    }
    return out;
}

// ---------------------------------------------------------------------------
// Structured decoders for the comparison schemes.

namespace detail {

// Alamouti matched filter over rows (r0, r0+1) and antennas (a, b);
// returns the combined statistics and the channel energy.
inline void alamouti_combine(const ReceivedBlock& rx, const ChannelRealization& ch, int r0, int a,
                             int b, cplx& beta1, cplx& beta2, double& energy) {
    beta1 = beta2 = 0.0;
    energy = 0.0;
    for (int i = 0; i < ch.rx(); ++i) {
        const cplx ha = ch.h(a, i);
        const cplx hb = ch.h(b, i);
        const cplx z1 = rx.y(r0, i);
        const cplx z2c = std::conj(rx.y(r0 + 1, i));
        beta1 += std::conj(ha) * z1 + hb * z2c;
        beta2 += std::conj(hb) * z1 - ha * z2c;
        energy += std::norm(ha) + std::norm(hb);
    }
}

inline DecodedBlock decode_alamouti(const ReceivedBlock& rx, const ChannelRealization& ch,
                                    const Constellation& c) {
    DecodedBlock out;
    out.indices.assign(2, 0);
    out.symbols.assign(2, 0.0);
    out.pair_cost.assign(1, 0.0);
    cplx b1, b2;
    double e;
    alamouti_combine(rx, ch, 0, 0, 1, b1, b2, e);
    const double g = std::sqrt(rx.rho / 2.0) * e;
    if (!(g > 0.0)) {
        out.erased = true;
        return out;
    }
    out.indices[0] = slice_nearest_index(c, b1 / g);
    out.indices[1] = slice_nearest_index(c, b2 / g);
    out.symbols[0] = c.points[out.indices[0]];
    out.symbols[1] = c.points[out.indices[1]];
    out.cost_evaluations = 2 * c.order();
    return out;
}

// Coordinate-interleaved decoding: after per-half Alamouti combining, each
// symbol's real and imaginary parts live in different halves with different
// channel energies, so candidates are scored with the matching per-part
// weights. Single-symbol decodable, Q candidates per symbol.
inline DecodedBlock decode_ciod_family(const ReceivedBlock& rx, const ChannelRealization& ch,
                                       const SchemeDescriptor& d, const Constellation& c) {
    DecodedBlock out;
    out.indices.assign(4, 0);
    out.symbols.assign(4, 0.0);
    out.pair_cost.assign(2, 0.0);
    const double s = std::sqrt(rx.rho / static_cast<double>(d.N));

    cplx beta_a, beta_b, beta_c, beta_d;
    double e_top, e_bot;
    alamouti_combine(rx, ch, 0, 0, 1, beta_a, beta_b, e_top);
    if (d.id == Scheme::ciod4x4) {
        alamouti_combine(rx, ch, 2, 2, 3, beta_c, beta_d, e_bot);
    } else {
        // Asymmetric variant: the lower half rides on antenna 2 alone,
        // sending c then -conj(d).
        beta_c = beta_d = 0.0;
        e_bot = 0.0;
        for (int i = 0; i < ch.rx(); ++i) {
            const cplx h2 = ch.h(2, i);
            beta_c += std::conj(h2) * rx.y(2, i);
            beta_d -= h2 * std::conj(rx.y(3, i));
            e_bot += std::norm(h2);
        }
    }
    if (!(e_top > 0.0) || !(e_bot > 0.0)) {
        out.erased = true;
        return out;
    }

    // Interleaved statistics: (real source, imag source) per symbol.
    struct Part {
        double obs;
        double energy;
    };
    const auto pick = [&](int sym) -> std::pair<Part, Part> {
        switch (sym) {
            case 0: return {{beta_a.real(), e_top}, {beta_c.imag(), e_bot}};
            case 1: return {{beta_b.real(), e_top}, {beta_d.imag(), e_bot}};
            case 2: return {{beta_c.real(), e_bot}, {beta_a.imag(), e_top}};
            default: return {{beta_d.real(), e_bot}, {beta_b.imag(), e_top}};
        }
    };
    for (int sym = 0; sym < 4; ++sym) {
        const auto [re_part, im_part] = pick(sym);
        int best = 0;
        double best_cost = std::numeric_limits<double>::infinity();
        for (int k = 0; k < c.order(); ++k) {
            const cplx p = c.points[k];
            const double dr = re_part.obs - s * re_part.energy * p.real();
            const double di = im_part.obs - s * im_part.energy * p.imag();
            const double cost = dr * dr / re_part.energy + di * di / im_part.energy;
            ++out.cost_evaluations;
            if (cost < best_cost) {
                best_cost = cost;
                best = k;
            }
        }
        out.indices[sym] = best;
        out.symbols[sym] = c.points[best];
    }
    return out;
}

// R-linear expansion of an encoder: C(x) = sum_k Re(x_k) A_k + Im(x_k) B_k.
// The pattern matrices are recovered by probing the encoder with unit
// inputs, and folded with the channel into effective receive-shaped bases.
struct EffectiveBasis {
    std::vector<CMat> re;  // s * A_k * H
    std::vector<CMat> im;  // s * B_k * H
};

inline EffectiveBasis effective_basis(const SchemeDescriptor& d, const ChannelRealization& ch,
                                      double s) {
    EffectiveBasis basis;
    std::vector<cplx> x(d.K, 0.0);
    for (int k = 0; k < d.K; ++k) {
        x[k] = 1.0;
        CMat fr = encode(d, x).entries * ch.h;
        fr *= s;
        basis.re.push_back(std::move(fr));
        x[k] = cplx(0.0, 1.0);
        CMat fi = encode(d, x).entries * ch.h;
        fi *= s;
        basis.im.push_back(std::move(fi));
        x[k] = 0.0;
    }
    return basis;
}

inline double re_inner(const CMat& a, const CMat& b) {
    double s = 0.0;
    for (size_t i = 0; i < a.data().size(); ++i)
        s += a.data()[i].real() * b.data()[i].real() + a.data()[i].imag() * b.data()[i].imag();
    return s;
}

// Exact ML search over one symbol group using the quadratic expansion of
// the metric in the 2g real coordinates of the group's symbols. Valid as a
// standalone group decision whenever the groups are metric-orthogonal
// (quasi-orthogonal pair groups) or the group covers all symbols.
inline void quadratic_group_search(const ReceivedBlock& rx, const EffectiveBasis& basis,
                                   const std::vector<int>& group, const Constellation& c,
                                   DecodedBlock& out) {
    const int g = static_cast<int>(group.size());
    const int dim = 2 * g;
    std::vector<const CMat*> v(dim);
    for (int i = 0; i < g; ++i) {
        v[2 * i] = &basis.re[group[i]];
        v[2 * i + 1] = &basis.im[group[i]];
    }
    std::vector<double> w(dim);
    for (int i = 0; i < dim; ++i) w[i] = re_inner(rx.y, *v[i]);
    std::vector<double> s_mat(dim * dim);
    for (int i = 0; i < dim; ++i)
        for (int j = 0; j < dim; ++j) s_mat[i * dim + j] = re_inner(*v[i], *v[j]);

    std::vector<int> idx(g, 0);
    std::vector<int> best_idx = idx;
    std::vector<double> u(dim);
    double best = std::numeric_limits<double>::infinity();
    while (true) {
        for (int i = 0; i < g; ++i) {
            u[2 * i] = c.points[idx[i]].real();
            u[2 * i + 1] = c.points[idx[i]].imag();
        }
        double cost = 0.0;
        for (int i = 0; i < dim; ++i) {
            double su = 0.0;
            for (int j = 0; j < dim; ++j) su += s_mat[i * dim + j] * u[j];
            cost += u[i] * (su - 2.0 * w[i]);
        }
        ++out.cost_evaluations;
        if (cost < best) {
            best = cost;
            best_idx = idx;
        }
        int k = g - 1;
        while (k >= 0 && ++idx[k] == c.order()) idx[k--] = 0;
        if (k < 0) break;
    }
    for (int i = 0; i < g; ++i) {
        out.indices[group[i]] = best_idx[i];
        out.symbols[group[i]] = c.points[best_idx[i]];
    }
}

// Jafarkhani ML: the quasi-orthogonal structure decouples the metric into
// the symbol pairs (x1, x4) and (x2, x3), each searched over Q^2.
inline DecodedBlock decode_jafarkhani(const ReceivedBlock& rx, const ChannelRealization& ch,
                                      const SchemeDescriptor& d, const Constellation& c) {
    DecodedBlock out;
    out.indices.assign(4, 0);
    out.symbols.assign(4, 0.0);
    out.pair_cost.assign(2, 0.0);
    if (!(ch.h.fro_norm2() > 0.0)) {
        out.erased = true;
        return out;
    }
    const double s = std::sqrt(rx.rho / static_cast<double>(d.N));
    const EffectiveBasis basis = effective_basis(d, ch, s);
    quadratic_group_search(rx, basis, {0, 3}, c, out);
    quadratic_group_search(rx, basis, {1, 2}, c, out);
    return out;
}

// Non-orthogonal 4x3 scheme: plain ML over all four symbols (Q^4), via the
// same quadratic expansion.
inline DecodedBlock decode_ozbek(const ReceivedBlock& rx, const ChannelRealization& ch,
                                 const SchemeDescriptor& d, const Constellation& c) {
    DecodedBlock out;
    out.indices.assign(4, 0);
    out.symbols.assign(4, 0.0);
    out.pair_cost.assign(2, 0.0);
    if (!(ch.h.fro_norm2() > 0.0)) {
        out.erased = true;
        return out;
    }
    const double q4 = std::pow(static_cast<double>(c.order()), 4);
    if (q4 > static_cast<double>(kExhaustiveGuard))
        throw std::invalid_argument("decode_ozbek: search space exceeds the enumeration guard");
    const double s = std::sqrt(rx.rho / static_cast<double>(d.N));
    const EffectiveBasis basis = effective_basis(d, ch, s);
    quadratic_group_search(rx, basis, {0, 1, 2, 3}, c, out);
    return out;
}

}  // namespace detail

inline DecodedBlock decode_reference(const ReceivedBlock& rx, const ChannelRealization& ch,
                                     Scheme scheme, const Constellation& c) {
    const SchemeDescriptor& d = descriptor(scheme);
    if (rx.y.rows() != d.T || ch.tx() != d.N || rx.y.cols() != ch.rx())
        throw std::invalid_argument("decode_reference: dimension mismatch");
    switch (scheme) {
        case Scheme::alamouti: return detail::decode_alamouti(rx, ch, c);
        case Scheme::jafarkhani: return detail::decode_jafarkhani(rx, ch, d, c);
        case Scheme::ciod4x4:
        case Scheme::aciod4x3: return detail::decode_ciod_family(rx, ch, d, c);
        case Scheme::ozbek4x3: return detail::decode_ozbek(rx, ch, d, c);
        default:
            throw std::invalid_argument("decode_reference: unsupported scheme " + d.name);
    }
}

enum class DecoderKind { conditional, exhaustive };

inline DecoderKind decoder_from_token(std::string_view token) {
    if (token == "conditional") return DecoderKind::conditional;
    if (token == "exhaustive") return DecoderKind::exhaustive;
    throw std::invalid_argument("unknown decoder '" + std::string(token) +
                                "' (choose conditional or exhaustive)");
}

// Scheme-appropriate fast path: conditional ML for the rate-2 designs,
// structured reference decoders otherwise.
inline DecodedBlock decode_block(const ReceivedBlock& rx, const ChannelRealization& ch,
                                 const SchemeDescriptor& d, const Constellation& c,
                                 DecoderKind kind) {
    if (kind == DecoderKind::exhaustive) return exhaustive_ml_decode(rx, ch, d, c);
    if (is_jagannath(d.id)) {
        const auto q = evcm_equalize(rx, ch, d.id);
        const auto st = sufficient_stats(q, ch, rx.rho, d.id);
        return conditional_ml_decode(st, c, d);
    }
    return decode_reference(rx, ch, d.id, c);
}

}  // namespace stbclab
