#pragma once

#include <cmath>
#include <span>
#include <stdexcept>

#include "stbclab/matrix.hpp"
#include "stbclab/schemes.hpp"

namespace stbclab {

struct Codeword {
    Scheme scheme;
    CMat entries;  // T x N
};

inline CMat gram(const Codeword& c) { return c.entries.gram(); }

// Two-symbol pair encoding J(a, b, alpha) = a sin(alpha) - conj(b) cos(alpha).
// This single scalar is the unit the rate-2 designs are built from: each
// codeword entry, each equalized observation and each decoding cost is a
// function of four such pair terms.
inline cplx pair_term(cplx a, cplx b, double alpha) {
    return a * std::sin(alpha) - std::conj(b) * std::cos(alpha);
}

namespace detail {
inline void expect_symbols(std::span<const cplx> x, size_t k, const char* what) {
    if (x.size() != k)
        throw std::invalid_argument(std::string(what) + ": expected " + std::to_string(k) +
                                    " symbols, got " + std::to_string(x.size()));
}
}  // namespace detail

inline Codeword encode_alamouti(cplx x1, cplx x2) {
    CMat m(2, 2,
           {x1, x2,  //
            -std::conj(x2), std::conj(x1)});
    return {Scheme::alamouti, std::move(m)};
}

// 2x2 quasi-orthogonal block layout [[C12, C34], [-conj(C34), conj(C12)]]
// with elementwise conjugation of the Alamouti sub-blocks.
inline Codeword encode_jafarkhani(std::span<const cplx> x) {
    detail::expect_symbols(x, 4, "encode_jafarkhani");
    const cplx x1 = x[0], x2 = x[1], x3 = x[2], x4 = x[3];
    CMat m(4, 4,
           {x1, x2, x3, x4,                                                            //
            -std::conj(x2), std::conj(x1), -std::conj(x4), std::conj(x3),              //
            -std::conj(x3), -std::conj(x4), std::conj(x1), std::conj(x2),              //
            x4, -x3, -x2, x1});
    return {Scheme::jafarkhani, std::move(m)};
}

// Rate-1 non-orthogonal 4x3 layout: Alamouti blocks in the first two
// columns, plain symbol columns in the third.
inline Codeword encode_ozbek(std::span<const cplx> x) {
    detail::expect_symbols(x, 4, "encode_ozbek");
    const cplx x1 = x[0], x2 = x[1], x3 = x[2], x4 = x[3];
    CMat m(4, 3,
           {x1, x2, -x3,                              //
            -std::conj(x2), std::conj(x1), -x4,       //
            x3, x4, x1,                               //
            -std::conj(x4), std::conj(x3), x2});
    return {Scheme::ozbek4x3, std::move(m)};
}

// Coordinate-interleaved orthogonal design: the two diagonal Alamouti
// blocks carry symbols whose quadrature parts are swapped across blocks.
inline Codeword encode_ciod(std::span<const cplx> x) {
    detail::expect_symbols(x, 4, "encode_ciod");
    const cplx a(x[0].real(), x[2].imag());
    const cplx b(x[1].real(), x[3].imag());
    const cplx c(x[2].real(), x[0].imag());
    const cplx d(x[3].real(), x[1].imag());
    CMat m(4, 4,
           {a, b, 0.0, 0.0,                                //
            -std::conj(b), std::conj(a), 0.0, 0.0,         //
            0.0, 0.0, c, d,                                //
            0.0, 0.0, -std::conj(d), std::conj(c)});
    return {Scheme::ciod4x4, std::move(m)};
}

// Asymmetric CIOD: the CIOD codeword with its fourth column removed.
inline Codeword encode_aciod(std::span<const cplx> x) {
    detail::expect_symbols(x, 4, "encode_aciod");
    const Codeword full = encode_ciod(x);
    CMat m(4, 3);
    for (int r = 0; r < 4; ++r)
        for (int c = 0; c < 3; ++c) m(r, c) = full.entries(r, c);
    return {Scheme::aciod4x3, std::move(m)};
}

// Rate-2 4x3 design. Pair convention: odd pairs (x1,x2), (x5,x6) use
// alpha1, even pairs (x3,x4), (x7,x8) use alpha2, matching the Gram
// diagonal and the per-pair decoding chain.
inline Codeword encode_jagannath_p3(std::span<const cplx> x, double alpha1, double alpha2) {
    detail::expect_symbols(x, 8, "encode_jagannath_p3");
    check_pair_angle(alpha1);
    check_pair_angle(alpha2);
    const cplx j12 = pair_term(x[0], x[1], alpha1);
    const cplx j34 = pair_term(x[2], x[3], alpha2);
    const cplx j56 = pair_term(x[4], x[5], alpha1);
    const cplx j78 = pair_term(x[6], x[7], alpha2);
    CMat m(4, 3,
           {0.0, j12, j34,                                    //
            0.0, -std::conj(j34), std::conj(j12),             //
            j56, j78, 0.0,                                    //
            -std::conj(j78), std::conj(j56), 0.0});
    return {Scheme::jag4x3, std::move(m)};
}

// Rate-2 4x4 design: two pair-encoded Alamouti-like blocks on the diagonal.
inline Codeword encode_jagannath_p4(std::span<const cplx> x, double alpha1, double alpha2) {
    detail::expect_symbols(x, 8, "encode_jagannath_p4");
    check_pair_angle(alpha1);
    check_pair_angle(alpha2);
    const cplx j12 = pair_term(x[0], x[1], alpha1);
    const cplx j34 = pair_term(x[2], x[3], alpha2);
    const cplx j56 = pair_term(x[4], x[5], alpha1);
    const cplx j78 = pair_term(x[6], x[7], alpha2);
    CMat m(4, 4,
           {j12, j34, 0.0, 0.0,                               //
            -std::conj(j34), std::conj(j12), 0.0, 0.0,        //
            0.0, 0.0, j56, j78,                               //
            0.0, 0.0, -std::conj(j78), std::conj(j56)});
    return {Scheme::jag4x4, std::move(m)};
}

inline Codeword encode(const SchemeDescriptor& d, std::span<const cplx> x) {
    detail::expect_symbols(x, static_cast<size_t>(d.K), "encode");
    switch (d.id) {
        case Scheme::alamouti: return encode_alamouti(x[0], x[1]);
        case Scheme::jafarkhani: return encode_jafarkhani(x);
        case Scheme::ozbek4x3: return encode_ozbek(x);
        case Scheme::ciod4x4: return encode_ciod(x);
        case Scheme::aciod4x3: return encode_aciod(x);
        case Scheme::jag4x3: return encode_jagannath_p3(x, d.alpha1, d.alpha2);
        case Scheme::jag4x4: return encode_jagannath_p4(x, d.alpha1, d.alpha2);
    }
    throw std::logic_error("encode: unhandled scheme");
}

}  // namespace stbclab
