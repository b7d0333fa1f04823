#pragma once

#include <cmath>
#include <stdexcept>

#include "stbclab/encode.hpp"
#include "stbclab/matrix.hpp"
#include "stbclab/rng.hpp"

namespace stbclab {

// Quasi-static Rayleigh flat fading: one draw is held fixed over a whole
// codeword block. Entry (t, r) is the gain from transmit antenna t to
// receive antenna r, i.i.d. CN(0, 1).
struct ChannelRealization {
    CMat h;  // N x N_r

    int tx() const { return h.rows(); }
    int rx() const { return h.cols(); }
};

inline ChannelRealization sample_channel(int n_tx, int n_rx, Rng& rng) {
    if (n_tx < 1 || n_rx < 1) throw std::invalid_argument("sample_channel: antenna counts must be >= 1");
    CMat h(n_tx, n_rx);
    for (int t = 0; t < n_tx; ++t)
        for (int r = 0; r < n_rx; ++r) h(t, r) = rng.cn01();
    return {std::move(h)};
}

struct ReceivedBlock {
    CMat y;     // T x N_r
    double rho; // linear SNR
    double n0;  // noise power per complex entry
};

// Y = sqrt(rho / N) * C * H + noise, noise i.i.d. CN(0, n0).
inline ReceivedBlock transmit(const Codeword& cw, const ChannelRealization& ch, double rho,
                              double n0, Rng& rng) {
    if (cw.entries.cols() != ch.tx())
        throw std::invalid_argument("transmit: codeword antenna count does not match channel");
    const double s = std::sqrt(rho / static_cast<double>(ch.tx()));
    CMat y = cw.entries * ch.h;
    y *= s;
    if (n0 > 0.0) {
        const double sigma = std::sqrt(n0);
        for (int t = 0; t < y.rows(); ++t)
            for (int r = 0; r < y.cols(); ++r) y(t, r) += sigma * rng.cn01();
    }
    return {std::move(y), rho, n0};
}

}  // namespace stbclab
