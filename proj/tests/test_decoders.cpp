#include <gtest/gtest.h>

#include <cmath>
#include <vector>

#include "stbclab/channel.hpp"
#include "stbclab/constellation.hpp"
#include "stbclab/decode.hpp"
#include "stbclab/encode.hpp"

using namespace stbclab;

namespace {

struct Instance {
    std::vector<int> tx_indices;
    std::vector<cplx> tx_symbols;
    ChannelRealization ch;
    ReceivedBlock rx;
};

Instance make_instance(Scheme s, const Constellation& c, double snr_db, double n0, Rng& rng,
                       int n_rx = 0) {
    const SchemeDescriptor& d = descriptor(s);
    Instance inst;
    inst.tx_indices = sample_symbol_indices(c, d.K, rng);
    inst.tx_symbols.resize(d.K);
    for (int i = 0; i < d.K; ++i) inst.tx_symbols[i] = c.points[inst.tx_indices[i]];
    inst.ch = sample_channel(d.N, n_rx > 0 ? n_rx : d.N, rng);
    const double rho = std::pow(10.0, snr_db / 10.0);
    inst.rx = transmit(encode(d, inst.tx_symbols), inst.ch, rho, n0, rng);
    return inst;
}

// Independent per-pair oracle: brute Q^2 search over (even, odd) candidates
// minimizing the conditional-ML cost, even candidate in the outer loop.
void joint_pair_oracle(const SufficientStatistics& st, const Constellation& c,
                       const SchemeDescriptor& d, int pair, int& odd_idx, int& even_idx) {
    const double alpha = (pair % 2 == 0) ? d.alpha1 : d.alpha2;
    const double g = st.scale() * st.psi[pair / 2];
    double best = std::numeric_limits<double>::infinity();
    odd_idx = even_idx = 0;
    for (int even = 0; even < c.order(); ++even) {
        for (int odd = 0; odd < c.order(); ++odd) {
            const cplx model =
                g * (c.points[odd] * std::sin(alpha) - std::conj(c.points[even]) * std::cos(alpha));
            const double cost = std::norm(st.beta[pair] - model);
            if (cost < best) {
                best = cost;
                odd_idx = odd;
                even_idx = even;
            }
        }
    }
}

// Full odometer search over every codeword (all K symbols jointly), using
// nothing but the encoder and the transmit model.
std::vector<int> full_ml_oracle(const ReceivedBlock& rx, const ChannelRealization& ch,
                                const SchemeDescriptor& d, const Constellation& c) {
    const double s = std::sqrt(rx.rho / static_cast<double>(d.N));
    std::vector<int> idx(d.K, 0), best_idx(d.K, 0);
    std::vector<cplx> x(d.K);
    double best = std::numeric_limits<double>::infinity();
    while (true) {
        for (int i = 0; i < d.K; ++i) x[i] = c.points[idx[i]];
        CMat model = encode(d, x).entries * ch.h;
        model *= s;
        double m = 0.0;
        for (int t = 0; t < rx.y.rows(); ++t)
            for (int r = 0; r < rx.y.cols(); ++r) m += std::norm(rx.y(t, r) - model(t, r));
        if (m < best) {
            best = m;
            best_idx = idx;
        }
        int k = d.K - 1;
        while (k >= 0 && ++idx[k] == c.order()) idx[k--] = 0;
        if (k < 0) break;
    }
    return best_idx;
}

}  // namespace

TEST(Evcm, NoiselessP3RecoversPairTerms) {
    const Constellation qam4 = build_qam(4);
    const SchemeDescriptor& d = descriptor(Scheme::jag4x3);
    Rng rng(71);
    for (int t = 0; t < 50; ++t) {
        const Instance inst = make_instance(Scheme::jag4x3, qam4, 10.0, 0.0, rng);
        const auto q = evcm_equalize_p3(inst.rx, inst.ch);
        const double s = std::sqrt(inst.rx.rho / 3.0);
        const cplx j1 = pair_term(inst.tx_symbols[0], inst.tx_symbols[1], d.alpha1);
        const cplx j2 = pair_term(inst.tx_symbols[2], inst.tx_symbols[3], d.alpha2);
        const cplx j3 = pair_term(inst.tx_symbols[4], inst.tx_symbols[5], d.alpha1);
        const cplx j4 = pair_term(inst.tx_symbols[6], inst.tx_symbols[7], d.alpha2);
        for (int i = 0; i < 3; ++i) {
            const double e_top =
                std::norm(inst.ch.h(1, i)) + std::norm(inst.ch.h(2, i));
            const double e_bot =
                std::norm(inst.ch.h(0, i)) + std::norm(inst.ch.h(1, i));
            EXPECT_LT(std::abs(q[i][0] / (s * e_top) - j1), 1e-10);
            EXPECT_LT(std::abs(q[i][1] / (s * e_top) - j2), 1e-10);
            EXPECT_LT(std::abs(q[i][2] / (s * e_bot) - j3), 1e-10);
            EXPECT_LT(std::abs(q[i][3] / (s * e_bot) - j4), 1e-10);
        }
    }
}

TEST(Evcm, UnitChannelReducesToSignFlip) {
    // h_1i = 1, h_2i = 0 turns the 4x3 equalizer into [[1, 0], [0, -1]].
    const SchemeDescriptor& d = descriptor(Scheme::jag4x3);
    CMat h(3, 3);
    for (int i = 0; i < 3; ++i) h(1, i) = 1.0;
    const ChannelRealization ch{h};
    Rng rng(73);
    std::vector<cplx> x(8);
    for (auto& v : x) v = rng.cn01();
    Rng quiet(0);
    const ReceivedBlock rx = transmit(encode(d, x), ch, 3.0, 0.0, quiet);
    const auto q = evcm_equalize_p3(rx, ch);
    for (int i = 0; i < 3; ++i) {
        EXPECT_LT(std::abs(q[i][0] - rx.y(0, i)), 1e-14);
        EXPECT_LT(std::abs(q[i][1] + std::conj(rx.y(1, i))), 1e-14);
    }
}

TEST(Evcm, EqualizerTimesVirtualChannelIsScaledIdentity) {
    Rng rng(79);
    for (int t = 0; t < 1000; ++t) {
        const cplx ha = rng.cn01(), hb = rng.cn01();
        const CMat e(2, 2, {ha, hb, std::conj(hb), -std::conj(ha)});
        const CMat w(2, 2, {std::conj(ha), hb, std::conj(hb), -ha});
        const CMat prod = w * e;
        const double energy = std::norm(ha) + std::norm(hb);
        EXPECT_LT(std::abs(prod(0, 0) - energy), 1e-12);
        EXPECT_LT(std::abs(prod(1, 1) - energy), 1e-12);
        EXPECT_LT(std::abs(prod(0, 1)), 1e-12);
        EXPECT_LT(std::abs(prod(1, 0)), 1e-12);
    }
}

TEST(Evcm, NoiselessP4RecoversPairTerms) {
    const Constellation qam4 = build_qam(4);
    const SchemeDescriptor& d = descriptor(Scheme::jag4x4);
    Rng rng(83);
    for (int t = 0; t < 50; ++t) {
        const Instance inst = make_instance(Scheme::jag4x4, qam4, 12.0, 0.0, rng);
        const auto q = evcm_equalize_p4(inst.rx, inst.ch);
        const double s = std::sqrt(inst.rx.rho / 4.0);
        const cplx j1 = pair_term(inst.tx_symbols[0], inst.tx_symbols[1], d.alpha1);
        for (int i = 0; i < 4; ++i) {
            const double e_top = std::norm(inst.ch.h(0, i)) + std::norm(inst.ch.h(1, i));
            EXPECT_LT(std::abs(q[i][0] - s * e_top * j1), 1e-10);
        }
    }
}

TEST(Evcm, P4IdentityLikeChannel) {
    const SchemeDescriptor& d = descriptor(Scheme::jag4x4);
    CMat h(4, 4);
    for (int i = 0; i < 4; ++i) h(0, i) = 1.0;  // only antenna 0 reaches anyone
    const ChannelRealization ch{h};
    Rng rng(89);
    std::vector<cplx> x(8);
    for (auto& v : x) v = rng.cn01();
    Rng quiet(0);
    const ReceivedBlock rx = transmit(encode(d, x), ch, 4.0, 0.0, quiet);
    const auto q = evcm_equalize_p4(rx, ch);
    const cplx j1 = pair_term(x[0], x[1], d.alpha1);
    for (int i = 0; i < 4; ++i) {
        EXPECT_LT(std::abs(q[i][0] - std::sqrt(4.0 / 4.0) * j1), 1e-12);
        EXPECT_LT(std::abs(q[i][2]), 1e-12);
    }
}

TEST(SufficientStats, NoiselessScalings) {
    const Constellation qam4 = build_qam(4);
    Rng rng(97);
    {
        const SchemeDescriptor& d = descriptor(Scheme::jag4x3);
        const Instance inst = make_instance(Scheme::jag4x3, qam4, 9.0, 0.0, rng);
        const auto st = sufficient_stats(evcm_equalize_p3(inst.rx, inst.ch), inst.ch,
                                         inst.rx.rho, Scheme::jag4x3);
        const cplx j1 = pair_term(inst.tx_symbols[0], inst.tx_symbols[1], d.alpha1);
        EXPECT_LT(std::abs(st.beta[0] - std::sqrt(inst.rx.rho / 27.0) * st.psi[0] * j1), 1e-10);
        EXPECT_NEAR(st.scale(), std::sqrt(inst.rx.rho / 27.0), 1e-12);
    }
    {
        const SchemeDescriptor& d = descriptor(Scheme::jag4x4);
        const Instance inst = make_instance(Scheme::jag4x4, qam4, 9.0, 0.0, rng);
        const auto st = sufficient_stats(evcm_equalize_p4(inst.rx, inst.ch), inst.ch,
                                         inst.rx.rho, Scheme::jag4x4);
        const cplx j1 = pair_term(inst.tx_symbols[0], inst.tx_symbols[1], d.alpha1);
        EXPECT_LT(std::abs(st.beta[0] - std::sqrt(inst.rx.rho / 64.0) * st.psi[0] * j1), 1e-10);
        EXPECT_NEAR(st.scale(), std::sqrt(inst.rx.rho / 64.0), 1e-12);
    }
}

TEST(SufficientStats, ZeroChannelGivesZeroAndErasure) {
    const Constellation qam4 = build_qam(4);
    const SchemeDescriptor& d = descriptor(Scheme::jag4x3);
    const ChannelRealization ch{CMat::zero(3, 3)};
    Rng rng(101);
    const std::vector<cplx> x = sample_symbols(qam4, 8, rng);
    const ReceivedBlock rx = transmit(encode(d, x), ch, 10.0, 1.0, rng);
    const auto st = sufficient_stats(evcm_equalize_p3(rx, ch), ch, rx.rho, Scheme::jag4x3);
    EXPECT_EQ(st.psi[0], 0.0);
    EXPECT_EQ(st.psi[1], 0.0);
    const DecodedBlock out = conditional_ml_decode(st, qam4, d);
    EXPECT_TRUE(out.erased);
}

TEST(ConditionalMl, NoiselessRoundTripWithZeroCost) {
    const Constellation qam4 = build_qam(4);
    Rng rng(103);
    for (Scheme s : {Scheme::jag4x3, Scheme::jag4x4}) {
        const SchemeDescriptor& d = descriptor(s);
        for (int t = 0; t < 200; ++t) {
            const Instance inst = make_instance(s, qam4, 8.0, 0.0, rng);
            const auto st =
                sufficient_stats(evcm_equalize(inst.rx, inst.ch, s), inst.ch, inst.rx.rho, s);
            const DecodedBlock out = conditional_ml_decode(st, qam4, d);
            ASSERT_FALSE(out.erased);
            EXPECT_EQ(out.indices, inst.tx_indices);
            for (double c : out.pair_cost) EXPECT_LT(c, 1e-18);
        }
    }
}

TEST(ConditionalMl, MatchesJointPairOracleAtTenDb) {
    const Constellation qam4 = build_qam(4);
    Rng rng(107);
    for (Scheme s : {Scheme::jag4x3, Scheme::jag4x4}) {
        const SchemeDescriptor& d = descriptor(s);
        for (int t = 0; t < 1000; ++t) {
            const Instance inst = make_instance(s, qam4, 10.0, 1.0, rng);
            const auto st =
                sufficient_stats(evcm_equalize(inst.rx, inst.ch, s), inst.ch, inst.rx.rho, s);
            const DecodedBlock out = conditional_ml_decode(st, qam4, d);
            ASSERT_FALSE(out.erased);
            for (int p = 0; p < 4; ++p) {
                int odd = 0, even = 0;
                joint_pair_oracle(st, qam4, d, p, odd, even);
                EXPECT_EQ(out.indices[2 * p], odd);
                EXPECT_EQ(out.indices[2 * p + 1], even);
            }
        }
    }
}

TEST(ConditionalMl, ExactlyQCostEvaluationsPerPair) {
    for (int order : {2, 4, 16}) {
        const Constellation c = build_qam(order);
        Rng rng(109);
        const Instance inst = make_instance(Scheme::jag4x4, c, 10.0, 1.0, rng);
        const auto st = sufficient_stats(evcm_equalize_p4(inst.rx, inst.ch), inst.ch,
                                         inst.rx.rho, Scheme::jag4x4);
        const DecodedBlock out = conditional_ml_decode(st, c, descriptor(Scheme::jag4x4));
        EXPECT_EQ(out.cost_evaluations, 4L * order);
    }
}

TEST(ExhaustiveMl, NoiselessExactRecoveryAllSchemes) {
    const Constellation qam4 = build_qam(4);
    Rng rng(113);
    for (Scheme s : kAllSchemes) {
        const SchemeDescriptor& d = descriptor(s);
        for (int t = 0; t < 20; ++t) {
            const Instance inst = make_instance(s, qam4, 10.0, 0.0, rng);
            const DecodedBlock out = exhaustive_ml_decode(inst.rx, inst.ch, d, qam4);
            EXPECT_EQ(out.indices, inst.tx_indices) << descriptor(s).name;
        }
    }
}

TEST(ExhaustiveMl, AgreesWithAlamoutiLinearDecoder) {
    const Constellation qam4 = build_qam(4);
    Rng rng(127);
    const SchemeDescriptor& d = descriptor(Scheme::alamouti);
    for (int t = 0; t < 1000; ++t) {
        const Instance inst = make_instance(Scheme::alamouti, qam4, 20.0, 1.0, rng);
        const DecodedBlock ml = exhaustive_ml_decode(inst.rx, inst.ch, d, qam4);
        const DecodedBlock lin = decode_reference(inst.rx, inst.ch, Scheme::alamouti, qam4);
        EXPECT_EQ(ml.indices, lin.indices);
    }
}

TEST(ExhaustiveMl, BlockSplitEqualsFullSearch) {
    const Constellation qam4 = build_qam(4);
    Rng rng(131);
    for (Scheme s : {Scheme::jag4x3, Scheme::jag4x4}) {
        const SchemeDescriptor& d = descriptor(s);
        for (int t = 0; t < 8; ++t) {
            const Instance inst = make_instance(s, qam4, 6.0, 1.0, rng);
            const DecodedBlock split = exhaustive_ml_decode(inst.rx, inst.ch, d, qam4);
            EXPECT_EQ(split.indices, full_ml_oracle(inst.rx, inst.ch, d, qam4));
        }
    }
}

TEST(ExhaustiveMl, GuardRejectsHugeSearches) {
    const Constellation qam16 = build_qam(16);
    Rng rng(137);
    const Instance inst = make_instance(Scheme::jag4x4, qam16, 10.0, 1.0, rng);
    // 16^4 per half stays within the guard thanks to the block split.
    EXPECT_NO_THROW(exhaustive_ml_decode(inst.rx, inst.ch, descriptor(Scheme::jag4x4), qam16));

    // A synthetic 100-point constellation pushes a K=4 search to 1e8.
    Constellation big = qam16;
    big.name = "synthetic100";
    big.points.clear();
    for (int i = 0; i < 100; ++i) big.points.push_back(std::polar(1.0, 0.05 * i));
    const Instance oz = make_instance(Scheme::ozbek4x3, qam16, 10.0, 1.0, rng);
    EXPECT_THROW(exhaustive_ml_decode(oz.rx, oz.ch, descriptor(Scheme::ozbek4x3), big),
                 std::invalid_argument);
}

TEST(ReferenceDecoders, NoiselessExactRecovery) {
    const Constellation qam4 = build_qam(4);
    Rng rng(139);
    for (Scheme s : {Scheme::alamouti, Scheme::jafarkhani, Scheme::ozbek4x3, Scheme::ciod4x4,
                     Scheme::aciod4x3}) {
        for (int t = 0; t < 200; ++t) {
            const Instance inst = make_instance(s, qam4, 8.0, 0.0, rng);
            const DecodedBlock out = decode_reference(inst.rx, inst.ch, s, qam4);
            ASSERT_FALSE(out.erased);
            EXPECT_EQ(out.indices, inst.tx_indices) << descriptor(s).name;
        }
    }
}

TEST(ReferenceDecoders, JafarkhaniPairSearchEqualsFullMl) {
    const Constellation qam4 = build_qam(4);
    Rng rng(149);
    const SchemeDescriptor& d = descriptor(Scheme::jafarkhani);
    for (int t = 0; t < 200; ++t) {
        const Instance inst = make_instance(Scheme::jafarkhani, qam4, 8.0, 1.0, rng);
        const DecodedBlock fast = decode_reference(inst.rx, inst.ch, Scheme::jafarkhani, qam4);
        const DecodedBlock full = exhaustive_ml_decode(inst.rx, inst.ch, d, qam4);
        EXPECT_EQ(fast.indices, full.indices);
    }
}

TEST(ReferenceDecoders, CiodFamilyEqualsExhaustiveMl) {
    const Constellation qam4 = build_qam(4);
    Rng rng(151);
    for (Scheme s : {Scheme::ciod4x4, Scheme::aciod4x3}) {
        const SchemeDescriptor& d = descriptor(s);
        for (int t = 0; t < 150; ++t) {
            const Instance inst = make_instance(s, qam4, 6.0, 1.0, rng);
            const DecodedBlock fast = decode_reference(inst.rx, inst.ch, s, qam4);
            const DecodedBlock full = exhaustive_ml_decode(inst.rx, inst.ch, d, qam4);
            EXPECT_EQ(fast.indices, full.indices) << descriptor(s).name;
        }
    }
}

TEST(ReferenceDecoders, RotatedCiodStillExactMl) {
    const Constellation rot = rotate_constellation(build_qam(16), deg2rad(31.7175));
    Rng rng(157);
    const SchemeDescriptor& d = descriptor(Scheme::aciod4x3);
    for (int t = 0; t < 40; ++t) {
        const Instance inst = make_instance(Scheme::aciod4x3, rot, 12.0, 1.0, rng);
        const DecodedBlock fast = decode_reference(inst.rx, inst.ch, Scheme::aciod4x3, rot);
        const DecodedBlock full = exhaustive_ml_decode(inst.rx, inst.ch, d, rot);
        EXPECT_EQ(fast.indices, full.indices);
    }
}

TEST(ReferenceDecoders, OzbekQuadraticSearchEqualsDirectMl) {
    const Constellation qam4 = build_qam(4);
    Rng rng(163);
    const SchemeDescriptor& d = descriptor(Scheme::ozbek4x3);
    for (int t = 0; t < 150; ++t) {
        const Instance inst = make_instance(Scheme::ozbek4x3, qam4, 8.0, 1.0, rng);
        const DecodedBlock fast = decode_reference(inst.rx, inst.ch, Scheme::ozbek4x3, qam4);
        const DecodedBlock full = exhaustive_ml_decode(inst.rx, inst.ch, d, qam4);
        EXPECT_EQ(fast.indices, full.indices);
    }
}

TEST(ReferenceDecoders, UnsupportedSchemeRejected) {
    const Constellation qam4 = build_qam(4);
    Rng rng(167);
    const Instance inst = make_instance(Scheme::jag4x4, qam4, 8.0, 1.0, rng);
    EXPECT_THROW(decode_reference(inst.rx, inst.ch, Scheme::jag4x4, qam4),
                 std::invalid_argument);
}

TEST(Decoders, DegenerateChannelFlagsErasure) {
    const Constellation qam4 = build_qam(4);
    Rng rng(173);
    for (Scheme s : kAllSchemes) {
        const SchemeDescriptor& d = descriptor(s);
        const std::vector<cplx> x = sample_symbols(qam4, d.K, rng);
        const ChannelRealization ch{CMat::zero(d.N, d.N)};
        const ReceivedBlock rx = transmit(encode(d, x), ch, 10.0, 1.0, rng);
        const DecodedBlock out = decode_block(rx, ch, d, qam4, DecoderKind::conditional);
        EXPECT_TRUE(out.erased) << d.name;
    }
}

TEST(Decoders, DecisionsInvariantUnderConsistentScaling) {
    const Constellation qam4 = build_qam(4);
    Rng rng(179);
    const double kappa = 3.7;
    for (Scheme s : kAllSchemes) {
        const SchemeDescriptor& d = descriptor(s);
        for (int t = 0; t < 50; ++t) {
            Instance inst = make_instance(s, qam4, 10.0, 1.0, rng);
            ReceivedBlock scaled = inst.rx;
            scaled.y *= kappa;
            scaled.rho *= kappa * kappa;
            const DecodedBlock a = decode_block(inst.rx, inst.ch, d, qam4, DecoderKind::conditional);
            const DecodedBlock b = decode_block(scaled, inst.ch, d, qam4, DecoderKind::conditional);
            EXPECT_EQ(a.indices, b.indices) << d.name;
        }
    }
}

TEST(Decoders, NoiselessRoundTripViaDispatcher) {
    const Constellation qam4 = build_qam(4);
    Rng rng(181);
    for (Scheme s : kAllSchemes) {
        const SchemeDescriptor& d = descriptor(s);
        for (int t = 0; t < 50; ++t) {
            const Instance inst = make_instance(s, qam4, 8.0, 0.0, rng);
            for (DecoderKind kind : {DecoderKind::conditional, DecoderKind::exhaustive}) {
                const DecodedBlock out = decode_block(inst.rx, inst.ch, d, qam4, kind);
                ASSERT_FALSE(out.erased);
                EXPECT_EQ(out.indices, inst.tx_indices) << d.name;
            }
        }
    }
}
