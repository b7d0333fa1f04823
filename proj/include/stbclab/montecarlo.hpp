#pragma once

#include <atomic>
#include <bit>
#include <cmath>
#include <cstdint>
#include <cstdlib>
#include <stdexcept>
#include <string>
#include <thread>
#include <vector>

#include "stbclab/channel.hpp"
#include "stbclab/constellation.hpp"
#include "stbclab/decode.hpp"
#include "stbclab/rng.hpp"
#include "stbclab/schemes.hpp"

namespace stbclab {

struct SimConfig {
    Scheme scheme = Scheme::jag4x4;
    Constellation constellation;
    std::vector<double> snr_db_grid;
    long trials = 10000;
    std::uint64_t seed = 1;
    int rx_antennas = 0;  // 0: match the scheme's transmit antenna count
    DecoderKind decoder = DecoderKind::conditional;
    double noise_power = 1.0;
    int workers = 0;  // 0: STBCLAB_THREADS or hardware concurrency

    int effective_rx() const { return rx_antennas > 0 ? rx_antennas : descriptor(scheme).N; }

    void validate() const {
        if (trials < 1) throw std::invalid_argument("trials must be >= 1");
        if (snr_db_grid.empty()) throw std::invalid_argument("SNR grid must be nonempty");
        for (size_t i = 1; i < snr_db_grid.size(); ++i)
            if (!(snr_db_grid[i] > snr_db_grid[i - 1]))
                throw std::invalid_argument("SNR grid must be strictly increasing");
        if (constellation.order() < 2) throw std::invalid_argument("constellation is empty");
        if (noise_power < 0.0) throw std::invalid_argument("noise power must be >= 0");
    }
};

struct SerRecord {
    Scheme scheme;
    std::string modulation;
    double rotation_deg = 0.0;
    double snr_db = 0.0;
    long trials = 0;
    long symbol_errors = 0;
    double ser = 0.0;
    double eta = 0.0;  // effective spectral efficiency, (1 - ser) R log2 Q
    long erasures = 0;
    std::uint64_t seed = 0;
};

struct TrialOutcome {
    int symbol_errors = 0;
    bool erased = false;
};

inline double snr_db_to_rho(double snr_db) { return std::pow(10.0, snr_db / 10.0); }

// Number of Monte Carlo workers: explicit config beats STBCLAB_THREADS
// beats hardware concurrency. Results never depend on this value.
inline int worker_count(const SimConfig& cfg) {
    if (cfg.workers > 0) return cfg.workers;
    if (const char* env = std::getenv("STBCLAB_THREADS")) {
        const int n = std::atoi(env);
        if (n > 0) return n;
    }
    const unsigned hw = std::thread::hardware_concurrency();
    return hw > 0 ? static_cast<int>(hw) : 1;
}

// One encode/transmit/decode round. All randomness comes from a stream
// keyed by (seed, snr_db bits, trial index), so the outcome is a pure
// function of the config regardless of scheduling.
inline TrialOutcome run_trial(const SimConfig& cfg, double snr_db, long trial_index) {
    const SchemeDescriptor& d = descriptor(cfg.scheme);
    Rng rng = derive_stream(cfg.seed, std::bit_cast<std::uint64_t>(snr_db),
                            static_cast<std::uint64_t>(trial_index));
    const std::vector<int> tx_indices = sample_symbol_indices(cfg.constellation, d.K, rng);
    std::vector<cplx> tx_symbols(d.K);
    for (int i = 0; i < d.K; ++i) tx_symbols[i] = cfg.constellation.points[tx_indices[i]];

    const ChannelRealization ch = sample_channel(d.N, cfg.effective_rx(), rng);
    const Codeword cw = encode(d, tx_symbols);
    const ReceivedBlock rx = transmit(cw, ch, snr_db_to_rho(snr_db), cfg.noise_power, rng);
    const DecodedBlock decoded = decode_block(rx, ch, d, cfg.constellation, cfg.decoder);

    TrialOutcome out;
    if (decoded.erased) {
        out.erased = true;
        return out;
    }
    for (int i = 0; i < d.K; ++i)
        if (decoded.indices[i] != tx_indices[i]) ++out.symbol_errors;
    return out;
}

// Fixed-trial estimate of one (scheme, SNR) operating point. Trials are
// independent and the aggregation is a plain sum, so any work partition
// yields identical results.
inline SerRecord run_point(const SimConfig& cfg, double snr_db) {
    cfg.validate();
    const SchemeDescriptor& d = descriptor(cfg.scheme);
    const int workers = std::min<long>(worker_count(cfg), cfg.trials);

    std::vector<long> errors(workers, 0);
    std::vector<long> erased(workers, 0);
    std::atomic<long> next_chunk{0};
    constexpr long kChunk = 64;

    auto work = [&](int w) {
        while (true) {
            const long begin = next_chunk.fetch_add(kChunk);
            if (begin >= cfg.trials) break;
            const long end = std::min(begin + kChunk, cfg.trials);
            for (long t = begin; t < end; ++t) {
                const TrialOutcome o = run_trial(cfg, snr_db, t);
                if (o.erased)
                    ++erased[w];
                else
                    errors[w] += o.symbol_errors;
            }
        }
    };

    if (workers <= 1) {
        work(0);
    } else {
        std::vector<std::thread> pool;
        pool.reserve(workers);
        for (int w = 0; w < workers; ++w) pool.emplace_back(work, w);
        for (auto& th : pool) th.join();
    }

    SerRecord rec;
    rec.scheme = cfg.scheme;
    rec.modulation = cfg.constellation.name;
    rec.rotation_deg = rad2deg(cfg.constellation.rotation);
    rec.snr_db = snr_db;
    rec.trials = cfg.trials;
    rec.seed = cfg.seed;
    for (int w = 0; w < workers; ++w) {
        rec.symbol_errors += errors[w];
        rec.erasures += erased[w];
    }
    const long decoded_trials = cfg.trials - rec.erasures;
    const double denom = static_cast<double>(decoded_trials) * d.K;
    rec.ser = decoded_trials > 0 ? static_cast<double>(rec.symbol_errors) / denom : 0.0;
    rec.eta = (1.0 - rec.ser) * d.rate().value() *
              std::log2(static_cast<double>(cfg.constellation.order()));
    return rec;
}

inline std::vector<SerRecord> sweep(const SimConfig& cfg) {
    cfg.validate();
    std::vector<SerRecord> out;
    out.reserve(cfg.snr_db_grid.size());
    for (double snr_db : cfg.snr_db_grid) out.push_back(run_point(cfg, snr_db));
    return out;
}

inline std::vector<double> snr_grid(double start_db, double stop_db, double step_db) {
    if (!(step_db > 0.0)) throw std::invalid_argument("SNR step must be > 0");
    if (stop_db < start_db) throw std::invalid_argument("SNR stop must be >= start");
    std::vector<double> grid;
    for (int k = 0;; ++k) {
        const double v = start_db + k * step_db;
        if (v > stop_db + 1e-9) break;
        grid.push_back(v);
    }
    return grid;
}

}  // namespace stbclab
