#pragma once

#include <iostream>
#include <memory>
#include <string>
#include <variant>
#include <vector>

#include <CLI11.hpp>

#include "stbclab/csv.hpp"
#include "stbclab/diversity.hpp"
#include "stbclab/montecarlo.hpp"
#include "stbclab/plot.hpp"

namespace stbclab::cli {

struct SimulateCmd {
    SimConfig config;
    std::string out_path;  // empty: CSV to stdout
};

struct DiversityCmd {
    Scheme scheme = Scheme::jag4x4;
    Constellation mod;
    double alpha1 = 0.0;
    double alpha2 = 0.0;
};

struct AnglesCmd {
    Scheme scheme = Scheme::jag4x4;
    Constellation mod;
    double grid_deg = 0.25;
};

struct TableCmd {};

struct VerifyCmd {
    Scheme scheme = Scheme::jag4x4;
    Constellation mod;
    long trials = 1000;
};

struct PlotCmd {
    std::vector<std::string> csv_paths;
    Figure figure = Figure::spectral_efficiency;
    std::string out_path;
};

using Command =
    std::variant<SimulateCmd, DiversityCmd, AnglesCmd, TableCmd, VerifyCmd, PlotCmd>;

namespace detail {

struct RawArgs {
    std::string scheme = "jag4x4";
    std::string mod = "qam4";
    double rotate_deg = 0.0;
    double snr_start = 0.0;
    double snr_stop = 20.0;
    double snr_step = 2.0;
    long trials = 10000;
    std::uint64_t seed = 1;
    int rx_antennas = 0;
    std::string decoder = "conditional";
    double noise_power = 1.0;
    std::string out_path;
    double alpha1_deg = rad2deg(kDefaultAlpha1);
    double alpha2_deg = rad2deg(kDefaultAlpha2);
    double grid_deg = 0.25;
    long verify_trials = 1000;
    std::vector<std::string> csv_paths;
    std::string figure = "spectral-efficiency";
};

inline Constellation make_mod(const RawArgs& raw) {
    Constellation c = constellation_from_token(raw.mod);
    if (raw.rotate_deg != 0.0) c = rotate_constellation(c, deg2rad(raw.rotate_deg));
    return c;
}

}  // namespace detail

// Builds the command-line grammar and translates a parsed invocation into
// one validated Command. Throws CLI::ParseError for grammar violations and
// std::invalid_argument for semantic ones.
inline Command parse_args(const std::vector<std::string>& args) {
    CLI::App app{"stbclab: space-time block code laboratory"};
    app.require_subcommand(1);
    auto raw_owner = std::make_unique<detail::RawArgs>();
    detail::RawArgs* raw = raw_owner.get();

    const std::string scheme_help = "scheme token: alamouti|jafarkhani|ozbek4x3|ciod4x4|aciod4x3|jag4x3|jag4x4";
    const std::string mod_help = "modulation token: bpsk|qam4|qam16";

    CLI::App* sim = app.add_subcommand("simulate", "run a deterministic SER/SNR sweep");
    sim->add_option("--scheme", raw->scheme, scheme_help);
    sim->add_option("--mod", raw->mod, mod_help);
    sim->add_option("--rotate-deg", raw->rotate_deg, "constellation rotation in degrees");
    sim->add_option("--snr-db-start", raw->snr_start, "sweep start (dB), default 0");
    sim->add_option("--snr-db-stop", raw->snr_stop, "sweep stop (dB), default 20");
    sim->add_option("--snr-db-step", raw->snr_step, "sweep step (dB), default 2");
    sim->add_option("--trials", raw->trials, "blocks per SNR point, default 10000");
    sim->add_option("--seed", raw->seed, "master seed, default 1");
    sim->add_option("--rx-antennas", raw->rx_antennas,
                    "receive antennas, default: the scheme's transmit count");
    sim->add_option("--decoder", raw->decoder, "conditional|exhaustive");
    sim->add_option("--noise-power", raw->noise_power, "noise power N0, default 1");
    sim->add_option("--out", raw->out_path, "output CSV path (stdout when omitted)");

    CLI::App* div = app.add_subcommand("diversity", "minimum-determinant diversity report");
    div->add_option("--scheme", raw->scheme, "jag4x3|jag4x4");
    div->add_option("--mod", raw->mod, mod_help);
    div->add_option("--rotate-deg", raw->rotate_deg, "constellation rotation in degrees");
    div->add_option("--alpha1-deg", raw->alpha1_deg, "pair angle 1 (degrees)");
    div->add_option("--alpha2-deg", raw->alpha2_deg, "pair angle 2 (degrees)");

    CLI::App* ang = app.add_subcommand("angles", "grid-search pair angles for coding gain");
    ang->add_option("--scheme", raw->scheme, "jag4x3|jag4x4");
    ang->add_option("--mod", raw->mod, mod_help);
    ang->add_option("--rotate-deg", raw->rotate_deg, "constellation rotation in degrees");
    ang->add_option("--grid-deg", raw->grid_deg, "grid resolution in degrees, default 0.25");

    app.add_subcommand("table", "rate/delay comparison table");

    CLI::App* ver = app.add_subcommand("verify", "orthogonality check of a scheme");
    ver->add_option("--scheme", raw->scheme, scheme_help);
    ver->add_option("--mod", raw->mod, mod_help);
    ver->add_option("--trials", raw->verify_trials, "random codewords to test, default 1000");

    CLI::App* plt = app.add_subcommand("plot", "emit a gnuplot script from sweep CSVs");
    plt->add_option("--figure", raw->figure, "spectral-efficiency|ser-vs-snr");
    plt->add_option("--csv", raw->csv_paths, "input CSV path (repeatable)")->required();
    plt->add_option("--out", raw->out_path, "output script path")->required();

    std::vector<std::string> reversed(args.rbegin(), args.rend());
    try {
        app.parse(reversed);
    } catch (const CLI::CallForHelp&) {
        std::cout << app.help();
        throw;
    }

    if (sim->parsed()) {
        SimulateCmd cmd;
        cmd.config.scheme = scheme_from_token(raw->scheme);
        cmd.config.constellation = detail::make_mod(*raw);
        cmd.config.snr_db_grid = snr_grid(raw->snr_start, raw->snr_stop, raw->snr_step);
        cmd.config.trials = raw->trials;
        cmd.config.seed = raw->seed;
        cmd.config.rx_antennas = raw->rx_antennas;
        cmd.config.decoder = decoder_from_token(raw->decoder);
        cmd.config.noise_power = raw->noise_power;
        cmd.config.validate();
        cmd.out_path = raw->out_path;
        return cmd;
    }
    if (div->parsed()) {
        DiversityCmd cmd;
        cmd.scheme = scheme_from_token(raw->scheme);
        cmd.mod = detail::make_mod(*raw);
        cmd.alpha1 = deg2rad(raw->alpha1_deg);
        cmd.alpha2 = deg2rad(raw->alpha2_deg);
        check_pair_angle(cmd.alpha1);
        check_pair_angle(cmd.alpha2);
        if (!is_jagannath(cmd.scheme))
            throw std::invalid_argument("diversity: pick jag4x3 or jag4x4");
        return cmd;
    }
    if (ang->parsed()) {
        AnglesCmd cmd;
        cmd.scheme = scheme_from_token(raw->scheme);
        cmd.mod = detail::make_mod(*raw);
        cmd.grid_deg = raw->grid_deg;
        if (!(cmd.grid_deg > 0.0)) throw std::invalid_argument("angles: --grid-deg must be > 0");
        if (!is_jagannath(cmd.scheme)) throw std::invalid_argument("angles: pick jag4x3 or jag4x4");
        return cmd;
    }
    if (ver->parsed()) {
        VerifyCmd cmd;
        cmd.scheme = scheme_from_token(raw->scheme);
        cmd.mod = detail::make_mod(*raw);
        cmd.trials = raw->verify_trials;
        if (cmd.trials < 1) throw std::invalid_argument("verify: --trials must be >= 1");
        return cmd;
    }
    if (plt->parsed()) {
        PlotCmd cmd;
        cmd.csv_paths = raw->csv_paths;
        cmd.figure = figure_from_token(raw->figure);
        cmd.out_path = raw->out_path;
        return cmd;
    }
    return TableCmd{};
}

namespace detail {

inline int run_simulate(const SimulateCmd& cmd, std::ostream& out) {
    const std::vector<SerRecord> records = sweep(cmd.config);
    if (cmd.out_path.empty())
        out << csv_text(records);
    else
        write_csv(records, cmd.out_path);
    return 0;
}

inline int run_diversity(const DiversityCmd& cmd, std::ostream& out) {
    const DiversityReport rep = min_coding_gain(cmd.scheme, cmd.mod, cmd.alpha1, cmd.alpha2);
    out << "scheme: " << descriptor(rep.scheme).name << "\n";
    out << "constellation: " << rep.constellation
        << " (rotation " << format_double(rad2deg(cmd.mod.rotation)) << " deg)\n";
    out << "alpha1: " << format_double(rad2deg(cmd.alpha1)) << " deg\n";
    out << "alpha2: " << format_double(rad2deg(cmd.alpha2)) << " deg\n";
    out << "min_det: " << format_double(rep.min_det) << "\n";
    out << "full_diversity: " << (rep.full_diversity ? "yes" : "no") << "\n";
    out << "witness:";
    for (const cplx& d : rep.witness)
        out << " (" << format_double(d.real()) << "," << format_double(d.imag()) << ")";
    out << "\n";
    return 0;
}

inline int run_angles(const AnglesCmd& cmd, std::ostream& out) {
    const AngleSearchResult res = optimize_angles(cmd.scheme, cmd.mod, deg2rad(cmd.grid_deg));
    out << "alpha1_deg: " << format_double(rad2deg(res.alpha1)) << "\n";
    out << "alpha2_deg: " << format_double(rad2deg(res.alpha2)) << "\n";
    out << "min_det: " << format_double(res.min_det) << "\n";
    return 0;
}

inline int run_table(std::ostream& out) {
    out << "design          tx  rate  delay\n";
    for (const RateDelayRow& row : rate_delay_table()) {
        out << row.design;
        for (size_t i = row.design.size(); i < 16; ++i) out << ' ';
        out << row.tx_antennas << "   " << row.rate.str();
        for (size_t i = row.rate.str().size(); i < 5; ++i) out << ' ';
        out << " " << row.delay;
        if (row.scheme) out << "   [" << descriptor(*row.scheme).name << "]";
        out << "\n";
    }
    return 0;
}

inline int run_verify(const VerifyCmd& cmd, std::ostream& out) {
    const SchemeDescriptor& d = descriptor(cmd.scheme);
    const bool expect_orthogonal = cmd.scheme != Scheme::jafarkhani && cmd.scheme != Scheme::ozbek4x3;
    Rng rng(20240915);
    double worst = 0.0;
    for (long t = 0; t < cmd.trials; ++t) {
        const std::vector<cplx> x = sample_symbols(cmd.mod, d.K, rng);
        const Codeword cw = encode(d, x);
        const CMat g = gram(cw);
        const double fro2 = cw.entries.fro_norm2();
        if (fro2 > 0.0) worst = std::max(worst, max_abs_offdiag(g) / fro2);
    }
    out << "scheme: " << d.name << "\n";
    out << "max |offdiag| / ||C||_F^2 over " << cmd.trials << " random codewords: "
        << format_double(worst) << "\n";
    const bool is_orthogonal = worst < 1e-10;
    out << "orthogonal: " << (is_orthogonal ? "yes" : "no") << " (expected "
        << (expect_orthogonal ? "yes" : "no") << ")\n";
    return is_orthogonal == expect_orthogonal ? 0 : 1;
}

inline int run_plot(const PlotCmd& cmd) {
    emit_plot_script(cmd.csv_paths, cmd.figure, cmd.out_path);
    return 0;
}

}  // namespace detail

inline int run_command(const Command& cmd, std::ostream& out) {
    return std::visit(
        [&out](const auto& c) -> int {
            using T = std::decay_t<decltype(c)>;
            if constexpr (std::is_same_v<T, SimulateCmd>) return detail::run_simulate(c, out);
            if constexpr (std::is_same_v<T, DiversityCmd>) return detail::run_diversity(c, out);
            if constexpr (std::is_same_v<T, AnglesCmd>) return detail::run_angles(c, out);
            if constexpr (std::is_same_v<T, TableCmd>) return detail::run_table(out);
            if constexpr (std::is_same_v<T, VerifyCmd>) return detail::run_verify(c, out);
            if constexpr (std::is_same_v<T, PlotCmd>) return detail::run_plot(c);
            return 1;
        },
        cmd);
}

// Exit codes: 0 success, 2 validation failure, 1 runtime failure.
inline int run_cli(int argc, char** argv) {
    std::vector<std::string> args(argv + 1, argv + argc);
    try {
        return run_command(parse_args(args), std::cout);
    } catch (const CLI::CallForHelp&) {
        return 0;
    } catch (const CLI::ParseError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
}

}  // namespace stbclab::cli
