// Command-line front end: kernels, responses, matrices, spectra, surface
// recovery and the zone-plate / Monte-Carlo / stitching experiments.

#include <CLI11.hpp>

#include <cmath>
#include <functional>
#include <iostream>
#include <numbers>
#include <optional>
#include <string>
#include <vector>

#include "maxpol/maxpol.hpp"

namespace {

using namespace maxpol;

struct UsageError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// ---- flag value parsing ----------------------------------------------------

/// "1.5", "3/4", "pi", "1.6pi", "-pi/2" style reals.
double parse_real(const std::string& text) {
    try {
        std::string s = text;
        double scale = 1.0;
        if (auto pos = s.find("pi"); pos != std::string::npos) {
            std::string rest = s.substr(pos + 2);
            s = s.substr(0, pos);
            if (s.empty() || s == "+") s = "1";
            if (s == "-") s = "-1";
            if (!rest.empty()) {
                if (rest[0] != '/') throw UsageError("bad real '" + text + "'");
                scale /= Rational::parse(rest.substr(1)).to_double();
            }
            scale *= std::numbers::pi;
        }
        if (s.find_first_of("eE") != std::string::npos || s.find("inf") != std::string::npos ||
            s.find("nan") != std::string::npos) {
            std::size_t used = 0;
            const double v = std::stod(s, &used);
            if (used != s.size() || !std::isfinite(v)) throw UsageError("bad real '" + text + "'");
            return v * scale;
        }
        return Rational::parse(s).to_double() * scale;
    } catch (const UsageError&) {
        throw;
    } catch (const std::exception&) {
        throw UsageError("bad real '" + text + "'");
    }
}

int parse_integer_rational(const std::string& text, const std::string& flag) {
    Rational r;
    try {
        r = Rational::parse(text);
    } catch (const Error&) {
        throw UsageError(flag + ": not a number: '" + text + "'");
    }
    if (!r.is_integer() || r.abs() > Rational(1 << 20)) throw UsageError(flag + " must be a small integer");
    return static_cast<int>(r.num());
}

std::vector<double> parse_real_list(const std::string& text) {
    std::vector<double> out;
    std::size_t start = 0;
    while (start <= text.size()) {
        const auto comma = text.find(',', start);
        const auto item = text.substr(start, comma == std::string::npos ? std::string::npos : comma - start);
        if (item.empty()) throw UsageError("empty entry in list '" + text + "'");
        out.push_back(parse_real(item));
        if (comma == std::string::npos) break;
        start = comma + 1;
    }
    return out;
}

std::pair<std::size_t, std::size_t> parse_layout(const std::string& text) {
    const auto x = text.find('x');
    if (x == std::string::npos) throw UsageError("layout must look like RxC");
    try {
        std::size_t a = 0, b = 0;
        const auto r = std::stoul(text.substr(0, x), &a);
        const auto c = std::stoul(text.substr(x + 1), &b);
        if (a != x || b != text.size() - x - 1 || r == 0 || c == 0) throw UsageError("bad layout '" + text + "'");
        return {r, c};
    } catch (const std::logic_error&) {
        throw UsageError("bad layout '" + text + "'");
    }
}

// ---- output ------------------------------------------------------------------

void emit(const std::string& path, const std::string& bytes) {
    if (path.empty() || path == "-")
        std::cout << bytes << std::flush;
    else
        io::write_atomic(path, bytes);
}

// ---- subcommands -------------------------------------------------------------

struct KernelFlags {
    std::string scheme = "centralized";
    int n = 1;
    int l = 1;
    std::string shift = "0";
    std::optional<int> P;

    void add(CLI::App* app) {
        app->add_option("--scheme", scheme, "centralized | staggered")->capture_default_str();
        app->add_option("--n", n, "derivative order")->capture_default_str();
        app->add_option("--l", l, "half tap-length")->capture_default_str();
        app->add_option("--shift", shift, "integer side shift, p/q accepted")->capture_default_str();
        app->add_option("--P", P, "accuracy degree (default: fullband)");
    }

    KernelSpec spec() const {
        KernelSpec s;
        try {
            s.scheme = parse_scheme(scheme);
        } catch (const Error& e) {
            throw UsageError(e.what());
        }
        s.n = n;
        s.l = l;
        s.shift = parse_integer_rational(shift, "--shift");
        s.P = P.value_or(s.max_degree());
        try {
            s.validate();
        } catch (const Error& e) {
            throw UsageError(e.what());
        }
        return s;
    }
};

struct MatrixFlags {
    std::string scheme = "centralized";
    int n = 1;
    int l = 1;
    std::size_t N = 16;
    std::optional<int> P;

    void add(CLI::App* app) {
        app->add_option("--scheme", scheme, "centralized | forward | backward")->capture_default_str();
        app->add_option("--n", n, "derivative order")->capture_default_str();
        app->add_option("--l", l, "half tap-length")->capture_default_str();
        app->add_option("--N", N, "matrix size")->capture_default_str();
        app->add_option("--P", P, "accuracy degree (default: fullband)");
    }

    MatrixScheme matrix_scheme() const {
        try {
            return parse_matrix_scheme(scheme);
        } catch (const Error& e) {
            throw UsageError(e.what());
        }
    }

    void check() const {
        KernelSpec s{kernel_scheme(matrix_scheme()), n, l, 0, 0};
        s.P = P.value_or(s.max_degree());
        try {
            s.validate();
        } catch (const Error& e) {
            throw UsageError(e.what());
        }
        if (N < static_cast<std::size_t>(s.taps())) throw UsageError("--N is smaller than the tap count");
    }
};

Scheme recovery_scheme(const std::string& s) {
    try {
        return parse_scheme(s);
    } catch (const Error& e) {
        throw UsageError(e.what());
    }
}

using Job = std::function<void()>;

struct Cli {
    CLI::App app{"Maximally flat differentiation kernels, derivative matrices and gradient-field recovery", "maxpol"};
    std::string output;
    Job job;

    // kernel / response
    KernelFlags kflags, rflags;
    std::size_t samples = 1024;
    std::vector<std::string> omegas;

    // matrix / eig
    MatrixFlags mflags, eflags;
    std::string precision = "binary64";

    // recover
    std::string gx_path, gy_path, rec_scheme = "staggered", anchor = "0";
    int rec_l = 5;
    std::optional<int> rec_P;

    // zoneplate
    std::size_t zp_size = 128;
    std::string zp_omega = "1.6pi";
    int zp_lmax = 5;
    std::string zp_surface;

    // montecarlo
    std::string mc_sigmas = "0.01,0.02,0.03,0.04,0.05,0.06,0.07,0.08,0.09,0.1";
    std::string mc_harmonics = "0.2pi,0.4pi,0.6pi,0.8pi,pi,1.2pi,1.4pi,1.6pi,1.8pi,2pi";
    int mc_trials = 100;
    std::uint64_t mc_seed = 0;
    std::size_t mc_size = 128;
    int mc_l = 5;

    // stitch
    std::string st_truth, st_layout = "1x2", st_biases = "0,1/5", st_sigma = "0", st_preview;
    std::uint64_t st_seed = 0;
    std::optional<int> st_P_forward;
    int st_l = 5;

    CLI::App* kernel_cmd = nullptr;
    CLI::App* response_cmd = nullptr;
    CLI::App* matrix_cmd = nullptr;
    CLI::App* eig_cmd = nullptr;
    CLI::App* recover_cmd = nullptr;
    CLI::App* zoneplate_cmd = nullptr;
    CLI::App* montecarlo_cmd = nullptr;
    CLI::App* stitch_cmd = nullptr;

    Cli() {
        app.require_subcommand(1);

        kernel_cmd = app.add_subcommand("kernel", "solve one stencil, emit kernel CSV");
        kflags.add(kernel_cmd);
        kernel_cmd->add_option("-o,--output", output, "output path (default: stdout)");

        response_cmd = app.add_subcommand("response", "frequency response of a stencil, emit response CSV");
        rflags.add(response_cmd);
        response_cmd->add_option("--samples", samples, "uniform samples on [0, pi]")->capture_default_str();
        response_cmd->add_option("--omega", omegas, "explicit frequencies (e.g. 0.5pi), overrides --samples");
        response_cmd->add_option("-o,--output", output, "output path (default: stdout)");

        matrix_cmd = app.add_subcommand("matrix", "build a derivative matrix, emit triplet CSV");
        mflags.add(matrix_cmd);
        matrix_cmd->add_option("-o,--output", output, "output path (default: stdout)");

        eig_cmd = app.add_subcommand("eig", "spectral report of a derivative matrix, emit JSON");
        eflags.add(eig_cmd);
        eig_cmd->add_option("--precision", precision, "binary64 | extended")->capture_default_str();
        eig_cmd->add_option("-o,--output", output, "output path (default: stdout)");

        recover_cmd = app.add_subcommand("recover", "surface from MXG1 gradient grids, emit MXG1");
        recover_cmd->add_option("--gx", gx_path, "x-gradient grid (MXG1)")->required();
        recover_cmd->add_option("--gy", gy_path, "y-gradient grid (MXG1)")->required();
        recover_cmd->add_option("--scheme", rec_scheme, "centralized | staggered")->capture_default_str();
        recover_cmd->add_option("--l", rec_l, "half tap-length")->capture_default_str();
        recover_cmd->add_option("--P", rec_P, "accuracy degree (default: fullband)");
        recover_cmd->add_option("--anchor", anchor, "mean of the recovered surface")->capture_default_str();
        recover_cmd->add_option("-o,--output", output, "output MXG1 path")->required();

        zoneplate_cmd = app.add_subcommand("zoneplate", "derivative and recovery validation on the zone plate, emit CSV");
        zoneplate_cmd->add_option("--size", zp_size, "grid size")->capture_default_str();
        zoneplate_cmd->add_option("--omega", zp_omega, "harmonic (e.g. 1.6pi)")->capture_default_str();
        zoneplate_cmd->add_option("--l-max", zp_lmax, "largest half tap-length")->capture_default_str();
        zoneplate_cmd->add_option("--surface", zp_surface, "also write the zone plate as MXG1");
        zoneplate_cmd->add_option("-o,--output", output, "output path (default: stdout)");

        montecarlo_cmd = app.add_subcommand("montecarlo", "noisy-gradient recovery study, emit CSV");
        montecarlo_cmd->add_option("--sigmas", mc_sigmas, "comma-separated noise levels")->capture_default_str();
        montecarlo_cmd->add_option("--harmonics", mc_harmonics, "comma-separated harmonics")->capture_default_str();
        montecarlo_cmd->add_option("--trials", mc_trials, "trials per cell")->capture_default_str();
        montecarlo_cmd->add_option("--seed", mc_seed, "noise seed")->capture_default_str();
        montecarlo_cmd->add_option("--size", mc_size, "grid size")->capture_default_str();
        montecarlo_cmd->add_option("--l", mc_l, "half tap-length for both schemes")->capture_default_str();
        montecarlo_cmd->add_option("-o,--output", output, "output path (default: stdout)");

        stitch_cmd = app.add_subcommand("stitch", "gradient-domain stitching of synthetic tiles, emit MXG1 + PGM");
        stitch_cmd->add_option("--truth", st_truth, "ground-truth grid (MXG1)")->required();
        stitch_cmd->add_option("--layout", st_layout, "tile layout RxC")->capture_default_str();
        stitch_cmd->add_option("--biases", st_biases, "comma-separated per-tile biases")->capture_default_str();
        stitch_cmd->add_option("--sigma", st_sigma, "tile noise level")->capture_default_str();
        stitch_cmd->add_option("--seed", st_seed, "noise seed")->capture_default_str();
        stitch_cmd->add_option("--P-forward", st_P_forward, "accuracy degree of the tile kernels (default: fullband)");
        stitch_cmd->add_option("--l", st_l, "half tap-length")->capture_default_str();
        stitch_cmd->add_option("-o,--output", output, "output MXG1 path")->required();
        stitch_cmd->add_option("--preview", st_preview, "8-bit PGM preview path");
    }

    /// Turns parsed flags into a job. Everything here is validation only.
    void prepare() {
        if (kernel_cmd->parsed()) {
            const auto spec = kflags.spec();
            job = [this, spec] {
                if (!within_recommended_range(spec))
                    std::cerr << "warning: boundary-shifted fullband kernel with l >= 8 is poorly conditioned\n";
                emit(output, io::kernel_csv(make_kernel(spec)));
            };
        } else if (response_cmd->parsed()) {
            const auto spec = rflags.spec();
            std::vector<double> w;
            if (!omegas.empty()) {
                for (const auto& s : omegas) w.push_back(parse_real(s));
            } else {
                if (samples < 1) throw UsageError("--samples must be positive");
                w = uniform_omegas(samples);
            }
            job = [this, spec, w] { emit(output, io::response_csv(eval_response(make_kernel(spec), w))); };
        } else if (matrix_cmd->parsed()) {
            mflags.check();
            job = [this] {
                emit(output, io::triplet_csv(build_matrix(mflags.matrix_scheme(), mflags.n, mflags.l, mflags.N, mflags.P)));
            };
        } else if (eig_cmd->parsed()) {
            eflags.check();
            Precision p;
            try {
                p = parse_precision(precision);
            } catch (const Error& e) {
                throw UsageError(e.what());
            }
            if (eflags.N > (p == Precision::extended ? kExtendedEigenLimit : kDenseEigenLimit))
                throw UsageError("--N exceeds the dense eigen-solver limit");
            job = [this, p] {
                const auto D = build_matrix(eflags.matrix_scheme(), eflags.n, eflags.l, eflags.N, eflags.P);
                emit(output, io::spectral_json(analyze(D, p)).dump(2) + "\n");
            };
        } else if (recover_cmd->parsed()) {
            RecoverySettings s{recovery_scheme(rec_scheme), rec_l, rec_P, 1e-10, parse_real(anchor)};
            try {
                s.validate();
                KernelSpec k{s.scheme, 1, s.l, 0, 0};
                k.P = s.P.value_or(k.max_degree());
                k.validate();
            } catch (const Error& e) {
                throw UsageError(e.what());
            }
            job = [this, s] {
                const GradientField field{io::read_mxg1(gx_path), io::read_mxg1(gy_path)};
                io::write_mxg1(output, recover_surface(field, s));
            };
        } else if (zoneplate_cmd->parsed()) {
            const double w = parse_real(zp_omega);
            ZonePlateConfig cfg{zp_size, w, w};
            try {
                cfg.validate();
            } catch (const Error& e) {
                throw UsageError(e.what());
            }
            if (zp_lmax < 1 || 2 * static_cast<std::size_t>(zp_lmax) + 1 > zp_size / 2)
                throw UsageError("--l-max out of range for this grid size");
            job = [this, cfg] { run_zoneplate(cfg); };
        } else if (montecarlo_cmd->parsed()) {
            MonteCarloConfig mc;
            mc.sigmas = parse_real_list(mc_sigmas);
            mc.harmonics = parse_real_list(mc_harmonics);
            mc.trials = mc_trials;
            mc.seed = mc_seed;
            try {
                mc.validate();
                ZonePlateConfig{mc_size, 1.0, 1.0}.validate();
            } catch (const Error& e) {
                throw UsageError(e.what());
            }
            if (mc_l < 1 || 2 * static_cast<std::size_t>(mc_l) + 1 > mc_size / 2)
                throw UsageError("--l out of range for this grid size");
            job = [this, mc] {
                const std::vector<RecoveryCase> cases{{Scheme::staggered, mc_l, {}}, {Scheme::centralized, mc_l, {}}};
                emit(output, io::monte_carlo_csv(monte_carlo_recovery(mc_size, mc, cases)));
            };
        } else if (stitch_cmd->parsed()) {
            const auto layout = parse_layout(st_layout);
            const auto biases = parse_real_list(st_biases);
            const double sigma = parse_real(st_sigma);
            if (sigma < 0.0) throw UsageError("--sigma must be non-negative");
            if (biases.size() != layout.first * layout.second)
                throw UsageError("--biases needs one value per tile");
            if (st_l < 1) throw UsageError("--l must be at least 1");
            if (st_P_forward) {
                KernelSpec k{Scheme::staggered, 1, st_l, 0, *st_P_forward};
                try {
                    k.validate();
                } catch (const Error& e) {
                    throw UsageError(e.what());
                }
            }
            job = [this, layout, biases, sigma] {
                const Grid truth = io::read_mxg1(st_truth);
                const auto tiles = synth_tiles(truth, layout.first, layout.second, biases, sigma, st_seed);
                StitchSettings s;
                s.l_forward = st_l;
                s.P_forward = st_P_forward;
                s.recovery.l = st_l;
                s.reference_mean = truth.mean();
                const Grid phi = stitch_recover(tiles, s);
                io::write_mxg1(output, phi);
                if (!st_preview.empty()) io::write_atomic(st_preview, io::encode_pgm(phi));
            };
        }
    }

    void run_zoneplate(const ZonePlateConfig& cfg) const {
        if (!zp_surface.empty()) io::write_mxg1(zp_surface, zone_plate_partial(cfg, 0, 0));
        std::string csv = "kind,scheme,n,l,P,interior,boundary\n";
        auto row = [&](std::string_view kind, std::string_view scheme, int n, int l, int P, RegionErrors e) {
            csv += std::string(kind) + ',' + std::string(scheme) + ',' + std::to_string(n) + ',' + std::to_string(l) +
                   ',' + std::to_string(P) + ',' + io::fmt(e.interior) + ',' + io::fmt(e.boundary) + '\n';
        };
        for (MatrixScheme ms : {MatrixScheme::centralized, MatrixScheme::staggered_forward})
            for (int n = 1; n <= 2; ++n)
                for (int l = 1; l <= zp_lmax; ++l) {
                    KernelSpec k{kernel_scheme(ms), n, l, 0, 0};
                    k.P = k.max_degree();
                    if (k.P < n) continue;
                    row("derivative_nmse", to_string(ms), n, l, k.P, derivative_validation(cfg, ms, n, l));
                }
        for (Scheme s : {Scheme::centralized, Scheme::staggered})
            for (int l = 1; l <= zp_lmax; ++l) {
                const int P = KernelSpec::fullband(s, 1, l).P;
                row("recovery_nrmse", to_string(s), 1, l, P, noise_free_recovery(cfg, {s, l, {}}));
            }
        emit(output, csv);
    }
};

}  // namespace

int main(int argc, char** argv) {
    Cli cli;
    try {
        cli.app.parse(argc, argv);
        cli.prepare();
    } catch (const CLI::CallForHelp& e) {
        return cli.app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return cli.app.exit(e);
    } catch (const CLI::ParseError& e) {
        std::cerr << "error: " << e.what() << "\n\n" << cli.app.help();
        return 2;
    } catch (const UsageError& e) {
        std::cerr << "error: " << e.what() << "\n\n" << cli.app.help();
        return 2;
    }
    try {
        cli.job();
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
    return 0;
}
