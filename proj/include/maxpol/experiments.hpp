#pragma once

#include <algorithm>
#include <atomic>
#include <cmath>
#include <complex>
#include <cstdint>
#include <numbers>
#include <optional>
#include <thread>
#include <vector>

#include "maxpol/diffmatrix.hpp"
#include "maxpol/errors.hpp"
#include "maxpol/recover.hpp"
#include "maxpol/rng.hpp"
#include "maxpol/tensorops.hpp"

namespace maxpol {

// ---------------------------------------------------------------------------
// Zone plate
// ---------------------------------------------------------------------------

/// f(x, y) = sin((wx x)^2 + (wy y)^2) sampled on [-1, 1]^2.
struct ZonePlateConfig {
    std::size_t grid_size = 128;
    double omega_x = 1.6 * std::numbers::pi;
    double omega_y = 1.6 * std::numbers::pi;

    void validate() const {
        if (grid_size < 8) throw InvalidSpec("zone plate grid_size must be at least 8");
        if (!(omega_x > 0.0) || !(omega_y > 0.0)) throw InvalidSpec("zone plate harmonics must be positive");
    }

    double spacing() const noexcept { return 2.0 / static_cast<double>(grid_size - 1); }
    double coordinate(double index) const noexcept { return -1.0 + index * spacing(); }

    static ZonePlateConfig with_harmonic(std::size_t size, double omega) { return {size, omega, omega}; }
};

namespace detail {

using cpoly = std::vector<std::complex<double>>;

/// Coefficients of P_k with d^k/dx^k exp(i a x^2) = P_k(x) exp(i a x^2).
inline cpoly chirp_derivative_poly(double a, int k) {
    cpoly p{1.0};
    for (int step = 0; step < k; ++step) {
        cpoly next(p.size() + 1, 0.0);
        for (std::size_t d = 1; d < p.size(); ++d) next[d - 1] += static_cast<double>(d) * p[d];
        for (std::size_t d = 0; d < p.size(); ++d) next[d + 1] += std::complex<double>(0.0, 2.0 * a) * p[d];
        p = std::move(next);
    }
    return p;
}

inline std::complex<double> eval_poly(const cpoly& p, double x) {
    std::complex<double> r = 0.0;
    for (std::size_t d = p.size(); d-- > 0;) r = r * x + p[d];
    return r;
}

}  // namespace detail

/// h^(nx+ny) d^(nx+ny) f / dx^nx dy^ny evaluated at column j + x_shift and
/// row i + y_shift, i.e. the derivative in per-sample units.
inline Grid zone_plate_partial(const ZonePlateConfig& cfg, int nx, int ny, double x_shift = 0.0,
                               double y_shift = 0.0) {
    cfg.validate();
    const std::size_t N = cfg.grid_size;
    const double ax = cfg.omega_x * cfg.omega_x;
    const double ay = cfg.omega_y * cfg.omega_y;
    const auto px = detail::chirp_derivative_poly(ax, nx);
    const auto py = detail::chirp_derivative_poly(ay, ny);
    const double scale = std::pow(cfg.spacing(), nx + ny);
    std::vector<std::complex<double>> col_factor(N), row_factor(N);
    for (std::size_t j = 0; j < N; ++j) {
        const double x = cfg.coordinate(static_cast<double>(j) + x_shift);
        col_factor[j] = detail::eval_poly(px, x) * std::polar(1.0, ax * x * x);
    }
    for (std::size_t i = 0; i < N; ++i) {
        const double y = cfg.coordinate(static_cast<double>(i) + y_shift);
        row_factor[i] = detail::eval_poly(py, y) * std::polar(1.0, ay * y * y);
    }
    return Grid::generate(N, N, [&](std::size_t i, std::size_t j) {
        return scale * (row_factor[i] * col_factor[j]).imag();
    });
}

struct ZonePlate {
    Grid f, fx, fy, fxy, fxx;
};

inline ZonePlate zone_plate(const ZonePlateConfig& cfg) {
    return {zone_plate_partial(cfg, 0, 0), zone_plate_partial(cfg, 1, 0), zone_plate_partial(cfg, 0, 1),
            zone_plate_partial(cfg, 1, 1), zone_plate_partial(cfg, 2, 0)};
}

/// Analytic gradients sampled where the recovery matrices estimate them:
/// half-shifted nodes for staggered-forward, grid nodes otherwise.
inline GradientField sample_zone_plate_gradients(const ZonePlateConfig& cfg, MatrixScheme scheme) {
    const double d = scheme == MatrixScheme::staggered_forward ? 0.5
                     : scheme == MatrixScheme::staggered_backward ? -0.5
                                                                   : 0.0;
    return {zone_plate_partial(cfg, 1, 0, d, 0.0), zone_plate_partial(cfg, 0, 1, 0.0, d)};
}

// ---------------------------------------------------------------------------
// Error metrics
// ---------------------------------------------------------------------------

/// |est - ref|_F / |ref|_F.
inline double nrmse(const Grid& est, const Grid& ref) {
    if (!est.same_shape(ref)) throw DimensionMismatch("nrmse: grid shapes differ");
    double num = 0.0;
    double den = 0.0;
    for (std::size_t k = 0; k < ref.size(); ++k) {
        const double e = est.data()[k] - ref.data()[k];
        num += e * e;
        den += ref.data()[k] * ref.data()[k];
    }
    if (den == 0.0) throw ZeroReference("reference grid has zero norm");
    return std::sqrt(num / den);
}

inline double nmse(const Grid& est, const Grid& ref) {
    const double r = nrmse(est, ref);
    return r * r;
}

struct InteriorSplit {
    Grid interior;                           ///< copy of the inner block
    std::vector<std::uint8_t> boundary_mask; ///< 1 on the frame, row-major over the full grid
    std::size_t width = 0;

    std::size_t boundary_count() const {
        return static_cast<std::size_t>(std::count(boundary_mask.begin(), boundary_mask.end(), std::uint8_t{1}));
    }
};

/// Splits off the frame of thickness `width` (the rows and columns served by
/// side-shifted stencils).
inline InteriorSplit split_interior_boundary(const Grid& G, std::size_t width) {
    if (2 * width >= std::min(G.rows(), G.cols()))
        throw WidthTooLarge("frame width " + std::to_string(width) + " leaves no interior");
    InteriorSplit s;
    s.width = width;
    s.interior = Grid::generate(G.rows() - 2 * width, G.cols() - 2 * width,
                                [&](std::size_t i, std::size_t j) { return G(i + width, j + width); });
    s.boundary_mask.assign(G.size(), 0);
    for (std::size_t i = 0; i < G.rows(); ++i)
        for (std::size_t j = 0; j < G.cols(); ++j)
            if (i < width || j < width || i >= G.rows() - width || j >= G.cols() - width)
                s.boundary_mask[i * G.cols() + j] = 1;
    return s;
}

struct RegionErrors {
    double interior = 0.0;
    double boundary = 0.0;
};

/// NRMSE restricted to the interior block and to the frame (0 for an empty frame).
inline RegionErrors region_nrmse(const Grid& est, const Grid& ref, std::size_t width) {
    if (!est.same_shape(ref)) throw DimensionMismatch("region_nrmse: grid shapes differ");
    const auto split = split_interior_boundary(ref, width);
    double in_num = 0.0, in_den = 0.0, bd_num = 0.0, bd_den = 0.0;
    for (std::size_t k = 0; k < ref.size(); ++k) {
        const double e = est.data()[k] - ref.data()[k];
        const double r = ref.data()[k];
        if (split.boundary_mask[k]) {
            bd_num += e * e;
            bd_den += r * r;
        } else {
            in_num += e * e;
            in_den += r * r;
        }
    }
    if (in_den == 0.0 || (width > 0 && bd_den == 0.0)) throw ZeroReference("reference region has zero norm");
    return {std::sqrt(in_num / in_den), width > 0 ? std::sqrt(bd_num / bd_den) : 0.0};
}

// ---------------------------------------------------------------------------
// Derivative validation and surface recovery on the zone plate
// ---------------------------------------------------------------------------

/// NMSE of the x-derivative computed by a derivative matrix against the
/// analytic one, split into interior and frame (width l).
inline RegionErrors derivative_validation(const ZonePlateConfig& cfg, MatrixScheme scheme, int n, int l,
                                          std::optional<int> P = {}) {
    const auto f = zone_plate_partial(cfg, 0, 0);
    const auto D = build_matrix(scheme, n, l, cfg.grid_size, P);
    const double d = D.evaluation_node(0);
    const auto est = partial_x(f, D);
    const auto ref = zone_plate_partial(cfg, n, 0, d, 0.0);
    const auto e = region_nrmse(est, ref, static_cast<std::size_t>(l));
    return {e.interior * e.interior, e.boundary * e.boundary};
}

struct RecoveryCase {
    Scheme scheme = Scheme::staggered;
    int l = 5;
    std::optional<int> P;
};

/// Noise-free recovery of the zone plate, anchored to its true mean.
inline RegionErrors noise_free_recovery(const ZonePlateConfig& cfg, const RecoveryCase& rc) {
    const auto truth = zone_plate_partial(cfg, 0, 0);
    RecoverySettings s{rc.scheme, rc.l, rc.P, 1e-10, truth.mean()};
    const SurfaceRecoverer rec(truth.rows(), truth.cols(), s);
    const auto phi = rec.recover(sample_zone_plate_gradients(cfg, s.matrix_scheme()));
    return region_nrmse(phi, truth, static_cast<std::size_t>(rc.l));
}

// ---------------------------------------------------------------------------
// Monte-Carlo noise study
// ---------------------------------------------------------------------------

struct MonteCarloConfig {
    std::vector<double> sigmas = default_sigmas();
    int trials = 100;
    std::uint64_t seed = 0;
    std::vector<double> harmonics = default_harmonics();

    static std::vector<double> default_sigmas() {
        std::vector<double> s;
        for (int k = 1; k <= 10; ++k) s.push_back(0.01 * k);
        return s;
    }
    static std::vector<double> default_harmonics() {
        std::vector<double> h;
        for (int k = 1; k <= 10; ++k) h.push_back(0.2 * k * std::numbers::pi);
        return h;
    }

    void validate() const {
        if (trials < 1) throw InvalidSpec("Monte-Carlo needs at least one trial");
        for (double s : sigmas)
            if (!(s > 0.0)) throw InvalidSpec("noise levels must be positive");
        if (sigmas.empty() || harmonics.empty()) throw InvalidSpec("empty Monte-Carlo sweep");
    }
};

struct MonteCarloRow {
    double harmonic;
    double sigma;
    Scheme scheme;
    int l;
    int P;
    double interior_nrmse;
    double boundary_nrmse;
    int trials;
};

namespace detail {

/// Runs fn(i) for i in [0, count) on up to hardware_concurrency threads.
template <typename F>
void parallel_for(std::size_t count, F&& fn) {
    const std::size_t workers = std::min<std::size_t>(count, std::max(1u, std::thread::hardware_concurrency()));
    if (workers <= 1) {
        for (std::size_t i = 0; i < count; ++i) fn(i);
        return;
    }
    std::atomic<std::size_t> next{0};
    std::vector<std::exception_ptr> errors(workers);
    {
        std::vector<std::jthread> pool;
        for (std::size_t w = 0; w < workers; ++w)
            pool.emplace_back([&, w] {
                try {
                    for (std::size_t i; (i = next.fetch_add(1)) < count;) fn(i);
                } catch (...) {
                    errors[w] = std::current_exception();
                }
            });
    }
    for (auto& e : errors)
        if (e) std::rethrow_exception(e);
}

inline void add_noise(Grid& g, double sigma, CounterRng& rng) {
    for (double& v : g.data()) v += sigma * rng.normal();
}

}  // namespace detail

/// Average interior/frame NRMSE of noisy-gradient recoveries.
///
/// Trial t draws its noise from CounterRng(seed ^ t): first the gx samples
/// row by row, then gy. Every (harmonic, case) cell is independent, and each
/// cell sums its trials in index order, so the table does not depend on
/// thread scheduling. Rows are ordered by harmonic, then sigma, then case.
inline std::vector<MonteCarloRow> monte_carlo_recovery(std::size_t grid_size, const MonteCarloConfig& mc,
                                                       const std::vector<RecoveryCase>& cases) {
    mc.validate();
    if (cases.empty()) throw InvalidSpec("no recovery settings given");
    const std::size_t H = mc.harmonics.size(), S = mc.sigmas.size(), C = cases.size();
    std::vector<MonteCarloRow> rows(H * S * C);

    detail::parallel_for(H * C, [&](std::size_t cell) {
        const std::size_t h = cell / C, c = cell % C;
        const auto cfg = ZonePlateConfig::with_harmonic(grid_size, mc.harmonics[h]);
        const auto truth = zone_plate_partial(cfg, 0, 0);
        const RecoveryCase& rc = cases[c];
        RecoverySettings s{rc.scheme, rc.l, rc.P, 1e-10, truth.mean()};
        const SurfaceRecoverer rec(grid_size, grid_size, s);
        const auto clean = sample_zone_plate_gradients(cfg, s.matrix_scheme());
        const auto width = static_cast<std::size_t>(rc.l);
        for (std::size_t si = 0; si < S; ++si) {
            double sum_in = 0.0, sum_bd = 0.0;
            for (int t = 0; t < mc.trials; ++t) {
                CounterRng rng(mc.seed ^ static_cast<std::uint64_t>(t));
                GradientField noisy = clean;
                detail::add_noise(noisy.gx, mc.sigmas[si], rng);
                detail::add_noise(noisy.gy, mc.sigmas[si], rng);
                const auto e = region_nrmse(rec.recover(noisy), truth, width);
                sum_in += e.interior;
                sum_bd += e.boundary;
            }
            rows[(h * S + si) * C + c] = {mc.harmonics[h], mc.sigmas[si], rc.scheme, rc.l,
                                          rec.dx().accuracy(), sum_in / mc.trials, sum_bd / mc.trials,
                                          mc.trials};
        }
    });
    return rows;
}

// ---------------------------------------------------------------------------
// Flat-field correction and tile stitching
// ---------------------------------------------------------------------------

/// (T - C_D) * G with G = 1 / (C_F - C_D), elementwise.
inline Grid flat_field(const Grid& T, const Grid& dark, const Grid& flat) {
    if (!T.same_shape(dark) || !T.same_shape(flat)) throw DimensionMismatch("flat_field: grid shapes differ");
    Grid out(T.rows(), T.cols());
    for (std::size_t k = 0; k < T.size(); ++k) {
        const double range = flat.data()[k] - dark.data()[k];
        if (!(range > 0.0))
            throw DegenerateCalibration("flat minus dark is not positive at sample " + std::to_string(k));
        out.data()[k] = (T.data()[k] - dark.data()[k]) / range;
    }
    return out;
}

struct Tile {
    Grid data;
    std::size_t row0 = 0;
    std::size_t col0 = 0;
    double bias = 0.0;
};

/// Non-overlapping tiles that partition a canvas in row-major layout order.
struct TileSet {
    std::vector<Tile> tiles;
    std::size_t layout_rows = 1;
    std::size_t layout_cols = 1;
    std::size_t canvas_rows = 0;
    std::size_t canvas_cols = 0;

    /// Tiles pasted side by side without any correction.
    Grid raw_mosaic() const {
        Grid g(canvas_rows, canvas_cols);
        for (const auto& t : tiles)
            for (std::size_t i = 0; i < t.data.rows(); ++i)
                for (std::size_t j = 0; j < t.data.cols(); ++j) g(t.row0 + i, t.col0 + j) = t.data(i, j);
        return g;
    }
};

/// Crops the ground truth into layout_rows x layout_cols tiles, adds each
/// tile's constant bias and optional Gaussian noise (stream seed ^ tile index).
inline TileSet synth_tiles(const Grid& truth, std::size_t layout_rows, std::size_t layout_cols,
                           const std::vector<double>& biases, double noise_sigma, std::uint64_t seed) {
    if (layout_rows == 0 || layout_cols == 0 || truth.rows() % layout_rows != 0 || truth.cols() % layout_cols != 0)
        throw LayoutMismatch("layout does not divide the canvas");
    if (biases.size() != layout_rows * layout_cols)
        throw LayoutMismatch("expected " + std::to_string(layout_rows * layout_cols) + " biases");
    if (noise_sigma < 0.0) throw InvalidSpec("noise sigma must be non-negative");
    TileSet set{{}, layout_rows, layout_cols, truth.rows(), truth.cols()};
    const std::size_t th = truth.rows() / layout_rows, tw = truth.cols() / layout_cols;
    for (std::size_t r = 0; r < layout_rows; ++r)
        for (std::size_t c = 0; c < layout_cols; ++c) {
            const std::size_t index = r * layout_cols + c;
            Tile t{Grid::generate(th, tw, [&](std::size_t i, std::size_t j) { return truth(r * th + i, c * tw + j); }),
                   r * th, c * tw, biases[index]};
            t.data += t.bias;
            if (noise_sigma > 0.0) {
                CounterRng rng(seed ^ static_cast<std::uint64_t>(index));
                detail::add_noise(t.data, noise_sigma, rng);
            }
            set.tiles.push_back(std::move(t));
        }
    return set;
}

struct StitchSettings {
    int l_forward = 5;
    std::optional<int> P_forward;  ///< lowpass tile gradients when below 2 l - 1
    RecoverySettings recovery{};
    std::optional<double> reference_mean;
};

/// Per-tile staggered-forward gradients pasted into canvas-sized fields.
/// Each tile only ever sees its own samples, so tile-constant offsets vanish.
inline GradientField stitch_gradients(const TileSet& set, int l_forward, std::optional<int> P_forward) {
    GradientField field{Grid(set.canvas_rows, set.canvas_cols), Grid(set.canvas_rows, set.canvas_cols)};
    for (const auto& t : set.tiles) {
        const auto Dx = build_matrix(MatrixScheme::staggered_forward, 1, l_forward, t.data.cols(), P_forward);
        const auto Dy = build_matrix(MatrixScheme::staggered_forward, 1, l_forward, t.data.rows(), P_forward);
        const Grid gx = partial_x(t.data, Dx);
        const Grid gy = partial_y(t.data, Dy);
        for (std::size_t i = 0; i < t.data.rows(); ++i)
            for (std::size_t j = 0; j < t.data.cols(); ++j) {
                field.gx(t.row0 + i, t.col0 + j) = gx(i, j);
                field.gy(t.row0 + i, t.col0 + j) = gy(i, j);
            }
    }
    return field;
}

/// Gradient-domain stitching: tile gradients, then one surface recovery over
/// the canvas, anchored to the reference mean when known (else 0).
inline Grid stitch_recover(const TileSet& set, const StitchSettings& settings) {
    RecoverySettings rs = settings.recovery;
    rs.anchor_mean = settings.reference_mean.value_or(0.0);
    return recover_surface(stitch_gradients(set, settings.l_forward, settings.P_forward), rs);
}

}  // namespace maxpol
