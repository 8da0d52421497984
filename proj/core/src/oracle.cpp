#include "slowfast/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>
#include <stdexcept>

#include "slowfast/errors.hpp"
#include "slowfast/random_fields.hpp"

namespace slowfast::oracle {

double ode_exact(double u0, double p, double t) {
    if (!(p > 0.0)) throw std::invalid_argument("ode_exact needs p > 0");
    if (!(t >= 0.0)) throw std::invalid_argument("ode_exact needs t >= 0");
    const double a = std::abs(u0);
    return std::copysign(a / std::pow(1.0 + p * std::pow(a, p) * t, 1.0 / p), u0);
}

namespace {

// Direct cosine analysis/synthesis along one axis of a line with n nodes,
// trapezoid-weighted so the transform inverts exactly.
void cosine_transform_axis(std::vector<double>& data, std::size_t n, std::size_t lines,
                           std::size_t stride, std::size_t line_stride, bool analysis) {
    std::vector<double> in(n), out(n);
    const double denom = static_cast<double>(n - 1);
    for (std::size_t l = 0; l < lines; ++l) {
        for (std::size_t i = 0; i < n; ++i) in[i] = data[l * line_stride + i * stride];
        for (std::size_t a = 0; a < n; ++a) {
            double s = 0.0;
            for (std::size_t b = 0; b < n; ++b) {
                // analysis: a = mode, b = node; synthesis: a = node, b = mode
                const double c = std::cos(std::numbers::pi * static_cast<double>(a * b) / denom);
                if (analysis) {
                    const double w = (b == 0 || b + 1 == n) ? 0.5 : 1.0;
                    s += w * c * in[b];
                } else {
                    s += c * in[b];
                }
            }
            if (analysis) s *= (a == 0 || a + 1 == n) ? 1.0 / denom : 2.0 / denom;
            out[a] = s;
        }
        for (std::size_t i = 0; i < n; ++i) data[l * line_stride + i * stride] = out[i];
    }
}

}  // namespace

Field linear_heat_spectral(const Field& f, double t) {
    if (!(t >= 0.0)) throw std::invalid_argument("linear_heat_spectral needs t >= 0");
    const Grid& g = f.grid();
    std::vector<double> c(f.values().begin(), f.values().end());
    const std::size_t nx = g.nodes(0);
    const std::size_t ny = g.dimension() == 2 ? g.nodes(1) : 1;
    cosine_transform_axis(c, nx, ny, 1, nx, true);
    if (ny > 1) cosine_transform_axis(c, ny, nx, nx, 1, true);
    for (std::size_t ky = 0; ky < ny; ++ky) {
        for (std::size_t kx = 0; kx < nx; ++kx) {
            const double ax = kx * std::numbers::pi / g.length(0);
            const double ay = ny > 1 ? ky * std::numbers::pi / g.length(1) : 0.0;
            c[ky * nx + kx] *= std::exp(-(ax * ax + ay * ay) * t);
        }
    }
    if (ny > 1) cosine_transform_axis(c, ny, nx, nx, 1, false);
    cosine_transform_axis(c, nx, ny, 1, nx, false);
    return Field(f.grid_ptr(), std::move(c));
}

double embedding_ratio(const Field& w, double q) {
    const double h1 = h1_norm(w);
    if (h1 == 0.0) return 0.0;
    return w.lq_norm(q) / h1;
}

double measure_embedding_constant(const GridPtr& grid, double q, std::uint64_t seed, double margin) {
    if (!(q > 2.0)) throw std::invalid_argument("embedding exponent q must exceed 2");
    const Grid& g = *grid;
    double best = 0.0;
    auto consider = [&](const Field& w) { best = std::max(best, embedding_ratio(w, q)); };

    for (const Eigenpair& e : neumann_eigenpairs(grid, 16)) consider(e.eigenfunction);

    std::mt19937_64 rng(seed);
    for (std::size_t modes : {2u, 8u, 32u}) {
        for (int i = 0; i < 20; ++i) consider(random_band_limited(grid, modes, rng, 1.0, true));
    }

    // Bumps concentrated at the boundary (corners in 2D), where the Neumann
    // embedding constant is largest.
    const double lx = g.length(0);
    const double ly = g.dimension() == 2 ? g.length(1) : 0.0;
    for (double frac : {0.5, 0.25, 0.125, 0.0625, 0.03125}) {
        for (double cx : {0.0, lx}) {
            for (double cy : {0.0, ly}) {
                const double sx = frac * lx;
                const double sy = g.dimension() == 2 ? frac * ly : 1.0;
                consider(Field::from_function(grid, [=](double x, double y) {
                    const double dx = (x - cx) / sx;
                    const double dy = (y - cy) / sy;
                    return std::exp(-(dx * dx + dy * dy));
                }));
            }
        }
    }
    return margin * best;
}

double SmoothingCheckConfig::bound_factor(double t) const {
    const double b = beta();
    return std::pow(4.0, b * b) * std::pow(k0, 2.0 * b) / std::pow(t, b);
}

void SmoothingCheckConfig::validate() const {
    if (!(q > 2.0)) throw std::invalid_argument("smoothing check needs q > 2");
    if (!(k0 > 0.0)) throw std::invalid_argument("smoothing check needs K0 > 0");
    if (times.empty()) throw std::invalid_argument("smoothing check needs sample times");
    for (double t : times) {
        if (!(t > 0.0 && t <= 1.0)) throw std::invalid_argument("smoothing sample times must lie in (0,1]");
    }
}

nlohmann::json SmoothingReport::to_json() const {
    nlohmann::json s = nlohmann::json::array();
    for (const SmoothingSample& x : samples) {
        s.push_back({{"t", x.t}, {"difference_linf", x.difference_linf}, {"bound", x.bound}, {"ratio", x.ratio}});
    }
    return {{"beta", beta}, {"k0", k0}, {"initial_l2", initial_l2}, {"worst_ratio", worst_ratio}, {"samples", s}};
}

SmoothingReport smoothing_check(const Field& u0, const Field& v0, const SolverConfig& solver,
                                const SmoothingCheckConfig& check) {
    check.validate();
    u0.check_same_grid(v0);
    SolverConfig cfg = solver;
    cfg.snapshot_times = check.times;
    cfg.t_end = *std::max_element(check.times.begin(), check.times.end());
    cfg.dt = std::min(solver.dt, 0.5 * *std::min_element(check.times.begin(), check.times.end()));

    SmoothingReport report;
    report.beta = check.beta();
    report.k0 = check.k0;
    report.initial_l2 = (u0 - v0).l2_norm();
    report.worst_ratio = 0.0;

    const Trajectory a = evolve(u0, cfg);
    const Trajectory b = evolve(v0, cfg);
    for (double t : check.times) {
        auto find = [t](const Trajectory& tr) -> const Field& {
            for (const Snapshot& s : tr.snapshots()) {
                if (s.t == t) return s.field;
            }
            throw std::logic_error("missing smoothing snapshot");
        };
        const double gap = (find(a) - find(b)).linf_norm();
        const double bound = check.bound_factor(t) * report.initial_l2;
        const double ratio = bound > 0.0 ? gap / bound : (gap > 0.0 ? INFINITY : 0.0);
        report.samples.push_back({t, gap, bound, ratio});
        report.worst_ratio = std::max(report.worst_ratio, ratio);
    }
    if (report.worst_ratio > 1.0) {
        throw Falsification("L2 -> L-infinity smoothing bound violated", report.to_json());
    }
    return report;
}

std::vector<MassSample> difference_mass_history(const Field& v0, const Field& w0,
                                                const SolverConfig& solver) {
    v0.check_same_grid(w0);
    const Trajectory v = evolve(v0, solver);
    const Trajectory w = evolve(w0, solver);
    std::vector<MassSample> out;
    out.reserve(v.samples().size());
    for (std::size_t i = 0; i < v.samples().size(); ++i) {
        out.push_back({v.samples()[i].t, v.samples()[i].mean - w.samples()[i].mean});
    }
    return out;
}

}  // namespace slowfast::oracle
