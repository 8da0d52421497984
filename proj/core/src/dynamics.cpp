#include "slowfast/dynamics.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numbers>
#include <ostream>
#include <stdexcept>
#include <string>

#include "slowfast/errors.hpp"

namespace slowfast {

void SolverConfig::validate() const {
    if (!(p > 0.0) || !std::isfinite(p)) throw std::invalid_argument("solver p must be positive");
    if (!(dt > 0.0) || !std::isfinite(dt)) throw std::invalid_argument("solver dt must be positive");
    if (!(t_end > 0.0) || !std::isfinite(t_end)) throw std::invalid_argument("solver t_end must be positive");
    if (!(dt < t_end)) throw std::invalid_argument("solver dt must be smaller than t_end");
    if (sample_stride < 1) throw std::invalid_argument("solver sample_stride must be at least 1");
    if (grow_dt) {
        if (!(growth_factor >= 1.0)) throw std::invalid_argument("solver growth_factor must be >= 1");
        if (growth_interval < 1) throw std::invalid_argument("solver growth_interval must be >= 1");
        if (!(dt_max > 0.0)) throw std::invalid_argument("solver dt_max must be positive");
    }
    for (double s : snapshot_times) {
        if (!(s >= 0.0) || s > t_end) throw std::invalid_argument("snapshot times must lie in [0, t_end]");
    }
}

// ---------------------------------------------------------------------------
// Trajectory

Sample measure_sample(const Field& u, double p, double t, double dt) {
    Sample s;
    s.t = t;
    s.dt = dt;
    s.min = u.min();
    s.max = u.max();
    s.mean = u.mean();
    s.l2 = u.l2_norm();
    s.linf = u.linf_norm();
    s.energy = energy_fp(u, p);
    return s;
}

void Trajectory::append(const Sample& s) {
    if (!samples_.empty() && !(s.t > samples_.back().t)) {
        throw std::invalid_argument("trajectory sample times must increase strictly");
    }
    if (samples_.empty() && s.t != 0.0) {
        throw std::invalid_argument("trajectory must start at t = 0");
    }
    samples_.push_back(s);
}

void Trajectory::write_csv(std::ostream& out) const {
    out << "t,min,max,mean,l2,linf,energy\n";
    char buf[256];
    for (const Sample& s : samples_) {
        std::snprintf(buf, sizeof buf, "%.17g,%.17g,%.17g,%.17g,%.17g,%.17g,%.17g\n", s.t, s.min,
                      s.max, s.mean, s.l2, s.linf, s.energy);
        out << buf;
    }
}

// ---------------------------------------------------------------------------
// Nonlinear substep

double nonlinear_flow_exact(double u, double p, double dt) {
    const double a = std::abs(u);
    if (p == 2.0) return u / std::sqrt(1.0 + 2.0 * a * a * dt);
    if (p == 1.0) return u / (1.0 + a * dt);
    return u * std::pow(1.0 + p * std::pow(a, p) * dt, -1.0 / p);
}

void nonlinear_flow_inplace(std::span<double> u, double p, double dt) {
    if (p == 2.0) {
        const double c = 2.0 * dt;
        for (double& v : u) v /= std::sqrt(1.0 + c * v * v);
    } else if (p == 1.0) {
        for (double& v : u) v /= 1.0 + std::abs(v) * dt;
    } else {
        for (double& v : u) v = nonlinear_flow_exact(v, p, dt);
    }
}

Field nonlinear_flow_exact(const Field& u, double p, double dt) {
    if (!(dt >= 0.0)) throw std::invalid_argument("nonlinear flow needs dt >= 0");
    if (!(p > 0.0)) throw std::invalid_argument("nonlinear flow needs p > 0");
    Field out(u);
    nonlinear_flow_inplace(out.values(), p, dt);
    return out;
}

// ---------------------------------------------------------------------------
// Diffusion substep

DiffusionSolver::DiffusionSolver(GridPtr grid) : grid_(std::move(grid)) {
    const Grid& g = *grid_;
    if (g.dimension() == 2) {
        const std::size_t nx = g.nodes(0);
        forward_.resize(nx * nx);
        backward_.resize(nx * nx);
        mu_.resize(nx);
        const double h = g.spacing(0);
        for (std::size_t k = 0; k < nx; ++k) {
            mu_[k] = discrete_axis_eigenvalue(g, 0, k);
            const double norm = (k == 0 || k + 1 == nx) ? g.length(0) : 0.5 * g.length(0);
            for (std::size_t i = 0; i < nx; ++i) {
                const double c = std::cos(static_cast<double>(k * i) * std::numbers::pi /
                                          static_cast<double>(nx - 1));
                const double w = (i == 0 || i + 1 == nx) ? 0.5 * h : h;
                forward_[k * nx + i] = w * c / norm;
                backward_[i * nx + k] = c;
            }
        }
        per_mode_.resize(nx);
        scratch_.resize(g.size());
    }
}

void DiffusionSolver::factor(Tridiagonal& t, int axis, double dt, double shift) const {
    const Grid& g = *grid_;
    const std::size_t n = g.nodes(axis);
    const double h = g.spacing(axis);
    const double r = dt / (h * h);
    const double diag = 1.0 + 2.0 * r + dt * shift;
    t.dt = dt;
    t.shift = shift;
    t.c_prime.assign(n, 0.0);
    t.inv_denominator.assign(n, 0.0);
    double denom = diag;
    t.inv_denominator[0] = 1.0 / denom;
    t.c_prime[0] = -2.0 * r / denom;
    for (std::size_t i = 1; i < n; ++i) {
        const double sub = (i + 1 == n) ? -2.0 * r : -r;
        const double super = -r;
        denom = diag - sub * t.c_prime[i - 1];
        t.inv_denominator[i] = 1.0 / denom;
        t.c_prime[i] = (i + 1 == n) ? 0.0 : super / denom;
    }
}

void DiffusionSolver::sweep(const Tridiagonal& t, std::span<double> u, std::size_t offset,
                            std::size_t stride, std::size_t n, double sub,
                            double sub_last) const {
    // Forward elimination in place: u becomes d'.
    u[offset] *= t.inv_denominator[0];
    for (std::size_t i = 1; i < n; ++i) {
        const double a = (i + 1 == n) ? sub_last : sub;
        double& ui = u[offset + i * stride];
        ui = (ui - a * u[offset + (i - 1) * stride]) * t.inv_denominator[i];
    }
    for (std::size_t i = n - 1; i-- > 0;) {
        u[offset + i * stride] -= t.c_prime[i] * u[offset + (i + 1) * stride];
    }
}

void DiffusionSolver::solve_inplace(std::span<double> u, double dt) {
    if (!(dt > 0.0)) throw std::invalid_argument("diffusion step needs dt > 0");
    const Grid& g = *grid_;
    if (u.size() != g.size()) throw std::invalid_argument("diffusion step: mismatched grid");
    const std::size_t nx = g.nodes(0);
    if (g.dimension() == 1) {
        if (line_.dt != dt) factor(line_, 0, dt, 0.0);
        const double r = dt / (g.spacing(0) * g.spacing(0));
        sweep(line_, u, 0, 1, nx, -r, -2.0 * r);
        return;
    }
    const std::size_t ny = g.nodes(1);
    const double ry = dt / (g.spacing(1) * g.spacing(1));
    // scratch_[k * ny + j] = x-mode k coefficient on row j.
    for (std::size_t j = 0; j < ny; ++j) {
        const double* row = u.data() + j * nx;
        for (std::size_t k = 0; k < nx; ++k) {
            const double* f = forward_.data() + k * nx;
            double s = 0.0;
            for (std::size_t i = 0; i < nx; ++i) s += f[i] * row[i];
            scratch_[k * ny + j] = s;
        }
    }
    for (std::size_t k = 0; k < nx; ++k) {
        Tridiagonal& t = per_mode_[k];
        if (t.dt != dt) factor(t, 1, dt, mu_[k]);
        sweep(t, scratch_, k * ny, 1, ny, -ry, -2.0 * ry);
    }
    for (std::size_t j = 0; j < ny; ++j) {
        double* row = u.data() + j * nx;
        for (std::size_t i = 0; i < nx; ++i) {
            const double* b = backward_.data() + i * nx;
            double s = 0.0;
            for (std::size_t k = 0; k < nx; ++k) s += b[k] * scratch_[k * ny + j];
            row[i] = s;
        }
    }
}

Field diffusion_step_implicit(const Field& u, double dt) {
    DiffusionSolver solver(u.grid_ptr());
    Field out(u);
    solver.solve_inplace(out.values(), dt);
    return out;
}

// ---------------------------------------------------------------------------
// Splitting and time loop

namespace {

void split_step(std::span<double> u, DiffusionSolver& diffusion, const SolverConfig& config,
                double dt) {
    if (config.scheme == SplittingScheme::lie) {
        nonlinear_flow_inplace(u, config.p, dt);
        diffusion.solve_inplace(u, dt);
    } else {
        nonlinear_flow_inplace(u, config.p, 0.5 * dt);
        diffusion.solve_inplace(u, dt);
        nonlinear_flow_inplace(u, config.p, 0.5 * dt);
    }
}

bool finite(std::span<const double> u) {
    for (double v : u) {
        if (!std::isfinite(v)) return false;
    }
    return true;
}

struct Driver {
    const SolverConfig& config;
    const StepObserver& observer;

    template <class OnStep>
    Field run(const Field& u0, OnStep&& on_step) const {
        config.validate();
        if (!u0.all_finite()) throw std::invalid_argument("initial data must be finite");
        Field u(u0);
        DiffusionSolver diffusion(u.grid_ptr());
        std::vector<double> stops = config.snapshot_times;
        std::sort(stops.begin(), stops.end());
        stops.erase(std::unique(stops.begin(), stops.end()), stops.end());
        stops.erase(std::remove_if(stops.begin(), stops.end(), [](double s) { return s <= 0.0; }),
                    stops.end());
        if (stops.empty() || stops.back() < config.t_end) stops.push_back(config.t_end);

        const double end_slack = 1e-12 * config.t_end;
        double t = 0.0;
        double dt = config.dt;
        std::size_t steps = 0;
        std::size_t next_stop = 0;
        while (next_stop < stops.size()) {
            const double target = stops[next_stop];
            double h = dt;
            bool hits = false;
            if (t + h >= target - end_slack) {
                h = target - t;
                hits = true;
            }
            split_step(u.values(), diffusion, config, h);
            t = hits ? target : t + h;
            ++steps;
            if (!finite(u.values())) {
                throw SolverDivergence("non-finite values at t = " + std::to_string(t) +
                                           " (step " + std::to_string(steps) +
                                           "); dt too large for this grid",
                                       t, steps);
            }
            if (observer) observer(t, u);
            const bool snapshot =
                hits && std::find(config.snapshot_times.begin(), config.snapshot_times.end(), t) !=
                            config.snapshot_times.end();
            on_step(t, h, u, steps, hits, snapshot);
            if (hits) ++next_stop;
            if (config.grow_dt && steps % config.growth_interval == 0) {
                dt = std::max(dt, std::min(dt * config.growth_factor, config.dt_max));
            }
        }
        return u;
    }
};

}  // namespace

Stepper::Stepper(GridPtr grid, SolverConfig config)
    : config_(std::move(config)), diffusion_(std::move(grid)) {}

void Stepper::advance(Field& u, double dt) { split_step(u.values(), diffusion_, config_, dt); }

Field step(const Field& u, const SolverConfig& config, double dt) {
    DiffusionSolver diffusion(u.grid_ptr());
    Field out(u);
    split_step(out.values(), diffusion, config, dt);
    return out;
}

Trajectory evolve(const Field& u0, const SolverConfig& config, const StepObserver& observer) {
    config.validate();
    Trajectory traj(u0.grid_ptr(), config.p);
    traj.append(measure_sample(u0, config.p, 0.0, 0.0));
    if (std::find(config.snapshot_times.begin(), config.snapshot_times.end(), 0.0) !=
        config.snapshot_times.end()) {
        traj.add_snapshot(0.0, u0);
    }
    Driver driver{config, observer};
    driver.run(u0, [&](double t, double h, const Field& u, std::size_t steps, bool hits, bool snapshot) {
        if (steps % config.sample_stride == 0 || hits) {
            traj.append(measure_sample(u, config.p, t, h));
        }
        if (snapshot) traj.add_snapshot(t, u);
    });
    return traj;
}

Field evolve_to(const Field& u0, const SolverConfig& config, const StepObserver& observer) {
    Driver driver{config, observer};
    return driver.run(u0, [](double, double, const Field&, std::size_t, bool, bool) {});
}

double energy_fp(const Field& u, double p) {
    const auto w = u.grid().weights();
    double potential = 0.0;
    if (p == 2.0) {
        for (std::size_t n = 0; n < u.size(); ++n) potential += w[n] * (u[n] * u[n]) * (u[n] * u[n]);
    } else {
        for (std::size_t n = 0; n < u.size(); ++n) potential += w[n] * std::pow(std::abs(u[n]), p + 2.0);
    }
    return 0.5 * dirichlet_form(u) + potential / (p + 2.0);
}

}  // namespace slowfast
