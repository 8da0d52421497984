#pragma once

#include <cstddef>
#include <functional>
#include <iosfwd>
#include <optional>
#include <vector>

#include "slowfast/grid.hpp"

namespace slowfast {

enum class SplittingScheme { lie, strang };

struct SolverConfig {
    double p = 2.0;
    double dt = 1e-3;
    double t_end = 10.0;
    std::size_t sample_stride = 1;
    SplittingScheme scheme = SplittingScheme::lie;

    // Optional geometric step growth: dt *= growth_factor every
    // growth_interval steps, never beyond dt_max.
    bool grow_dt = false;
    double growth_factor = 1.05;
    std::size_t growth_interval = 100;
    double dt_max = 0.1;

    /// Times at which the full field is stored; steps are shortened to land
    /// on them exactly.
    std::vector<double> snapshot_times;

    void validate() const;
};

/// Diagnostics of one sample. `dt` is the step that produced it (0 at t = 0).
struct Sample {
    double t = 0.0;
    double dt = 0.0;
    double min = 0.0;
    double max = 0.0;
    double mean = 0.0;
    double l2 = 0.0;
    double linf = 0.0;
    double energy = 0.0;
};

Sample measure_sample(const Field& u, double p, double t, double dt);

struct Snapshot {
    double t;
    Field field;
};

class Trajectory {
public:
    Trajectory(GridPtr grid, double p) : grid_(std::move(grid)), p_(p) {}

    /// Samples must be appended with strictly increasing times.
    void append(const Sample& s);
    void add_snapshot(double t, Field f) { snapshots_.push_back({t, std::move(f)}); }

    const Grid& grid() const { return *grid_; }
    const GridPtr& grid_ptr() const { return grid_; }
    double p() const { return p_; }
    const std::vector<Sample>& samples() const { return samples_; }
    const std::vector<Snapshot>& snapshots() const { return snapshots_; }
    double horizon() const { return samples_.empty() ? 0.0 : samples_.back().t; }

    /// Columns t,min,max,mean,l2,linf,energy.
    void write_csv(std::ostream& out) const;

private:
    GridPtr grid_;
    double p_;
    std::vector<Sample> samples_;
    std::vector<Snapshot> snapshots_;
};

/// Exact solution of u' = -|u|^p u after time dt, applied nodewise.
double nonlinear_flow_exact(double u, double p, double dt);
Field nonlinear_flow_exact(const Field& u, double p, double dt);
void nonlinear_flow_inplace(std::span<double> u, double p, double dt);

/**
 * Backward-Euler solver for (I - dt*L) u_new = u with the Neumann stencil L.
 *
 * 1D uses a cached tridiagonal factorization. 2D diagonalizes the x-axis
 * with its exact cosine eigenvectors and solves one tridiagonal system in y
 * per x-mode, which inverts the same matrix without approximation.
 */
class DiffusionSolver {
public:
    explicit DiffusionSolver(GridPtr grid);
    void solve_inplace(std::span<double> u, double dt);

private:
    struct Tridiagonal {
        double dt = -1.0;
        double shift = 0.0;
        std::vector<double> c_prime;
        std::vector<double> inv_denominator;
    };
    void factor(Tridiagonal& t, int axis, double dt, double shift) const;
    void sweep(const Tridiagonal& t, std::span<double> u, std::size_t offset,
               std::size_t stride, std::size_t n, double sub, double sub_last) const;

    GridPtr grid_;
    Tridiagonal line_;                  // 1D
    std::vector<Tridiagonal> per_mode_; // 2D, one per x-mode
    std::vector<double> forward_;       // 2D, x cosine analysis nx*nx
    std::vector<double> backward_;      // 2D, x cosine synthesis nx*nx
    std::vector<double> mu_;            // 2D, x discrete eigenvalues
    std::vector<double> scratch_;
};

Field diffusion_step_implicit(const Field& u, double dt);

/// Reusable splitting stepper; keeps the diffusion factorization between
/// steps of equal size.
class Stepper {
public:
    Stepper(GridPtr grid, SolverConfig config);
    void advance(Field& u, double dt);
    void advance(Field& u) { advance(u, config_.dt); }
    const SolverConfig& config() const { return config_; }

private:
    SolverConfig config_;
    DiffusionSolver diffusion_;
};

/// One splitting step of size dt (Lie: nonlinear then diffusion;
/// Strang: half nonlinear, diffusion, half nonlinear).
Field step(const Field& u, const SolverConfig& config, double dt);

/// Observer invoked after every step with the current time and state.
using StepObserver = std::function<void(double t, const Field& u)>;

/// Iterates `step` to t_end; throws SolverDivergence on non-finite values.
Trajectory evolve(const Field& u0, const SolverConfig& config, const StepObserver& observer = {});

/// Final state reached by evolve, without diagnostics.
Field evolve_to(const Field& u0, const SolverConfig& config, const StepObserver& observer = {});

/// 1/2 * Dirichlet form + 1/(p+2) * integral of |u|^(p+2).
double energy_fp(const Field& u, double p);

}  // namespace slowfast
