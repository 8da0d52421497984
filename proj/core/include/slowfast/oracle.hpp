#pragma once

#include <cstdint>
#include <vector>

#include <nlohmann/json.hpp>

#include "slowfast/dynamics.hpp"
#include "slowfast/grid.hpp"

namespace slowfast::oracle {

/// sign(u0) |u0| / (1 + p |u0|^p t)^(1/p): the spatially constant solution.
double ode_exact(double u0, double p, double t);

/// Linear heat flow by expansion in the analytic cosine basis, each mode
/// damped by exp(-lambda t). Uses its own direct transform, independent of
/// the time stepper.
Field linear_heat_spectral(const Field& f, double t);

/// ||w||_q / ||w||_H1 for a single field.
double embedding_ratio(const Field& w, double q);

/// Largest embedding ratio over eigenfunctions, seeded band-limited fields
/// and near-boundary bumps, times `margin`.
double measure_embedding_constant(const GridPtr& grid, double q, std::uint64_t seed = 7,
                                  double margin = 1.2);

struct SmoothingCheckConfig {
    double q = 4.0;
    double k0 = 1.0;
    std::vector<double> times{0.1, 0.5, 1.0};

    double beta() const { return q / (2.0 * q - 4.0); }
    /// 4^(beta^2) K0^(2 beta) / t^beta
    double bound_factor(double t) const;
    void validate() const;
};

struct SmoothingSample {
    double t;
    double difference_linf;
    double bound;
    double ratio;  ///< difference_linf / bound; holds when <= 1
};

struct SmoothingReport {
    double beta;
    double k0;
    double initial_l2;
    double worst_ratio;
    std::vector<SmoothingSample> samples;

    nlohmann::json to_json() const;
};

/// Evolves both data with the nonlinear solver and compares the L-infinity
/// gap at each sample time with the L2 -> L-infinity smoothing bound.
/// Throws Falsification (report attached) when the bound fails.
SmoothingReport smoothing_check(const Field& u0, const Field& v0, const SolverConfig& solver,
                                const SmoothingCheckConfig& check);

struct MassSample {
    double t;
    double mass;  ///< mean(v - w)
};

/// mean(v(t) - w(t)) sampled every solver.sample_stride steps.
std::vector<MassSample> difference_mass_history(const Field& v0, const Field& w0,
                                                const SolverConfig& solver);

}  // namespace slowfast::oracle
