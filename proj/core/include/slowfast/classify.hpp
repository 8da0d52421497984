#pragma once

#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "slowfast/dynamics.hpp"

namespace slowfast {

enum class Tag { null_solution, positive_slow, negative_slow, fast };

std::string to_string(Tag tag);
Tag tag_from_string(const std::string& s);
bool is_slow(Tag tag);

struct ClassifyConfig {
    double noise_floor = 1e-12;
    double fit_window = 0.5;     ///< tail fraction used for fits
    double slow_tolerance = 0.05;
    double rate_tolerance = 0.1; ///< relative
    double min_horizon = 10.0;
    std::size_t eigen_candidates = 32;

    void validate() const;
    nlohmann::json to_json() const;
};

struct Classification {
    Tag tag = Tag::null_solution;
    std::optional<double> sign_persistent_from;
    std::optional<double> slow_profile_error;    ///< against (pt)^(-1/p)
    std::optional<double> shifted_profile_error; ///< against (p(t+s))^(-1/p), s fitted
    std::optional<double> profile_shift;
    std::optional<double> fast_rate;             ///< bias-compensated eigenvalue estimate
    std::optional<double> raw_rate;              ///< negated log-L2 slope
    std::optional<double> matched_eigenvalue;
    std::size_t sample_count = 0;
    double horizon = 0.0;

    nlohmann::json to_json(const ClassifyConfig& config) const;
};

/// Time window [begin, end] of a trajectory.
struct TimeWindow {
    double begin;
    double end;
};

/// Earliest sample time after which min*max > 0 at every later sample.
/// Samples with ||u||_inf at or below the noise floor count as zero, not signed.
std::optional<double> sign_analysis(const Trajectory& traj, double noise_floor = 1e-12);

/// max over the window of |(pt)^(1/p) ||u||_inf - 1| and the same with
/// min|u|. Throws NoiseFloorError when the window is unsigned or below the
/// noise floor.
double slow_profile_statistic(const Trajectory& traj, TimeWindow window,
                              double noise_floor = 1e-12);

struct ShiftedProfile {
    double error;
    double shift;
};

/// As slow_profile_statistic against (p(t+s))^(-1/p), with the time shift s
/// fitted from the window. The unshifted profile differs from the shifted one
/// by O(t^(-1-1/p)), so both describe the same asymptotics; the shifted form
/// is decisive at horizons far shorter than 1/m^p for a small late mean m.
ShiftedProfile shifted_profile_statistic(const Trajectory& traj, TimeWindow window,
                                         double noise_floor = 1e-12);

struct RateFit {
    double rate;       ///< negated slope of log ||u||_L2
    double begin;
    double end;
    std::size_t samples;
    double mean_dt;
    bool truncated;    ///< window was cut at the noise floor
};

/// Least-squares decay rate of log ||u||_L2 over a window. Samples at or
/// below the noise floor end the window early; fewer than 8 usable samples
/// throws NoiseFloorError.
RateFit fast_rate_fit(const Trajectory& traj, TimeWindow window, double noise_floor = 1e-12);

/// Fit over the tail `fraction` of the portion of the trajectory above the
/// noise floor.
RateFit fast_rate_fit(const Trajectory& traj, const ClassifyConfig& config);

/// Per-unit-time decay of a discrete eigenmode under backward-Euler steps dt.
double effective_decay_rate(double discrete_eigenvalue, double dt);

/// Decides Null / PositiveSlow / NegativeSlow / Fast. Throws
/// InconclusiveError (with partial statistics) when the horizon is too short.
Classification classify(const Trajectory& traj, const ClassifyConfig& config = {});

}  // namespace slowfast
