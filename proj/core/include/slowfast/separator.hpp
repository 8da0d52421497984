#pragma once

#include <optional>
#include <utility>
#include <vector>

#include <nlohmann/json.hpp>

#include "slowfast/classify.hpp"
#include "slowfast/dynamics.hpp"

namespace slowfast {

/// Probe and bisection parameters shared by every separator query.
struct SeparatorSettings {
    double tolerance = 1e-3;   ///< half-width target of the final bracket
    SolverConfig solver = default_probe_solver();
    ClassifyConfig classifier{};
    double max_horizon = 800.0; ///< probe horizon doubles from solver.t_end up to this

    static SolverConfig default_probe_solver();
    void validate() const;
};

struct SeparatorQuery {
    Field w0;
    std::optional<std::pair<double, double>> bracket;
    SeparatorSettings settings{};
};

struct ProbeRecord {
    double k;
    std::optional<Tag> tag;   ///< empty when the probe was inconclusive at this horizon
    double horizon;
};

struct ProbeOutcome {
    Classification classification;
    double horizon;
};

struct SeparatorResult {
    double phi = 0.0;
    double lower = 0.0;
    double upper = 0.0;
    Classification lower_classification;
    Classification upper_classification;
    bool exact_hit = false;   ///< a midpoint classified Fast/Null and was returned directly
    double tolerance = 0.0;
    std::vector<ProbeRecord> probes;

    nlohmann::json to_json() const;
};

nlohmann::json to_json(const std::vector<ProbeRecord>& log);

/// k- = -(||w0||_inf + 1), k+ = ||w0||_inf + 1: w0 + k+ >= 1 is positive data.
std::pair<double, double> initial_bracket(const Field& w0);

/// Classifies w0 + k, doubling the horizon on inconclusive results; throws
/// HorizonExhausted once max_horizon would be exceeded.
ProbeOutcome probe_offset(const Field& w0, double k, const SeparatorSettings& settings,
                          std::vector<ProbeRecord>* log = nullptr);

/// Bisection for the offset separating negative-slow from positive-slow data.
SeparatorResult compute_phi(const SeparatorQuery& query);

/// Classifications of w0 + k for ascending k, probed concurrently. Throws
/// Falsification if the tags are not Neg* (Fast|Null)? Pos*.
std::vector<Classification> monotonicity_scan(const Field& w0, const std::vector<double>& ks,
                                              const SeparatorSettings& settings);

/// True iff the tag sequence has the monotone Neg* (Fast|Null)? Pos* shape.
bool is_monotone_sequence(const std::vector<Tag>& tags);

struct LipschitzReport {
    double phi_gap;        ///< |Phi(w1) - Phi(w2)|
    double linf_distance;  ///< ||w1 - w2||_inf
    SeparatorResult first;
    SeparatorResult second;
};

LipschitzReport lipschitz_probe(const Field& w1, const Field& w2, const SeparatorSettings& settings);

struct OddnessReport {
    double sum;  ///< Phi(w0) + Phi(-w0)
    SeparatorResult positive;
    SeparatorResult negative;
};

OddnessReport oddness_probe(const Field& w0, const SeparatorSettings& settings);

}  // namespace slowfast
