#pragma once

#include <stdexcept>
#include <string>

#include <nlohmann/json.hpp>

namespace slowfast {

/// Non-finite values appeared during time stepping (dt too large for the grid).
class SolverDivergence : public std::runtime_error {
public:
    SolverDivergence(const std::string& what, double time, std::size_t step)
        : std::runtime_error(what), time_(time), step_(step) {}
    double time() const { return time_; }
    std::size_t step() const { return step_; }

private:
    double time_;
    std::size_t step_;
};

/// A statistic could not be formed because the data sit below the noise floor
/// or the fit window is too short.
class NoiseFloorError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Carries a JSON payload (partial statistics, probe log or a falsifying
/// witness) alongside the message.
class ReportedError : public std::runtime_error {
public:
    ReportedError(const std::string& what, nlohmann::json report)
        : std::runtime_error(what), report_(std::move(report)) {}
    const nlohmann::json& report() const { return report_; }

private:
    nlohmann::json report_;
};

/// The trajectory does not yet decide between the branches; extend the horizon.
class InconclusiveError : public ReportedError {
public:
    using ReportedError::ReportedError;
};

/// A separator probe stayed inconclusive after every allowed horizon doubling.
class HorizonExhausted : public ReportedError {
public:
    using ReportedError::ReportedError;
};

/// A property that must hold (monotone tags, bracket validity, a bound) failed.
class Falsification : public ReportedError {
public:
    using ReportedError::ReportedError;
};

}  // namespace slowfast
