#pragma once

#include <map>
#include <string>
#include <vector>

#include "slowfast/classify.hpp"
#include "slowfast/dynamics.hpp"
#include "slowfast/grid.hpp"
#include "slowfast/separator.hpp"

namespace slowfast::cli {

/// Thrown for unknown keys, malformed values and invalid combinations.
class ConfigError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/**
 * Flat key-value run configuration with dotted, namespaced keys
 * (grid.dim, solver.p, init.expr, separator.tol, ...).
 *
 * Every key has a default, so serialize() always lists the full key set in
 * sorted order with canonical value spellings; parsing that text reproduces
 * it byte for byte.
 */
class RunConfig {
public:
    RunConfig();

    static RunConfig parse(const std::string& text);
    static RunConfig load(const std::string& path);

    /// Sets one key; the value is validated and canonicalized.
    void set(const std::string& key, const std::string& value);
    const std::string& get(const std::string& key) const;
    bool has_key(const std::string& key) const { return values_.count(key) != 0; }

    std::string serialize() const;

    double number(const std::string& key) const;
    long integer(const std::string& key) const;
    bool boolean(const std::string& key) const;
    std::vector<double> numbers(const std::string& key) const;

    GridPtr grid() const;
    SolverConfig solver() const;
    ClassifyConfig classifier() const;
    SeparatorSettings separator() const;

    static std::vector<std::string> keys();

private:
    std::map<std::string, std::string> values_;
};

}  // namespace slowfast::cli
