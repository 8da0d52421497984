#pragma once

#include <cmath>
#include <numbers>

#include "slowfast/grid.hpp"

namespace slowfast::testing {

inline constexpr double pi = std::numbers::pi;

inline GridPtr unit_interval(std::size_t nodes = 257, double length = pi) {
    return Grid::interval(length, nodes);
}

inline Field cosine(const GridPtr& g, double a = 1.0, double k = 1.0) {
    const double l = g->length(0);
    return Field::from_function(g, [=](double x, double) { return a * std::cos(k * pi * x / l); });
}

// Closed form of u' = -|u|^p u, written out here rather than taken from the
// library oracle.
inline double ode_reference(double u0, double p, double t) {
    if (u0 == 0.0) return 0.0;
    return u0 / std::pow(1.0 + p * std::pow(std::abs(u0), p) * t, 1.0 / p);
}

}  // namespace slowfast::testing
