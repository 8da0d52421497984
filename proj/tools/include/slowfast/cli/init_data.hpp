#pragma once

#include <cstdint>
#include <string>

#include "slowfast/grid.hpp"

namespace slowfast::cli {

struct InitOptions {
    std::string expr = "cos:1";
    double offset = 0.0;
    bool remean = false;
    std::uint64_t seed = 1;
    std::size_t modes = 8;
};

/// Evaluates an initial-data expression on a grid:
///   zero | constant:c | cos:a | coslist:a1,a2,... | random:A | file:path
/// cos and coslist use cos(k pi x / L) along the first axis. random draws a
/// seeded band-limited mean-zero field with amplitude A. The field is
/// remeaned (if requested) before the offset is added.
Field build_initial_data(const GridPtr& grid, const InitOptions& opts);

}  // namespace slowfast::cli
