#include "slowfast/random_fields.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace slowfast {

Field random_band_limited(const GridPtr& grid, std::size_t max_mode, std::mt19937_64& rng,
                          double amplitude, bool include_constant) {
    std::uniform_real_distribution<double> coef(-1.0, 1.0);
    const Grid& g = *grid;
    const std::size_t kx_max = std::min(max_mode, g.nodes(0) - 1);
    const std::size_t ky_max = g.dimension() == 2 ? std::min(max_mode, g.nodes(1) - 1) : 0;
    Field out(grid, 0.0);
    for (std::size_t ky = 0; ky <= ky_max; ++ky) {
        for (std::size_t kx = 0; kx <= kx_max; ++kx) {
            const bool constant = kx == 0 && ky == 0;
            const double a = coef(rng) * amplitude / std::max<double>(1.0, std::hypot(kx, ky));
            if (constant && !include_constant) continue;
            const double ax = kx * std::numbers::pi / g.length(0);
            const double ay = g.dimension() == 2 ? ky * std::numbers::pi / g.length(1) : 0.0;
            for (std::size_t n = 0; n < out.size(); ++n) {
                const auto [x, y] = g.point(n);
                out[n] += a * std::cos(ax * x) * std::cos(ay * y);
            }
        }
    }
    return out;
}

}  // namespace slowfast
