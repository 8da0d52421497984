#pragma once

#include <cstdint>
#include <random>

#include "slowfast/grid.hpp"

namespace slowfast {

/// Seeded band-limited cosine combination sum a_k cos(k.x), |a_k| <= amplitude / |k|,
/// over modes 1..max_mode per axis. The result has zero mean when the
/// constant mode is excluded.
Field random_band_limited(const GridPtr& grid, std::size_t max_mode, std::mt19937_64& rng,
                          double amplitude = 1.0, bool include_constant = false);

}  // namespace slowfast
