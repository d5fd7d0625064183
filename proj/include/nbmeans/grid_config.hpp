#pragma once

#include <filesystem>
#include <istream>
#include <string>

#include "nbmeans/simulation.hpp"

namespace nbmeans {

/// Parses a flat `key = value` grid config.
///
/// Lines are `key = v1, v2, ...`; `#` starts a comment. Numeric list items
/// may be ranges `start:stop:step` (inclusive). Recognized keys: mu_x, mu_y,
/// theta_x, theta_y, n_x, n_y (lists); trials, alpha, seed, mixture_weight,
/// c_a, c_b, variance (sample|population) (scalars); methods (list of
/// normal|bernstein|mixture). Missing keys keep the GridSpec defaults.
/// Throws ParseError on unknown keys, duplicates, or malformed values, and
/// InvalidArgument when the resulting grid is out of range.
GridSpec parse_grid_config(std::istream& in);
GridSpec load_grid_config(const std::filesystem::path& path);

/// Inverse of parse_grid_config for the fields it reads.
std::string format_grid_config(const GridSpec& grid);

} // namespace nbmeans
