#pragma once

#include <string>
#include <vector>

#include "hslab/errors.hpp"

namespace hslab {

/// Log-log scatter with a theoretical-slope guide line anchored at the
/// first point.  Byte-deterministic for identical inputs.
std::string emit_plot_svg(const std::vector<double>& x, const std::vector<double>& y,
                          double guide_slope, const std::string& title = "");

}  // namespace hslab
