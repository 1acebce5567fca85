#pragma once

// Static SVG line charts of probe time series.

#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include "immunesim/analysis.hpp"

namespace immunesim {

/// SVG document plotting one column of `series` against time (hours).
std::string render_svg(const TimeSeries& series, std::string_view component, std::string_view title = {});

/// One `<prefix><component>.svg` per column in `dir`; returns the written paths.
std::vector<std::filesystem::path> write_svg_plots(const TimeSeries& series, const std::filesystem::path& dir,
                                                   std::string_view prefix = {});

}  // namespace immunesim
