#pragma once

#include "qprobe/report.hpp"

#include <string>

namespace qprobe {

// Bounds vs thickness with the critical-amplitude guide lines; one polyline
// per bound series (ids lower_fid, upper_fid, lower_td, upper_td) plus error
// bars where the standard deviations are nonzero.
std::string render_sweep_svg(const SweepReport& report);
std::string render_sweep_svg(const std::vector<SweepCsvRow>& rows);

// Strip chart of the interval classification over the tau axis.
std::string render_intervals_svg(const IntervalReport& report);

}  // namespace qprobe
