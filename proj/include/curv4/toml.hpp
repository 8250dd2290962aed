#pragma once

#include <string>

#include "curv4/chart.hpp"

namespace curv4 {

// Loads a chart from the TOML metric format:
//
//   [chart]
//   coords   = ["x1", "x2", "x3", "x4"]
//   domain   = [[0, 1], [0, 1], [0, 1], [0, 1]]
//   periodic = [true, true, true, true]
//
//   [metric]
//   g11 = "1"            # component expressions over x1..x4
//   g22 = "1+0.5*sin(2*pi*x1)"
//   ...                  # gij (i<j) optional, default 0; diagonal required
//
// Throws ParseError (with byte offset) on malformed input and
// ValidationError on structural problems.
MetricChart chart_from_toml(const std::string& text, const std::string& name);

MetricChart chart_from_toml_file(const std::string& path);

}  // namespace curv4
