#pragma once

#include <ostream>
#include <string>
#include <vector>

#include "soav/types.hpp"

namespace soav::io {

// Staircase plot of a zero-order-hold control signal. `time` carries the
// sample instants plus the final one (size u + 1); `guides` draws dashed
// horizontal lines at the alphabet levels.
void write_control_svg(std::ostream& out, const std::string& title,
                       const std::vector<double>& time, const Vector& u,
                       const std::vector<double>& guides);

// Line plot of the state components over time (x is n x time.size()).
void write_state_svg(std::ostream& out, const std::string& title,
                     const std::vector<double>& time, const Matrix& x);

}  // namespace soav::io
