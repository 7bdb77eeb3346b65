#pragma once
// Command-line front end. Exit codes: 0 success, 1 usage or validation error,
// 2 solver non-convergence.

#include "philab/geometry.hpp"

#include <iosfwd>
#include <string>
#include <vector>

namespace philab {

/// args excludes the program name.
int run_cli(const std::vector<std::string> &args, std::ostream &out, std::ostream &err);

/// "disk[:cx,cy,r]", "square", "polygon:k[,r]", "annulus:r_in,r_out" or "mask:path".
/// Mask files must match the requested grid.
DomainMask parse_domain(const std::string &text, const GridSpec &grid);

/// "x0,y0,x1,y1"
Box parse_box(const std::string &text);

} // namespace philab
