#pragma once

// Plain-text Theta files:
//
//     3            first line: d
//     1/7 2/7      strict upper triangle, row by row; "m/n" means 2 pi m / n,
//     3/7          anything else is read as radians
//
// Tokens may be split across lines freely; '#' starts a comment. An empty
// triangle means Theta = 0.

#include "ncdil/rotreps.hpp"

#include <istream>
#include <string>
#include <vector>

namespace ncdil {

struct ThetaFile {
  ThetaMatrix theta;
  std::vector<std::string> warnings;  // e.g. fractions that were reduced
};

ThetaFile parse_theta(std::istream& in, const std::string& source = "<input>");
ThetaFile load_theta_file(const std::string& path);

}  // namespace ncdil
