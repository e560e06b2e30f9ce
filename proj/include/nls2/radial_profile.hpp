#pragma once

#include <vector>

namespace nls2 {

/// Radial function sampled on an increasing mesh starting at r = 0.
struct RadialProfile {
    std::vector<double> radii;
    std::vector<double> samples;
    double beta = 0.0;  // coupling the profile was computed for
};

} // namespace nls2
