#pragma once

#include "nlslab/torus.hpp"

namespace nlslab {

// smooth step: 0 for x <= 0, 1 for x >= 1, built from exp(-1/x)
double mollifier_ramp(double x);

// equals 1 on [1, 2], supported in (1/2, 4)
double dyadic_bump(double y);
// equals 1 on [0, 1), supported in [0, 2)
double zero_bump(double r);

// multiplier of the smoothed projector at frequency magnitude |xi|
double smooth_block_weight(DyadicIndex n, double abs_xi);

// time cutoff: 1 on [-1, 1], supported in (-1.9, 1.9)
double time_cutoff(double t);

}  // namespace nlslab
