#pragma once

#include "selinf/model.hpp"

#include <array>

namespace selinf::gaussian {

// Median split of a standard bivariate normal pair: outcome 1 on (-inf, 0],
// outcome 2 on (0, inf). Cells follow the quadrant identity
// Pr[1,1] = Pr[2,2] = 1/4 + arcsin(rho)/(2 pi).
struct BvnSplitTable {
    double rho = 0.0;
    std::array<std::array<double, 2>, 2> p{};  // p[a-1][b-1]

    double same() const { return p[0][0]; }
    double diff() const { return p[0][1]; }
};

BvnSplitTable bvn_median_split(double rho);  // requires |rho| < 1

// Two binary factors, four treatments, correlations (-.9, +.9, +.9, -.1) at
// treatments (1,1), (1,2), (2,1), (2,2); tables are the median-split pmfs.
SelectiveSystem example12_system();

// Same four correlations carried by 2x2 tables whose Pearson correlation on
// the 1/2 embedding equals rho exactly (cells (1+rho)/4 and (1-rho)/4, held
// as exact rationals). The median split attenuates correlations, so tests
// stated directly on the latent correlations use this variant.
SelectiveSystem example12_correlation_system();

}  // namespace selinf::gaussian
