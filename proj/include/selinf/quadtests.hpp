#pragma once

#include "selinf/metrics.hpp"
#include "selinf/model.hpp"

#include <array>
#include <string>
#include <vector>

namespace selinf::quadtests {

struct CosphericityViolation {
    FactorPoint x, u;  // two points of the first factor
    FactorPoint y, v;  // two points of the second factor
    double rho_xy = 0.0, rho_xv = 0.0, rho_uy = 0.0, rho_uv = 0.0;
    double lhs = 0.0;
    double rhs = 0.0;
};

struct CosphericityReport {
    std::vector<CosphericityViolation> violations;
    std::vector<std::string> warnings;  // skipped quadruples (degenerate marginals)
};

// Pearson correlation of the pair under its numeric embeddings.
double correlation(const metrics::PairDistribution& pair);  // throws on zero variance

// Correlation of the pair's variables across every treatment containing both
// points, agreement-checked and averaged.
double pairwise_correlation(const SelectiveSystem& sys, const FactorPoint& x, const FactorPoint& y,
                            double tol = kEpsProb);

CosphericityReport cosphericity_test(const SelectiveSystem& sys, double slack = 1e-10,
                                     double tol = kEpsProb);

}  // namespace selinf::quadtests
