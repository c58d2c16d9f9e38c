#pragma once

#include "selinf/metrics.hpp"
#include "selinf/model.hpp"

#include <cstddef>
#include <vector>

namespace selinf::chains {

// A cyclic sequence of factor points; adjacent points (including last->first)
// belong to distinct factors.
struct Chain {
    std::vector<FactorPoint> points;

    bool operator==(const Chain&) const = default;
};

std::string chain_label(const Chain& chain);

bool valid_chain(const Chain& chain);
bool is_treatment_realizable(const Chain& chain, const std::vector<Treatment>& treatments);
bool is_irreducible(const Chain& chain, const std::vector<Treatment>& treatments);

// |T| equals the full cross product and every combination occurs.
bool completely_crossed(const SelectiveSystem& sys);

struct EnumerationResult {
    std::vector<Chain> chains;  // canonical orientation, each orbit once
    bool truncated = false;     // some chain may extend past max_len
};

EnumerationResult enumerate_irreducible_chains(const SelectiveSystem& sys, std::size_t max_len = 8);

// The 2-marginal of the pair's variables, x's variable first. Every treatment
// containing both points must induce the same metric value (within tol); the
// mean is returned.
double pairwise_value(const SelectiveSystem& sys, const metrics::MetricSpec& metric,
                      const FactorPoint& x, const FactorPoint& y, double tol = kEpsProb);

metrics::PairDistribution pair_marginal(const SelectiveSystem& sys, const Treatment& t,
                                        const FactorPoint& x, const FactorPoint& y);

struct ChainViolation {
    Chain chain;  // anchored orientation the inequality was evaluated in
    double lhs = 0.0;
    double rhs = 0.0;
    metrics::MetricSpec metric;
};

// Evaluates the closing-pair inequality on every irreducible chain, anchored
// at each rotation and in both directions.
std::vector<ChainViolation> distance_test(const SelectiveSystem& sys,
                                          const metrics::MetricSpec& metric,
                                          std::size_t max_len = 8, double slack = 1e-10);

}  // namespace selinf::chains
