#pragma once

#include "selinf/model.hpp"

#include <string>
#include <vector>

namespace selinf::fixtures {

// Three binary responses under factors alpha(2), beta(3), gamma(4); five
// treatments. Marginal selectivity fails on {A,C} with discrepancy 0.1.
SelectiveSystem example8();

// Two binary responses under two binary factors. A's margins depend on alpha
// alone, but B's margin at beta=2 differs between the two treatments (the
// tables are kept verbatim from their source), so the marginal check flags
// {B}. Every chain pair is covered by exactly one treatment, which keeps the
// distance test well defined; it rejects the system outright once A is
// relabelled at alpha=2 (see example9_transformed).
SelectiveSystem example9();

// example9 with outcomes of A relabelled at the point alpha=2; the diagnosis
// must not change under such relabellings.
SelectiveSystem example9_transformed();

// Feasible 2x2 system.
SelectiveSystem example10();

// Infeasible 2x2 system whose necessary conditions nevertheless pass.
SelectiveSystem example11();

// Median-split bivariate normal system, correlations (-.9, .9, .9, -.1).
SelectiveSystem example12();

// Same correlations carried exactly by the 2x2 tables (no median split).
SelectiveSystem example12_correlations();

// Four binary factors, four ternary responses; every treatment concentrates
// on (A,B,C,D) = (1,2,3,*). Violates a depth-1 simplicial inequality.
SelectiveSystem tetrahedron();

// Product system: each response depends on its own factor only.
SelectiveSystem independent();

std::vector<std::string> fixture_names();
SelectiveSystem fixture_by_name(const std::string& name);  // throws std::invalid_argument

}  // namespace selinf::fixtures
