#pragma once

#include "selinf/lft.hpp"
#include "selinf/model.hpp"

#include <cstdint>
#include <string>

namespace selinf::montecarlo {

enum class Design { TwoByTwo, ThreeByTwo, Independent };

std::string design_name(Design d);
Design design_from_name(const std::string& name);  // throws std::invalid_argument

struct McReport {
    std::size_t trials = 0;
    std::size_t feasible_count = 0;
    double fraction = 0.0;
    std::uint64_t seed = 0;
    std::string config;
};

// splitmix64 finalizer; per-trial subseed = mix64(seed + (trial+1) * golden).
std::uint64_t mix64(std::uint64_t x);
std::uint64_t subseed(std::uint64_t seed, std::uint64_t trial);

// 2 binary factors, 4 treatments; per treatment Pr[1,1] ~ U(0, 0.5) and all
// four cells follow from 0.5 margins.
SelectiveSystem random_system_2x2(std::uint64_t subseed);

// 3 binary factors, 8 treatments; per treatment all 2-marginal cells are 0.25,
// which pins every cell once Pr[1,1,1] = q ~ U(0, 0.25) is drawn: cells with
// an even number of 2s equal q, the rest 0.25 - q.
SelectiveSystem random_system_3x2(std::uint64_t subseed);

McReport estimate_feasible_fraction(Design design, std::size_t trials, std::uint64_t seed,
                                    const lft::Options& lft_options = {});

}  // namespace selinf::montecarlo
