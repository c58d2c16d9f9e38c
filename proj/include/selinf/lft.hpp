#pragma once

#include "selinf/model.hpp"

#include <cstdint>

namespace selinf::lft {

enum class Mode { Float, Rational };
enum class Status { Feasible, Infeasible, Undecided };

struct Options {
    Mode mode = Mode::Float;
    double eps_lp = 1e-8;
    double ms_tol = kEpsProb;
    std::uint64_t max_iterations = 1'000'000;
    std::size_t q_var_cap = 10'000'000;
};

// The feasibility program: one Q-variable per joint assignment of an outcome
// to every factor point, one equality row per (treatment, joint outcome).
struct LpProblem {
    std::size_t num_vars = 0;
    std::vector<std::vector<std::uint32_t>> rows;  // column indices; all coefficients are 1
    std::vector<Prob> rhs;                         // aligned with rows
    std::vector<std::pair<std::size_t, std::vector<std::string>>> row_keys;  // (treatment idx, outcome tuple)

    // Q-index <-> assignment tuple. Slot s holds an outcome of variable
    // point_var[s] at factor point points[s]; the last slot varies fastest.
    std::vector<FactorPoint> points;
    std::vector<std::size_t> point_var;
    std::vector<std::size_t> radices;

    std::vector<std::string> assignment(std::size_t q_index,
                                        const SelectiveSystem& sys) const;
};

struct Verdict {
    Status status = Status::Undecided;
    double phase1_objective = 0.0;
    double max_residual = 0.0;
    std::map<std::vector<std::string>, double> witness;  // nonzero Q entries by assignment tuple
    bool witness_has_zeros = false;
    std::uint64_t iterations = 0;
    std::string diagnostics;

    bool feasible() const { return status == Status::Feasible; }
};

LpProblem build_lp(const SelectiveSystem& sys, const Options& opts = {});

Verdict solve_feasibility(const LpProblem& lp, const SelectiveSystem& sys,
                          const Options& opts = {});

// Checks complete marginal selectivity first (a violation settles the matter
// without touching the LP), then builds and solves the program.
Verdict lft(const SelectiveSystem& sys, const Options& opts = {});

// variable/factor name -> partition of its outcomes/levels into groups
using OutcomeGroupings = std::map<std::string, std::vector<std::vector<std::string>>>;
using LevelGroupings = std::map<std::string, std::vector<std::vector<std::string>>>;

SelectiveSystem coarsen(const SelectiveSystem& sys,
                        const OutcomeGroupings& variable_groupings,
                        const LevelGroupings& factor_groupings,
                        double tol = kEpsProb);

}  // namespace selinf::lft
