#pragma once

#include <cstdint>
#include <cstddef>
#include <vector>

namespace selinf::lp {

enum class SolveStatus { Optimal, IterationLimit };

template <class Scalar>
struct PhaseOneResult {
    SolveStatus status = SolveStatus::Optimal;
    Scalar objective{};            // sum of artificials at termination
    std::vector<Scalar> x;         // structural variable values (basic solution)
    std::uint64_t iterations = 0;
};

struct ExactPolicy {
    template <class S> bool is_entering(const S& r) const { return r < 0; }
    template <class S> bool is_pivot(const S& a) const { return a > 0; }
};

struct FloatPolicy {
    double cost_tol = 1e-9;
    double pivot_tol = 1e-11;
    bool is_entering(double r) const { return r < -cost_tol; }
    bool is_pivot(double a) const { return a > pivot_tol; }
};

// Phase-I simplex with Bland's rule for the feasibility of A x = b, x >= 0,
// where every coefficient of A is 1 at the listed column indices and b >= 0.
// Minimizes the sum of one artificial variable per row; the system is
// feasible exactly when that minimum is zero. Bland's rule (lowest eligible
// index entering, lowest basic index on ratio ties) guarantees termination;
// artificial columns are retired once they leave the basis.
template <class Scalar, class Policy>
PhaseOneResult<Scalar> phase_one(std::size_t num_vars,
                                 const std::vector<std::vector<std::uint32_t>>& rows,
                                 const std::vector<Scalar>& rhs,
                                 const Policy& policy,
                                 std::uint64_t max_iterations) {
    const std::size_t R = rows.size();
    const std::size_t C = num_vars + R;  // structural + artificial columns

    std::vector<Scalar> tab(R * (C + 1), Scalar(0));
    auto at = [&](std::size_t i, std::size_t j) -> Scalar& { return tab[i * (C + 1) + j]; };

    std::vector<Scalar> cost(C, Scalar(0));
    std::vector<std::size_t> basis(R);
    std::vector<char> retired(C, 0);

    for (std::size_t i = 0; i < R; ++i) {
        for (auto j : rows[i]) {
            at(i, j) = Scalar(1);
            cost[j] -= Scalar(1);  // reduced cost of column j under the artificial basis
        }
        at(i, num_vars + i) = Scalar(1);
        at(i, C) = rhs[i];
        basis[i] = num_vars + i;
    }

    PhaseOneResult<Scalar> res;
    while (res.iterations < max_iterations) {
        std::size_t enter = C;
        for (std::size_t j = 0; j < C; ++j) {
            if (retired[j]) continue;
            if (policy.is_entering(cost[j])) { enter = j; break; }
        }
        if (enter == C) break;  // optimal

        std::size_t leave = R;
        for (std::size_t i = 0; i < R; ++i) {
            const Scalar& a = at(i, enter);
            if (!policy.is_pivot(a)) continue;
            if (leave == R) { leave = i; continue; }
            Scalar lhs = at(i, C) * at(leave, enter);
            Scalar rhs_ = at(leave, C) * a;
            if (lhs < rhs_ || (lhs == rhs_ && basis[i] < basis[leave])) leave = i;
        }
        if (leave == R) break;  // no positive pivot; objective cannot improve

        ++res.iterations;
        const Scalar pivot = at(leave, enter);
        for (std::size_t j = 0; j <= C; ++j) at(leave, j) /= pivot;
        for (std::size_t i = 0; i < R; ++i) {
            if (i == leave) continue;
            const Scalar f = at(i, enter);
            if (f == Scalar(0)) continue;
            for (std::size_t j = 0; j <= C; ++j) at(i, j) -= f * at(leave, j);
        }
        {
            const Scalar f = cost[enter];
            if (f != Scalar(0))
                for (std::size_t j = 0; j < C; ++j) cost[j] -= f * at(leave, j);
        }
        if (basis[leave] >= num_vars) retired[basis[leave]] = 1;
        basis[leave] = enter;
    }
    if (res.iterations >= max_iterations) res.status = SolveStatus::IterationLimit;

    res.x.assign(num_vars, Scalar(0));
    res.objective = Scalar(0);
    for (std::size_t i = 0; i < R; ++i) {
        if (basis[i] < num_vars)
            res.x[basis[i]] = at(i, C);
        else
            res.objective += at(i, C);
    }
    return res;
}

}  // namespace selinf::lp
