#include "selinf/lft.hpp"

#include "selinf/simplex.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>

namespace selinf::lft {

namespace {

std::string join(const std::vector<std::string>& parts, const char* sep) {
    std::string s;
    for (const auto& p : parts) {
        if (!s.empty()) s += sep;
        s += p;
    }
    return s;
}

}  // namespace

std::vector<std::string> LpProblem::assignment(std::size_t q_index,
                                               const SelectiveSystem& sys) const {
    std::vector<std::string> labels(points.size());
    for (std::size_t s = points.size(); s-- > 0;) {
        std::size_t digit = q_index % radices[s];
        q_index /= radices[s];
        labels[s] = sys.variables[point_var[s]].outcomes[digit];
    }
    return labels;
}

LpProblem build_lp(const SelectiveSystem& sys, const Options& opts) {
    require_valid(sys);

    LpProblem lp;
    for (std::size_t i = 0; i < sys.factors.size(); ++i)
        for (const auto& level : sys.factors[i].levels) {
            lp.points.push_back({sys.factors[i].name, level});
            lp.point_var.push_back(i);
            lp.radices.push_back(sys.variables[i].outcomes.size());
        }

    std::size_t num_q = 1;
    for (auto m : lp.radices) {
        if (num_q > opts.q_var_cap / m) {
            std::ostringstream os;
            os << "Q-variable count exceeds cap " << opts.q_var_cap
               << " (product of per-point outcome counts grows past "
               << static_cast<double>(num_q) * static_cast<double>(m)
               << "); coarsen outcomes or levels first";
            throw std::length_error(os.str());
        }
        num_q *= m;
    }
    lp.num_vars = num_q;

    std::vector<std::size_t> strides(lp.points.size(), 1);
    for (std::size_t s = lp.points.size() - 1; s-- > 0;)
        strides[s] = strides[s + 1] * lp.radices[s + 1];

    std::vector<std::size_t> out_counts;
    for (const auto& v : sys.variables) out_counts.push_back(v.outcomes.size());
    std::size_t prod_m = 1;
    for (auto m : out_counts) prod_m *= m;

    lp.rows.assign(sys.treatments.size() * prod_m, {});
    lp.rhs.assign(lp.rows.size(), Prob{});
    lp.row_keys.resize(lp.rows.size());

    for (std::size_t ti = 0; ti < sys.treatments.size(); ++ti) {
        const Treatment& t = sys.treatments[ti];
        const JointPmf& pmf = sys.distributions.at(t);

        // Slot selected by this treatment for each variable.
        std::vector<std::size_t> sel(sys.factors.size());
        std::size_t slot = 0;
        for (std::size_t i = 0; i < sys.factors.size(); ++i) {
            const auto& levels = sys.factors[i].levels;
            const std::string& chosen = t.at(sys.factors[i].name);
            for (std::size_t j = 0; j < levels.size(); ++j)
                if (levels[j] == chosen) sel[i] = slot + j;
            slot += levels.size();
        }

        Odometer od(out_counts);
        for (std::size_t oi = 0; !od.done(); od.next(), ++oi) {
            std::vector<std::string> key(sys.variables.size());
            for (std::size_t i = 0; i < sys.variables.size(); ++i)
                key[i] = sys.variables[i].outcomes[od.digits()[i]];
            lp.rhs[ti * prod_m + oi] = pmf.at(key);
            lp.row_keys[ti * prod_m + oi] = {ti, std::move(key)};
        }

        for (std::size_t q = 0; q < num_q; ++q) {
            std::size_t oi = 0;
            for (std::size_t i = 0; i < sys.variables.size(); ++i) {
                std::size_t digit = (q / strides[sel[i]]) % lp.radices[sel[i]];
                oi = oi * out_counts[i] + digit;
            }
            lp.rows[ti * prod_m + oi].push_back(static_cast<std::uint32_t>(q));
        }
    }
    return lp;
}

namespace {

template <class Scalar>
Scalar scalar_rhs(const Prob& p);

template <>
double scalar_rhs<double>(const Prob& p) { return p.value; }

template <>
Rational scalar_rhs<Rational>(const Prob& p) {
    return p.exact ? *p.exact : rational_from_double(p.value);
}

template <class Scalar, class Policy>
Verdict run_solver(const LpProblem& lp, const SelectiveSystem& sys, const Options& opts,
                   const Policy& policy, double feasibility_cut) {
    std::vector<Scalar> rhs;
    rhs.reserve(lp.rhs.size());
    for (const auto& p : lp.rhs) rhs.push_back(scalar_rhs<Scalar>(p));

    auto sol = lp::phase_one<Scalar>(lp.num_vars, lp.rows, rhs, policy, opts.max_iterations);

    Verdict v;
    v.iterations = sol.iterations;
    v.phase1_objective = static_cast<double>(sol.objective);
    if (sol.status == lp::SolveStatus::IterationLimit) {
        v.status = Status::Undecided;
        v.diagnostics = "iteration cap reached before optimality; verdict withheld";
        return v;
    }

    if (v.phase1_objective > feasibility_cut) {
        v.status = Status::Infeasible;
        std::ostringstream os;
        os << "no nonnegative solution: phase-I objective " << v.phase1_objective;
        v.diagnostics = os.str();
        return v;
    }

    v.status = Status::Feasible;
    Scalar worst(0);
    for (std::size_t i = 0; i < lp.rows.size(); ++i) {
        Scalar acc(0);
        for (auto j : lp.rows[i]) acc += sol.x[j];
        Scalar r = acc - rhs[i];
        if (r < Scalar(0)) r = -r;
        if (worst < r) worst = r;
    }
    v.max_residual = static_cast<double>(worst);

    std::size_t zeros = 0;
    for (std::size_t q = 0; q < lp.num_vars; ++q) {
        if (sol.x[q] == Scalar(0)) {
            ++zeros;
            continue;
        }
        if (sol.x[q] < Scalar(0) && static_cast<double>(sol.x[q]) < -opts.eps_lp)
            throw std::logic_error("feasible witness has a negative entry");
        v.witness[lp.assignment(q, sys)] = static_cast<double>(sol.x[q]);
    }
    v.witness_has_zeros = zeros > 0;
    if (v.max_residual > 10 * opts.eps_lp)
        throw std::logic_error("feasible witness violates a constraint beyond tolerance");

    std::ostringstream os;
    os << "feasible: phase-I objective " << v.phase1_objective << ", max residual "
       << v.max_residual << ", witness support " << v.witness.size() << "/" << lp.num_vars
       << (v.witness_has_zeros ? " (non-interior: witness has zero entries)" : "");
    v.diagnostics = os.str();
    return v;
}

}  // namespace

Verdict solve_feasibility(const LpProblem& lp, const SelectiveSystem& sys, const Options& opts) {
    if (opts.mode == Mode::Rational)
        return run_solver<Rational>(lp, sys, opts, lp::ExactPolicy{}, 0.0);
    lp::FloatPolicy policy;
    return run_solver<double>(lp, sys, opts, policy, opts.eps_lp);
}

Verdict lft(const SelectiveSystem& sys, const Options& opts) {
    require_valid(sys);
    auto ms = check_marginal_selectivity(sys, opts.ms_tol);
    if (!ms.satisfied) {
        const MsViolation* worst = nullptr;
        for (const auto& viol : ms.violations)
            if (!worst || viol.discrepancy > worst->discrepancy) worst = &viol;
        Verdict v;
        v.status = Status::Infeasible;
        std::ostringstream os;
        os << "marginal selectivity violated on {" << join(worst->variables, ",") << "}: "
           << treatment_label(worst->t1) << " vs " << treatment_label(worst->t2)
           << " disagree by " << worst->discrepancy;
        v.diagnostics = os.str();
        return v;
    }
    return solve_feasibility(build_lp(sys, opts), sys, opts);
}

namespace {

using Grouping = std::vector<std::vector<std::string>>;

// Validates that `groups` partitions `domain`; returns the group label of
// each domain element, groups ordered by first appearance in `domain`.
struct ResolvedGrouping {
    std::vector<std::string> labels;                  // new label list, in order
    std::map<std::string, std::string> label_of;      // old -> new
    bool all_singletons = true;
};

ResolvedGrouping resolve_grouping(const std::vector<std::string>& domain, const Grouping* groups,
                                  const std::string& what) {
    ResolvedGrouping r;
    if (!groups) {
        for (const auto& d : domain) {
            r.labels.push_back(d);
            r.label_of[d] = d;
        }
        return r;
    }
    std::map<std::string, std::size_t> group_of;
    for (std::size_t g = 0; g < groups->size(); ++g) {
        if ((*groups)[g].empty())
            throw std::invalid_argument("coarsen: empty group for " + what);
        for (const auto& member : (*groups)[g]) {
            if (std::find(domain.begin(), domain.end(), member) == domain.end())
                throw std::invalid_argument("coarsen: unknown member \"" + member + "\" for " + what);
            if (!group_of.emplace(member, g).second)
                throw std::invalid_argument("coarsen: \"" + member + "\" in two groups for " + what);
        }
    }
    if (group_of.size() != domain.size())
        throw std::invalid_argument("coarsen: groups do not cover " + what);

    std::vector<std::string> group_label(groups->size());
    for (std::size_t g = 0; g < groups->size(); ++g) {
        std::vector<std::string> members = (*groups)[g];
        std::sort(members.begin(), members.end(), [&](const auto& a, const auto& b) {
            return std::find(domain.begin(), domain.end(), a) <
                   std::find(domain.begin(), domain.end(), b);
        });
        group_label[g] = join(members, "+");
        if (members.size() > 1) r.all_singletons = false;
    }
    std::vector<bool> emitted(groups->size(), false);
    for (const auto& d : domain) {
        std::size_t g = group_of.at(d);
        r.label_of[d] = group_label[g];
        if (!emitted[g]) {
            emitted[g] = true;
            r.labels.push_back(group_label[g]);
        }
    }
    return r;
}

}  // namespace

SelectiveSystem coarsen(const SelectiveSystem& sys, const OutcomeGroupings& variable_groupings,
                        const LevelGroupings& factor_groupings, double tol) {
    require_valid(sys);

    SelectiveSystem out;
    std::vector<ResolvedGrouping> var_maps, level_maps;
    for (const auto& v : sys.variables) {
        auto it = variable_groupings.find(v.name);
        auto rg = resolve_grouping(v.outcomes, it == variable_groupings.end() ? nullptr : &it->second,
                                   "variable " + v.name);
        Variable nv;
        nv.name = v.name;
        nv.outcomes = rg.labels;
        if (rg.all_singletons) nv.numeric_values = v.numeric_values;
        out.variables.push_back(std::move(nv));
        var_maps.push_back(std::move(rg));
    }
    for (const auto& f : sys.factors) {
        auto it = factor_groupings.find(f.name);
        auto rg = resolve_grouping(f.levels, it == factor_groupings.end() ? nullptr : &it->second,
                                   "factor " + f.name);
        out.factors.push_back({f.name, rg.labels});
        level_maps.push_back(std::move(rg));
    }

    auto coarse_pmf = [&](const JointPmf& pmf) {
        JointPmf np;
        np.variables = pmf.variables;
        for (const auto& [key, p] : pmf.table) {
            std::vector<std::string> nk(key.size());
            for (std::size_t i = 0; i < key.size(); ++i) nk[i] = var_maps[i].label_of.at(key[i]);
            auto ins = np.table.emplace(std::move(nk), p);
            if (!ins.second) ins.first->second = ins.first->second + p;
        }
        return np;
    };

    for (const auto& t : sys.treatments) {
        Treatment nt;
        for (std::size_t i = 0; i < sys.factors.size(); ++i)
            nt[sys.factors[i].name] = level_maps[i].label_of.at(t.at(sys.factors[i].name));
        JointPmf np = coarse_pmf(sys.distributions.at(t));
        auto it = out.distributions.find(nt);
        if (it == out.distributions.end()) {
            out.treatments.push_back(nt);
            out.distributions.emplace(std::move(nt), std::move(np));
        } else {
            double worst = 0.0;
            for (const auto& [key, p] : np.table)
                worst = std::max(worst, std::abs(p.value - it->second.at(key).value));
            for (const auto& [key, p] : it->second.table)
                worst = std::max(worst, std::abs(p.value - np.at(key).value));
            if (worst > tol)
                throw std::invalid_argument(
                    "coarsening ill-defined: treatments merging into " + treatment_label(nt) +
                    " have coarsened pmfs differing by " + std::to_string(worst) +
                    " (marginal selectivity fails at the coarse level)");
        }
    }
    std::sort(out.treatments.begin(), out.treatments.end());
    return out;
}

}  // namespace selinf::lft
