#pragma once

#include "selinf/rational.hpp"

#include <compare>
#include <cstddef>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

namespace selinf {

inline constexpr double kEpsProb = 1e-9;

// A probability value. `exact` is carried when the source was exact text
// (decimal or fraction) and survives sums, so downstream checks can report
// exact discrepancies; plain doubles never pretend to be exact. `text` keeps
// the source spelling for verbatim re-serialization and does not take part
// in equality.
struct Prob {
    double value = 0.0;
    std::optional<Rational> exact;
    std::optional<std::string> text;

    static Prob from_double(double v) { return Prob{v, std::nullopt, std::nullopt}; }
    static Prob from_rational(const Rational& r) { return Prob{to_double(r), r, std::nullopt}; }
    static Prob from_text(const std::string& text);

    bool operator==(const Prob& o) const { return value == o.value && exact == o.exact; }
};

Prob operator+(const Prob& a, const Prob& b);

struct FactorPoint {
    std::string factor;
    std::string level;
    auto operator<=>(const FactorPoint&) const = default;
};

std::string point_label(const FactorPoint& p);  // "alpha=1"

struct Factor {
    std::string name;
    std::vector<std::string> levels;

    bool operator==(const Factor&) const = default;
};

struct Variable {
    std::string name;
    std::vector<std::string> outcomes;
    std::optional<std::vector<double>> numeric_values;

    bool operator==(const Variable&) const = default;
};

// One entry per factor in scope: factor name -> level label.
using Treatment = std::map<std::string, std::string>;

std::string treatment_label(const Treatment& t);  // "alpha=1;beta=2"

struct JointPmf {
    std::vector<std::string> variables;                // slot order
    std::map<std::vector<std::string>, Prob> table;    // outcome tuple -> probability; absent = 0

    const Prob& at(const std::vector<std::string>& key) const;

    bool operator==(const JointPmf&) const = default;
};

// variable name -> set of influencing factors (possibly empty)
using Diagram = std::map<std::string, std::set<std::string>>;

// Bijective form: variable i is paired with factor i.
struct SelectiveSystem {
    std::vector<Factor> factors;
    std::vector<Variable> variables;
    std::vector<Treatment> treatments;
    std::map<Treatment, JointPmf> distributions;

    bool operator==(const SelectiveSystem&) const = default;
};

struct ValidationError {
    std::string where;
    std::string message;
};

struct MsViolation {
    std::vector<std::string> variables;
    Treatment t1, t2;
    JointPmf m1, m2;
    double discrepancy = 0.0;
};

struct MarginalSelectivityReport {
    bool satisfied = true;
    double worst_discrepancy = 0.0;
    std::vector<MsViolation> violations;
    bool capped = false;
};

// Returns all problems found; empty means the system is well formed.
std::vector<ValidationError> validate_system(const SelectiveSystem& sys, double eps_prob = kEpsProb);

// Throws std::invalid_argument listing every validation error.
void require_valid(const SelectiveSystem& sys, double eps_prob = kEpsProb);

// Rewrites an arbitrary diagram into bijective form: one compound factor per
// variable, whose points are the distinct subtreatments over the variable's
// influencing factors seen in `treatments` (a single dummy point when that
// set is empty). Distribution tables are carried over unchanged.
SelectiveSystem canonical_rearrangement(const std::vector<Factor>& factors,
                                        const std::vector<Variable>& variables,
                                        const Diagram& diagram,
                                        const std::vector<Treatment>& treatments,
                                        const std::map<Treatment, JointPmf>& distributions);

JointPmf marginal(const JointPmf& pmf, const std::vector<std::string>& subset);

MarginalSelectivityReport check_marginal_selectivity(const SelectiveSystem& sys,
                                                     double tol = kEpsProb,
                                                     std::size_t max_subset_size = 0);

// Applies per-factor-point outcome permutations: at each treatment, variable i
// is relabeled through the map attached to the factor-i point that treatment
// selects (identity when absent). Each map must permute the variable's outcomes.
SelectiveSystem apply_point_transform(
    const SelectiveSystem& sys,
    const std::map<FactorPoint, std::map<std::string, std::string>>& relabel);

// ---- shared helpers ----

int find_factor(const SelectiveSystem& sys, const std::string& name);
int find_variable(const SelectiveSystem& sys, const std::string& name);

bool treatment_contains(const Treatment& t, const FactorPoint& p);

std::vector<Treatment> treatments_containing(const SelectiveSystem& sys,
                                             const std::vector<FactorPoint>& points);

std::vector<FactorPoint> all_factor_points(const SelectiveSystem& sys);

// Odometer over a mixed-radix tuple space, lowest index slowest
// (lexicographic order over the radix digits).
struct Odometer {
    explicit Odometer(std::vector<std::size_t> radices);
    bool done() const { return done_; }
    void next();
    const std::vector<std::size_t>& digits() const { return digits_; }
    std::size_t count() const;  // product of radices

  private:
    std::vector<std::size_t> radices_;
    std::vector<std::size_t> digits_;
    bool done_ = false;
};

// Dense table in odometer order over the variables' outcome spaces.
JointPmf dense_pmf(const std::vector<Variable>& variables, const std::vector<Prob>& probs);

Treatment make_treatment(const std::vector<Factor>& factors,
                         const std::vector<std::string>& levels);

}  // namespace selinf
