#pragma once

#include "selinf/model.hpp"

#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace selinf::metrics {

// Joint distribution of an ordered pair of variables.
struct PairDistribution {
    std::vector<std::string> outcomes_a;
    std::vector<std::string> outcomes_b;
    std::optional<std::vector<double>> numeric_a;
    std::optional<std::vector<double>> numeric_b;
    std::map<std::pair<std::string, std::string>, double> table;

    double prob(const std::string& a, const std::string& b) const;
    PairDistribution transpose() const;
};

void validate_pair(const PairDistribution& pair, double eps = kEpsProb);  // throws std::invalid_argument

enum class Kind {
    Minkowski,
    Classification,
    Separation,
    CondEntropy,
    NormCondEntropy,
    Power,
    Bounded,
    Sum,
    Max,
    Mixture,
    Flip,
};

// A metric expression tree. Leaf kinds read their own parameters; combinator
// kinds read `inner` (power/bounded/flip take one child, sum/max take two,
// mixture pairs `inner` with `weights`).
struct MetricSpec {
    Kind kind = Kind::Minkowski;
    double p = 1.0;                        // minkowski order, may be infinity
    double q = 1.0;                        // power exponent, in (0,1]
    std::vector<std::string> e_plus;       // classification: default designator
    std::map<std::string, std::vector<std::string>> e_plus_by_point;  // point label -> designator
    std::vector<std::pair<double, double>> v_pmf;  // separation: (value, probability)
    std::vector<double> weights;
    std::vector<MetricSpec> inner;

    static MetricSpec minkowski(double p);
    static MetricSpec classification(std::vector<std::string> e_plus,
                                     std::map<std::string, std::vector<std::string>> by_point = {});
    static MetricSpec separation(std::vector<std::pair<double, double>> v_pmf);
    static MetricSpec cond_entropy();
    static MetricSpec norm_cond_entropy();
    static MetricSpec power(double q, MetricSpec inner);
    static MetricSpec bounded(MetricSpec inner);
    static MetricSpec sum(MetricSpec a, MetricSpec b);
    static MetricSpec max(MetricSpec a, MetricSpec b);
    static MetricSpec mixture(std::vector<double> weights, std::vector<MetricSpec> inners);
    static MetricSpec flip(MetricSpec inner);

    std::string describe() const;
};

void validate_spec(const MetricSpec& spec);  // throws std::invalid_argument

double minkowski(const PairDistribution& pair, double p);
double classification(const PairDistribution& pair, const std::vector<std::string>& e_plus_a,
                      const std::vector<std::string>& e_plus_b);
double separation(const PairDistribution& pair, const std::vector<std::pair<double, double>>& v_pmf);
double cond_entropy(const PairDistribution& pair);       // bits
double norm_cond_entropy(const PairDistribution& pair);  // in [0,1]; 0 for degenerate pairs

// Point labels let classification designators vary per factor point; empty
// labels fall back to the default designator.
struct PointContext {
    std::string label_a;
    std::string label_b;
};

double evaluate(const MetricSpec& spec, const PairDistribution& pair, const PointContext& ctx = {});

}  // namespace selinf::metrics
