#include "selinf/quadtests.hpp"

#include "selinf/chains.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>

namespace selinf::quadtests {

namespace {

struct DegenerateVariable : std::runtime_error {
    using std::runtime_error::runtime_error;
};

}  // namespace

double correlation(const metrics::PairDistribution& pair) {
    if (!pair.numeric_a || !pair.numeric_b)
        throw std::invalid_argument("correlation: numeric embeddings required");
    auto value_a = [&](const std::string& o) {
        for (std::size_t i = 0; i < pair.outcomes_a.size(); ++i)
            if (pair.outcomes_a[i] == o) return (*pair.numeric_a)[i];
        throw std::invalid_argument("correlation: unknown outcome " + o);
    };
    auto value_b = [&](const std::string& o) {
        for (std::size_t i = 0; i < pair.outcomes_b.size(); ++i)
            if (pair.outcomes_b[i] == o) return (*pair.numeric_b)[i];
        throw std::invalid_argument("correlation: unknown outcome " + o);
    };
    double ea = 0, eb = 0, eaa = 0, ebb = 0, eab = 0;
    for (const auto& [key, p] : pair.table) {
        double a = value_a(key.first), b = value_b(key.second);
        ea += a * p;
        eb += b * p;
        eaa += a * a * p;
        ebb += b * b * p;
        eab += a * b * p;
    }
    double var_a = eaa - ea * ea;
    double var_b = ebb - eb * eb;
    if (var_a <= 0.0 || var_b <= 0.0) throw DegenerateVariable("degenerate variable: zero variance");
    return (eab - ea * eb) / std::sqrt(var_a * var_b);
}

double pairwise_correlation(const SelectiveSystem& sys, const FactorPoint& x, const FactorPoint& y,
                            double tol) {
    if (x.factor == y.factor)
        throw std::invalid_argument("pairwise_correlation: points of the same factor");
    std::vector<double> values;
    for (const auto& t : sys.treatments)
        if (treatment_contains(t, x) && treatment_contains(t, y))
            values.push_back(correlation(chains::pair_marginal(sys, t, x, y)));
    if (values.empty())
        throw std::invalid_argument("pairwise_correlation: pair {" + point_label(x) + "," +
                                    point_label(y) + "} is contained in no treatment");
    auto [lo, hi] = std::minmax_element(values.begin(), values.end());
    if (*hi - *lo > tol) {
        std::ostringstream os;
        os << "marginal selectivity violated for pair {" << point_label(x) << "," << point_label(y)
           << "}: correlations range " << *lo << " .. " << *hi;
        throw std::runtime_error(os.str());
    }
    double mean = 0.0;
    for (double v : values) mean += v;
    return mean / static_cast<double>(values.size());
}

CosphericityReport cosphericity_test(const SelectiveSystem& sys, double slack, double tol) {
    require_valid(sys);
    for (const auto& v : sys.variables)
        if (!v.numeric_values)
            throw std::invalid_argument("cosphericity_test: variable " + v.name +
                                        " has no numeric embedding");

    auto covered = [&](const FactorPoint& a, const FactorPoint& b) {
        for (const auto& t : sys.treatments)
            if (treatment_contains(t, a) && treatment_contains(t, b)) return true;
        return false;
    };

    CosphericityReport report;
    for (std::size_t i = 0; i < sys.factors.size(); ++i)
        for (std::size_t j = i + 1; j < sys.factors.size(); ++j) {
            std::vector<std::string> la = sys.factors[i].levels, lb = sys.factors[j].levels;
            std::sort(la.begin(), la.end());
            std::sort(lb.begin(), lb.end());
            for (std::size_t xi = 0; xi < la.size(); ++xi)
                for (std::size_t ui = xi + 1; ui < la.size(); ++ui)
                    for (std::size_t yi = 0; yi < lb.size(); ++yi)
                        for (std::size_t vi = yi + 1; vi < lb.size(); ++vi) {
                            FactorPoint x{sys.factors[i].name, la[xi]};
                            FactorPoint u{sys.factors[i].name, la[ui]};
                            FactorPoint y{sys.factors[j].name, lb[yi]};
                            FactorPoint v{sys.factors[j].name, lb[vi]};
                            if (!covered(x, y) || !covered(x, v) || !covered(u, y) ||
                                !covered(u, v))
                                continue;
                            double rxy, rxv, ruy, ruv;
                            try {
                                rxy = pairwise_correlation(sys, x, y, tol);
                                rxv = pairwise_correlation(sys, x, v, tol);
                                ruy = pairwise_correlation(sys, u, y, tol);
                                ruv = pairwise_correlation(sys, u, v, tol);
                            } catch (const DegenerateVariable& e) {
                                report.warnings.push_back(
                                    "skipped quadruple (" + point_label(x) + "," + point_label(u) +
                                    "," + point_label(y) + "," + point_label(v) + "): " + e.what());
                                continue;
                            }
                            auto clamp = [](double r) { return std::clamp(r, -1.0, 1.0); };
                            rxy = clamp(rxy);
                            rxv = clamp(rxv);
                            ruy = clamp(ruy);
                            ruv = clamp(ruv);
                            double lhs = std::abs(rxy * rxv - ruy * ruv);
                            double rhs = std::sqrt((1 - rxy * rxy) * (1 - rxv * rxv)) +
                                         std::sqrt((1 - ruy * ruy) * (1 - ruv * ruv));
                            if (lhs > rhs + slack)
                                report.violations.push_back(
                                    CosphericityViolation{x, u, y, v, rxy, rxv, ruy, ruv, lhs, rhs});
                        }
        }
    return report;
}

}  // namespace selinf::quadtests
