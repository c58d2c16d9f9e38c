#include "selinf/gaussian.hpp"

#include "selinf/rational.hpp"

#include <cmath>
#include <stdexcept>

namespace selinf::gaussian {

BvnSplitTable bvn_median_split(double rho) {
    if (!(std::abs(rho) < 1.0))
        throw std::invalid_argument("bvn_median_split: |rho| must be < 1");
    BvnSplitTable t;
    t.rho = rho;
    const double pi = 3.14159265358979323846;
    double same = 0.25 + std::asin(rho) / (2.0 * pi);
    double diff = 0.5 - same;  // keeps the margins at exactly 0.5
    t.p[0][0] = same;
    t.p[0][1] = diff;
    t.p[1][0] = diff;
    t.p[1][1] = same;
    return t;
}

namespace {

SelectiveSystem two_factor_skeleton() {
    SelectiveSystem sys;
    sys.factors = {{"alpha", {"1", "2"}}, {"beta", {"1", "2"}}};
    sys.variables = {{"A", {"1", "2"}, std::vector<double>{1.0, 2.0}},
                     {"B", {"1", "2"}, std::vector<double>{1.0, 2.0}}};
    for (const std::string& a : {"1", "2"})
        for (const std::string& b : {"1", "2"})
            sys.treatments.push_back({{"alpha", a}, {"beta", b}});
    return sys;
}

constexpr double kRho[2][2] = {{-0.9, 0.9}, {0.9, -0.1}};

}  // namespace

SelectiveSystem example12_system() {
    SelectiveSystem sys = two_factor_skeleton();
    for (const Treatment& t : sys.treatments) {
        int i = t.at("alpha") == "1" ? 0 : 1;
        int j = t.at("beta") == "1" ? 0 : 1;
        BvnSplitTable tab = bvn_median_split(kRho[i][j]);
        sys.distributions[t] =
            dense_pmf(sys.variables, {Prob::from_double(tab.p[0][0]), Prob::from_double(tab.p[0][1]),
                                      Prob::from_double(tab.p[1][0]), Prob::from_double(tab.p[1][1])});
    }
    return sys;
}

SelectiveSystem example12_correlation_system() {
    SelectiveSystem sys = two_factor_skeleton();
    for (const Treatment& t : sys.treatments) {
        int i = t.at("alpha") == "1" ? 0 : 1;
        int j = t.at("beta") == "1" ? 0 : 1;
        Rational rho = rational_from_double(kRho[i][j]);
        Rational same = (1 + rho) / 4;
        Rational diff = (1 - rho) / 4;
        sys.distributions[t] =
            dense_pmf(sys.variables, {Prob::from_rational(same), Prob::from_rational(diff),
                                      Prob::from_rational(diff), Prob::from_rational(same)});
    }
    return sys;
}

}  // namespace selinf::gaussian
