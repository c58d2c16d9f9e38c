#include "selinf/chains.hpp"
#include "selinf/fixtures.hpp"
#include "selinf/metrics.hpp"

#include "support/oracles.hpp"

#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <stdexcept>

using namespace selinf;
using chains::Chain;

namespace {

FactorPoint pt(const char* f, const char* l) { return FactorPoint{f, l}; }

// Three binary factors, all treatments except (2,2,2); tables concentrated on
// one outcome tuple so distance tests stay trivial.
SelectiveSystem crossed_minus_one() {
    SelectiveSystem sys;
    sys.factors = {{"alpha", {"1", "2"}}, {"beta", {"1", "2"}}, {"gamma", {"1", "2"}}};
    sys.variables = {{"A", {"1", "2"}, std::vector<double>{1.0, 2.0}},
                     {"B", {"1", "2"}, std::vector<double>{1.0, 2.0}},
                     {"C", {"1", "2"}, std::vector<double>{1.0, 2.0}}};
    for (const std::string& a : {"1", "2"})
        for (const std::string& b : {"1", "2"})
            for (const std::string& g : {"1", "2"}) {
                if (a == "2" && b == "2" && g == "2") continue;
                Treatment t{{"alpha", a}, {"beta", b}, {"gamma", g}};
                sys.treatments.push_back(t);
                JointPmf pmf;
                pmf.variables = {"A", "B", "C"};
                pmf.table[{"1", "1", "1"}] = Prob::from_double(1.0);
                sys.distributions[t] = pmf;
            }
    return sys;
}

SelectiveSystem two_factor_three_treatments() {
    SelectiveSystem sys = fixtures::example10();
    Treatment gone{{"alpha", "2"}, {"beta", "2"}};
    sys.treatments.erase(std::remove(sys.treatments.begin(), sys.treatments.end(), gone),
                         sys.treatments.end());
    sys.distributions.erase(gone);
    return sys;
}

}  // namespace

TEST_CASE("chain validity is cyclic-adjacency over factors") {
    CHECK_FALSE(chains::valid_chain(Chain{{pt("alpha", "1"), pt("beta", "1")}}));
    CHECK(chains::valid_chain(
        Chain{{pt("alpha", "1"), pt("beta", "1"), pt("alpha", "2"), pt("beta", "2")}}));
    CHECK_FALSE(chains::valid_chain(Chain{{pt("alpha", "1"), pt("alpha", "2"), pt("beta", "1")}}));
    // closing pair shares a factor
    CHECK_FALSE(chains::valid_chain(Chain{{pt("beta", "1"), pt("alpha", "1"), pt("beta", "2")}}));
    CHECK(chains::valid_chain(Chain{{pt("alpha", "1"), pt("beta", "1"), pt("gamma", "1")}}));
    CHECK(chain_label(Chain{{pt("alpha", "1"), pt("beta", "2")}}) == "alpha=1 beta=2");
}

TEST_CASE("treatment realizability checks every cyclic pair") {
    SelectiveSystem crossed = fixtures::example10();
    CHECK(chains::is_treatment_realizable(
        Chain{{pt("alpha", "1"), pt("beta", "2"), pt("alpha", "2"), pt("beta", "1")}},
        crossed.treatments));

    SelectiveSystem ex8 = fixtures::example8();
    CHECK(chains::is_treatment_realizable(
        Chain{{pt("alpha", "1"), pt("beta", "2"), pt("gamma", "1")}}, ex8.treatments));

    SelectiveSystem partial = two_factor_three_treatments();
    // adjacent pairs all covered, closing pair (beta=2, alpha=2) is not
    CHECK_FALSE(chains::is_treatment_realizable(
        Chain{{pt("alpha", "2"), pt("beta", "1"), pt("alpha", "1"), pt("beta", "2")}},
        partial.treatments));
}

TEST_CASE("irreducibility") {
    SelectiveSystem crossed = fixtures::example10();
    CHECK(chains::is_irreducible(
        Chain{{pt("alpha", "1"), pt("beta", "1"), pt("alpha", "2"), pt("beta", "2")}},
        crossed.treatments));
    // repeated factor point
    CHECK_FALSE(chains::is_irreducible(
        Chain{{pt("alpha", "1"), pt("beta", "1"), pt("alpha", "2"), pt("beta", "1")}},
        crossed.treatments));

    SelectiveSystem ex8 = fixtures::example8();
    // the triad sits inside the treatment (1,2,1)
    CHECK_FALSE(chains::is_irreducible(
        Chain{{pt("alpha", "1"), pt("beta", "2"), pt("gamma", "1")}}, ex8.treatments));

    SelectiveSystem minus = crossed_minus_one();
    CHECK(chains::is_irreducible(
        Chain{{pt("alpha", "2"), pt("beta", "2"), pt("gamma", "2")}}, minus.treatments));
}

TEST_CASE("chain enumeration") {
    SUBCASE("crossed 2x2 collapses to one canonical tetrad") {
        auto result = chains::enumerate_irreducible_chains(fixtures::example10());
        REQUIRE(result.chains.size() == 1);
        CHECK_FALSE(result.truncated);
        CHECK(result.chains[0] ==
              Chain{{pt("alpha", "1"), pt("beta", "1"), pt("alpha", "2"), pt("beta", "2")}});
    }

    SUBCASE("crossed 2x2x2 gives one tetrad per factor pair") {
        SelectiveSystem sys = crossed_minus_one();
        Treatment t{{"alpha", "2"}, {"beta", "2"}, {"gamma", "2"}};
        sys.treatments.push_back(t);
        JointPmf pmf;
        pmf.variables = {"A", "B", "C"};
        pmf.table[{"1", "1", "1"}] = Prob::from_double(1.0);
        sys.distributions[t] = pmf;
        auto result = chains::enumerate_irreducible_chains(sys);
        REQUIRE(result.chains.size() == 3);
        for (const auto& c : result.chains) CHECK(c.points.size() == 4);
        CHECK(result.chains[0].points[0].factor == "alpha");
        CHECK(result.chains[0].points[1].factor == "beta");
        CHECK(result.chains[1].points[1].factor == "gamma");
        CHECK(result.chains[2].points[0].factor == "beta");
    }

    SUBCASE("a single treatment admits no irreducible chain") {
        SelectiveSystem sys;
        sys.factors = {{"alpha", {"1", "2"}}, {"beta", {"1", "2"}}, {"gamma", {"1", "2"}}};
        sys.treatments = {Treatment{{"alpha", "1"}, {"beta", "1"}, {"gamma", "1"}}};
        auto result = chains::enumerate_irreducible_chains(sys);
        CHECK(result.chains.empty());
        CHECK_FALSE(result.truncated);
    }

    SUBCASE("max_len below 4 truncates a crossed design") {
        auto result = chains::enumerate_irreducible_chains(fixtures::example10(), 3);
        CHECK(result.chains.empty());
        CHECK(result.truncated);
        CHECK_THROWS_AS(chains::enumerate_irreducible_chains(fixtures::example10(), 2),
                        std::invalid_argument);
    }

    SUBCASE("missing treatment wakes the triad and keeps the tetrads") {
        auto result = chains::enumerate_irreducible_chains(crossed_minus_one());
        REQUIRE(result.chains.size() == 4);
        CHECK_FALSE(result.truncated);
        std::size_t triads = 0;
        for (const auto& c : result.chains)
            if (c.points.size() == 3) {
                ++triads;
                CHECK(c == Chain{{pt("alpha", "2"), pt("beta", "2"), pt("gamma", "2")}});
            } else {
                CHECK(c.points.size() == 4);
            }
        CHECK(triads == 1);
    }

    SUBCASE("two-factor design missing one treatment has no cycle at all") {
        auto result = chains::enumerate_irreducible_chains(two_factor_three_treatments());
        CHECK(result.chains.empty());
        CHECK_FALSE(result.truncated);
    }
}

TEST_CASE("pairwise metric values") {
    auto m1 = metrics::MetricSpec::minkowski(1.0);

    SUBCASE("transformed crossed pair") {
        SelectiveSystem sys = fixtures::example9_transformed();
        double v = chains::pairwise_value(sys, m1, pt("alpha", "1"), pt("beta", "2"));
        CHECK(std::abs(v - 0.82) < 1e-12);
        CHECK(chains::pairwise_value(sys, m1, pt("alpha", "1"), pt("beta", "1")) == 0.0);
    }

    SUBCASE("classification value on the median-split system") {
        SelectiveSystem sys = fixtures::example12();
        auto dc = metrics::MetricSpec::classification({"2"});
        double v = chains::pairwise_value(sys, dc, pt("alpha", "1"), pt("beta", "1"));
        CHECK(v == doctest::Approx(0.428217).epsilon(1e-5));
    }

    SUBCASE("same-factor pairs are rejected") {
        SelectiveSystem sys = fixtures::example10();
        CHECK_THROWS_AS(chains::pairwise_value(sys, m1, pt("alpha", "1"), pt("alpha", "2")),
                        std::invalid_argument);
    }

    SUBCASE("uncovered pairs are rejected") {
        SelectiveSystem sys = fixtures::example8();
        CHECK_THROWS_AS(chains::pairwise_value(sys, m1, pt("alpha", "2"), pt("beta", "2")),
                        std::invalid_argument);
    }

    SUBCASE("covering treatments must agree") {
        SelectiveSystem sys = fixtures::example8();
        CHECK_THROWS_WITH_AS(
            chains::pairwise_value(sys, m1, pt("alpha", "1"), pt("gamma", "1")),
            doctest::Contains("marginal selectivity violated for pair"), std::runtime_error);
    }
}

TEST_CASE("pair marginals keep the requested slot order") {
    SelectiveSystem sys = fixtures::example8();
    Treatment t{{"alpha", "2"}, {"beta", "1"}, {"gamma", "4"}};
    auto pair = chains::pair_marginal(sys, t, pt("gamma", "4"), pt("alpha", "2"));
    CHECK(pair.outcomes_a == sys.variables[2].outcomes);
    CHECK(pair.prob("0", "0") == doctest::Approx(0.6));
    CHECK(pair.prob("0", "1") == doctest::Approx(0.3));
    CHECK(pair.prob("1", "0") == doctest::Approx(0.0));
    CHECK(pair.prob("1", "1") == doctest::Approx(0.1));
}

TEST_CASE("distance test") {
    auto m1 = metrics::MetricSpec::minkowski(1.0);

    SUBCASE("relabelled system fails, the original passes") {
        CHECK(chains::distance_test(fixtures::example9(), m1).empty());

        auto violations = chains::distance_test(fixtures::example9_transformed(), m1);
        REQUIRE(violations.size() == 2);
        const auto& v = violations[0];
        CHECK(v.chain == Chain{{pt("alpha", "1"), pt("beta", "1"), pt("alpha", "2"),
                                pt("beta", "2")}});
        CHECK(std::abs(v.lhs - 0.82) < 1e-12);
        CHECK(std::abs(v.rhs) < 1e-12);
    }

    SUBCASE("median-split system fails the classification chain") {
        auto dc = metrics::MetricSpec::classification({"2"});
        auto violations = chains::distance_test(fixtures::example12(), dc);
        REQUIRE(violations.size() == 2);
        for (const auto& v : violations) {
            CHECK(v.lhs == doctest::Approx(0.428217).epsilon(1e-5));
            CHECK(v.rhs == doctest::Approx(0.409508).epsilon(1e-4));
            CHECK(v.lhs > v.rhs);
        }
    }

    SUBCASE("feasible system passes every metric") {
        SelectiveSystem sys = fixtures::example10();
        CHECK(chains::distance_test(sys, m1).empty());
        CHECK(chains::distance_test(sys, metrics::MetricSpec::classification({"2"})).empty());
        CHECK(chains::distance_test(sys, metrics::MetricSpec::cond_entropy()).empty());
        CHECK(chains::distance_test(sys, metrics::MetricSpec::norm_cond_entropy()).empty());
        CHECK(chains::distance_test(sys, metrics::MetricSpec::bounded(m1)).empty());
        CHECK(chains::distance_test(sys, metrics::MetricSpec::minkowski(2.0)).empty());
    }

    SUBCASE("agrees with the exhaustive oracle on the worked systems") {
        CHECK(testsupport::exhaustive_chain_violation(fixtures::example9_transformed(), m1, 6));
        CHECK_FALSE(testsupport::exhaustive_chain_violation(fixtures::example9(), m1, 6));
        auto dc = metrics::MetricSpec::classification({"2"});
        CHECK(testsupport::exhaustive_chain_violation(fixtures::example12(), dc, 6));
        CHECK_FALSE(testsupport::exhaustive_chain_violation(fixtures::example10(), dc, 6));
    }
}
