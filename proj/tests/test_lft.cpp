#include "selinf/fixtures.hpp"
#include "selinf/lft.hpp"
#include "selinf/model.hpp"

#include "support/oracles.hpp"

#include <doctest.h>

#include <algorithm>
#include <stdexcept>

using namespace selinf;
using lft::Mode;
using lft::Options;
using lft::Status;

namespace {

Options rational_mode() {
    Options o;
    o.mode = Mode::Rational;
    return o;
}

}  // namespace

TEST_CASE("build_lp sizes follow the counting formulas") {
    SUBCASE("two binary factors") {
        auto lp = lft::build_lp(fixtures::example10());
        CHECK(lp.num_vars == 16);
        CHECK(lp.rows.size() == 16);
        CHECK(lp.row_keys.size() == 16);
        CHECK(lp.points.size() == 4);
    }
    SUBCASE("three factors with 2, 3, 4 levels") {
        auto lp = lft::build_lp(fixtures::example8());
        CHECK(lp.num_vars == 512);
        CHECK(lp.rows.size() == 40);
    }
}

TEST_CASE("a single factor-point program reproduces its own pmf") {
    SelectiveSystem sys;
    sys.factors = {{"alpha", {"1"}}};
    sys.variables = {{"A", {"0", "1", "2"}, {}}};
    Treatment t{{"alpha", "1"}};
    sys.treatments = {t};
    JointPmf pmf;
    pmf.variables = {"A"};
    pmf.table[{"0"}] = Prob::from_text("0.2");
    pmf.table[{"1"}] = Prob::from_text("0.3");
    pmf.table[{"2"}] = Prob::from_text("0.5");
    sys.distributions[t] = pmf;

    auto lp = lft::build_lp(sys);
    CHECK(lp.num_vars == 3);
    REQUIRE(lp.rows.size() == 3);
    for (std::size_t r = 0; r < 3; ++r) CHECK(lp.rows[r].size() == 1);

    auto verdict = lft::lft(sys);
    CHECK(verdict.feasible());
    for (const auto& [key, q] : verdict.witness)
        CHECK(q == doctest::Approx(pmf.at(key).value).epsilon(1e-9));
}

TEST_CASE("the feasible 2x2 system solves in both modes") {
    SelectiveSystem sys = fixtures::example10();

    auto f = lft::lft(sys);
    CHECK(f.status == Status::Feasible);
    CHECK(f.max_residual <= 1e-8);
    CHECK(!f.witness.empty());

    auto r = lft::lft(sys, rational_mode());
    CHECK(r.status == Status::Feasible);
    CHECK(r.max_residual == 0.0);

    double sum = 0.0;
    for (const auto& [key, q] : r.witness) {
        CHECK(q >= 0.0);
        sum += q;
    }
    CHECK(sum == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("the infeasible 2x2 system is rejected in both modes") {
    SelectiveSystem sys = fixtures::example11();

    auto f = lft::lft(sys);
    CHECK(f.status == Status::Infeasible);
    CHECK(f.phase1_objective > 1e-4);

    auto r = lft::lft(sys, rational_mode());
    CHECK(r.status == Status::Infeasible);
}

TEST_CASE("margin-inconsistent equality rows are infeasible on their own") {
    SelectiveSystem sys = fixtures::example9();
    auto direct = lft::solve_feasibility(lft::build_lp(sys), sys);
    CHECK(direct.status == Status::Infeasible);

    auto front = lft::lft(sys);
    CHECK(front.status == Status::Infeasible);
    CHECK(front.diagnostics.find("marginal selectivity") != std::string::npos);
    CHECK(front.diagnostics.find("B") != std::string::npos);
}

TEST_CASE("the three-response margin violation short-circuits with its subset named") {
    auto verdict = lft::lft(fixtures::example8());
    CHECK(verdict.status == Status::Infeasible);
    CHECK(verdict.diagnostics.find("marginal selectivity") != std::string::npos);
    CHECK(verdict.diagnostics.find("A,C") != std::string::npos);
}

TEST_CASE("a product system is feasible") {
    auto verdict = lft::lft(fixtures::independent(), rational_mode());
    CHECK(verdict.status == Status::Feasible);
    CHECK(verdict.max_residual == 0.0);
}

TEST_CASE("verdicts agree with the Clauser-Horne oracle on random 2x2 systems") {
    int infeasible_seen = 0;
    for (std::uint64_t trial = 0; trial < 100; ++trial) {
        SelectiveSystem sys =
            montecarlo::random_system_2x2(montecarlo::subseed(2024, trial));
        // The raw draws carry double-rounded cells whose margins agree only to
        // an ulp; exact mode rightly rejects those. Rebuild each table from
        // one exact rational so the 0.5 margins hold in exact arithmetic too.
        for (auto& [t, pmf] : sys.distributions) {
            Rational q = rational_from_double(pmf.table.at({"1", "1"}).value);
            Rational rest = Rational(1, 2) - q;
            pmf.table[{"1", "1"}] = Prob::from_rational(q);
            pmf.table[{"1", "2"}] = Prob::from_rational(rest);
            pmf.table[{"2", "1"}] = Prob::from_rational(rest);
            pmf.table[{"2", "2"}] = Prob::from_rational(q);
        }
        bool oracle = testsupport::ch_feasible_2x2(sys);
        auto f = lft::lft(sys);
        auto r = lft::lft(sys, rational_mode());
        CHECK(f.status == (oracle ? Status::Feasible : Status::Infeasible));
        CHECK(r.status == f.status);
        if (!oracle) ++infeasible_seen;
    }
    CHECK(infeasible_seen > 10);  // the draw mixes both verdicts
}

TEST_CASE("deterministic corner systems match the oracle") {
    auto correlated = [](const char* c00, const char* c01, const char* c10, const char* c11) {
        return std::vector<std::string>{c00, c01, c10, c11};
    };

    SUBCASE("perfectly aligned treatments are feasible") {
        SelectiveSystem sys = fixtures::example10();
        for (auto& [t, pmf] : sys.distributions) {
            pmf.table[{"1", "1"}] = Prob::from_text("0.5");
            pmf.table[{"1", "2"}] = Prob::from_text("0.0");
            pmf.table[{"2", "1"}] = Prob::from_text("0.0");
            pmf.table[{"2", "2"}] = Prob::from_text("0.5");
        }
        CHECK(testsupport::ch_feasible_2x2(sys));
        CHECK(lft::lft(sys, rational_mode()).status == Status::Feasible);
    }

    SUBCASE("three aligned plus one anti-aligned treatment is infeasible") {
        SelectiveSystem sys = fixtures::example10();
        std::size_t i = 0;
        for (auto& [t, pmf] : sys.distributions) {
            auto cells = i++ < 3 ? correlated("0.5", "0.0", "0.0", "0.5")
                                 : correlated("0.0", "0.5", "0.5", "0.0");
            pmf.table[{"1", "1"}] = Prob::from_text(cells[0]);
            pmf.table[{"1", "2"}] = Prob::from_text(cells[1]);
            pmf.table[{"2", "1"}] = Prob::from_text(cells[2]);
            pmf.table[{"2", "2"}] = Prob::from_text(cells[3]);
        }
        CHECK(!testsupport::ch_feasible_2x2(sys));
        CHECK(lft::lft(sys, rational_mode()).status == Status::Infeasible);
        CHECK(lft::lft(sys).status == Status::Infeasible);
    }
}

TEST_CASE("the verdict does not depend on the variable enumeration order") {
    testsupport::Rng rng(99);
    for (std::uint64_t trial = 0; trial < 10; ++trial) {
        SelectiveSystem sys =
            montecarlo::random_system_2x2(montecarlo::subseed(77, trial));
        auto lp = lft::build_lp(sys);
        auto base = lft::solve_feasibility(lp, sys);

        std::vector<std::uint32_t> perm(lp.num_vars);
        for (std::size_t i = 0; i < perm.size(); ++i) perm[i] = static_cast<std::uint32_t>(i);
        for (std::size_t i = perm.size(); i > 1; --i)
            std::swap(perm[i - 1], perm[rng.index(i)]);
        auto shuffled = lp;
        for (auto& row : shuffled.rows)
            for (auto& col : row) col = perm[col];

        CHECK(lft::solve_feasibility(shuffled, sys).status == base.status);
    }
}

TEST_CASE("witnesses satisfy every row whenever the verdict is feasible") {
    for (std::uint64_t trial = 0; trial < 25; ++trial) {
        SelectiveSystem sys =
            montecarlo::random_system_2x2(montecarlo::subseed(31337, trial));
        auto verdict = lft::lft(sys);
        if (verdict.status != Status::Feasible) continue;
        CHECK(verdict.max_residual <= 1e-8);
        for (const auto& [key, q] : verdict.witness) CHECK(q >= -1e-8);
    }
}

TEST_CASE("coarsening groups outcomes and sums probabilities") {
    testsupport::Rng rng(5);
    SelectiveSystem sys = testsupport::joint_built_system(rng, 2, 2, 4);

    lft::OutcomeGroupings groups{{"A", {{"1", "2"}, {"3", "4"}}},
                                 {"B", {{"1", "2", "3"}, {"4"}}}};
    SelectiveSystem coarse = lft::coarsen(sys, groups, {});
    CHECK(coarse.variables[0].outcomes.size() == 2);
    CHECK(coarse.variables[1].outcomes.size() == 2);

    const Treatment& t = sys.treatments.front();
    const JointPmf& fine = sys.distributions.at(t);
    const JointPmf& grouped = coarse.distributions.at(t);
    double direct = 0.0;
    for (const auto& [key, p] : fine.table)
        if ((key[0] == "1" || key[0] == "2") && key[1] != "4") direct += p.value;
    CHECK(grouped.at({coarse.variables[0].outcomes[0], coarse.variables[1].outcomes[0]}).value ==
          doctest::Approx(direct).epsilon(1e-12));

    SUBCASE("all-singleton grouping is the identity") {
        SelectiveSystem same = lft::coarsen(sys, {}, {});
        CHECK(same == sys);
    }

    SUBCASE("coarsening preserves feasibility") {
        CHECK(lft::lft(sys).feasible());
        CHECK(lft::lft(coarse).feasible());
    }
}

TEST_CASE("level groups merge treatments only when their tables agree") {
    testsupport::Rng rng(6);
    SelectiveSystem sys = testsupport::joint_built_system(rng, 2, 2, 2);

    SUBCASE("distinct tables refuse to merge") {
        CHECK_THROWS_AS(lft::coarsen(sys, {}, {{"alpha", {{"1", "2"}}}}),
                        std::invalid_argument);
    }

    SUBCASE("a duplicated level merges cleanly and stays feasible") {
        SelectiveSystem dup = sys;
        dup.factors[0].levels.push_back("1b");
        for (const auto& t : sys.treatments) {
            if (t.at("alpha") != "1") continue;
            Treatment nt = t;
            nt["alpha"] = "1b";
            dup.treatments.push_back(nt);
            dup.distributions[nt] = sys.distributions.at(t);
        }
        REQUIRE(validate_system(dup).empty());
        SelectiveSystem merged = lft::coarsen(dup, {}, {{"alpha", {{"1", "1b"}, {"2"}}}});
        CHECK(merged.treatments.size() == sys.treatments.size());
        CHECK(lft::lft(merged).feasible());
    }
}

TEST_CASE("oversized programs are refused with a coarsening hint") {
    SelectiveSystem sys = fixtures::example8();
    lft::Options opts;
    opts.q_var_cap = 100;
    try {
        lft::build_lp(sys, opts);
        FAIL("expected a size refusal");
    } catch (const std::length_error& e) {
        CHECK(std::string(e.what()).find("coarsen") != std::string::npos);
    }
}

TEST_CASE("iteration cap yields an undecided verdict") {
    lft::Options opts;
    opts.max_iterations = 1;
    auto verdict = lft::lft(fixtures::example10(), opts);
    CHECK(verdict.status == Status::Undecided);
}
