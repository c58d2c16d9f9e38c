#include "selinf/fixtures.hpp"

#include "selinf/gaussian.hpp"
#include "selinf/rational.hpp"

#include <functional>
#include <map>
#include <stdexcept>
#include <utility>

namespace selinf::fixtures {

namespace {

JointPmf pmf_from_text(const std::vector<Variable>& vars, const std::vector<std::string>& cells) {
    std::vector<Prob> probs;
    probs.reserve(cells.size());
    for (const auto& c : cells) probs.push_back(Prob::from_text(c));
    return dense_pmf(vars, probs);
}

SelectiveSystem two_by_two(const std::vector<std::vector<std::string>>& tables) {
    SelectiveSystem sys;
    sys.factors = {{"alpha", {"1", "2"}}, {"beta", {"1", "2"}}};
    sys.variables = {{"A", {"1", "2"}, std::vector<double>{1.0, 2.0}},
                     {"B", {"1", "2"}, std::vector<double>{1.0, 2.0}}};
    std::size_t k = 0;
    for (const std::string& a : {"1", "2"})
        for (const std::string& b : {"1", "2"}) {
            Treatment t{{"alpha", a}, {"beta", b}};
            sys.treatments.push_back(t);
            sys.distributions[t] = pmf_from_text(sys.variables, tables[k++]);
        }
    return sys;
}

}  // namespace

SelectiveSystem example8() {
    SelectiveSystem sys;
    sys.factors = {{"alpha", {"1", "2"}}, {"beta", {"1", "2", "3"}}, {"gamma", {"1", "2", "3", "4"}}};
    sys.variables = {{"A", {"0", "1"}, std::vector<double>{0.0, 1.0}},
                     {"B", {"0", "1"}, std::vector<double>{0.0, 1.0}},
                     {"C", {"0", "1"}, std::vector<double>{0.0, 1.0}}};
    auto add = [&](const char* a, const char* b, const char* g, std::vector<std::string> cells) {
        Treatment t{{"alpha", a}, {"beta", b}, {"gamma", g}};
        sys.treatments.push_back(t);
        sys.distributions[t] = pmf_from_text(sys.variables, std::move(cells));
    };
    add("1", "2", "1", {"0.2", "0.1", "0.1", "0.1", "0.1", "0.1", "0.1", "0.2"});
    add("1", "2", "3", {"0.0", "0.3", "0.2", "0.0", "0.1", "0.1", "0.1", "0.2"});
    add("2", "1", "4", {"0.3", "0.0", "0.3", "0.0", "0.3", "0.0", "0.0", "0.1"});
    add("1", "3", "1", {"0.4", "0.1", "0.0", "0.0", "0.0", "0.2", "0.1", "0.2"});
    add("2", "3", "2", {"0.2", "0.1", "0.2", "0.1", "0.3", "0.1", "0.0", "0.0"});
    return sys;
}

SelectiveSystem example9() {
    return two_by_two({{"0.1", "0.0", "0.0", "0.9"},
                       {"0.09", "0.01", "0.81", "0.09"},
                       {"0.0", "0.9", "0.1", "0.0"},
                       {"0.0", "0.9", "0.1", "0.0"}});
}

SelectiveSystem example9_transformed() {
    SelectiveSystem sys = example9();
    // A has outcomes {1,2} here; flip them at the point alpha=2.
    std::map<FactorPoint, std::map<std::string, std::string>> flips;
    flips[{"alpha", "2"}] = {{"1", "2"}, {"2", "1"}};
    return apply_point_transform(sys, flips);
}

SelectiveSystem example10() {
    return two_by_two({{"0.140", "0.360", "0.360", "0.140"},
                       {"0.198", "0.302", "0.302", "0.198"},
                       {"0.189", "0.311", "0.311", "0.189"},
                       {"0.460", "0.040", "0.040", "0.460"}});
}

SelectiveSystem example11() {
    return two_by_two({{"0.450", "0.050", "0.050", "0.450"},
                       {"0.105", "0.395", "0.395", "0.105"},
                       {"0.170", "0.330", "0.330", "0.170"},
                       {"0.110", "0.390", "0.390", "0.110"}});
}

SelectiveSystem example12() { return gaussian::example12_system(); }

SelectiveSystem example12_correlations() { return gaussian::example12_correlation_system(); }

SelectiveSystem tetrahedron() {
    SelectiveSystem sys;
    sys.factors = {{"alpha", {"1", "2"}},
                   {"beta", {"1", "2"}},
                   {"gamma", {"1", "2"}},
                   {"delta", {"1", "2"}}};
    sys.variables = {{"A", {"1", "2", "3"}, std::vector<double>{1.0, 2.0, 3.0}},
                     {"B", {"1", "2", "3"}, std::vector<double>{1.0, 2.0, 3.0}},
                     {"C", {"1", "2", "3"}, std::vector<double>{1.0, 2.0, 3.0}},
                     {"D", {"1", "2", "3"}, std::vector<double>{1.0, 2.0, 3.0}}};

    const std::vector<std::vector<std::string>> excluded = {
        {"1", "1", "2", "2"}, {"1", "1", "1", "1"}, {"1", "2", "2", "1"}, {"2", "1", "2", "1"}};
    const std::vector<std::string> special = {"1", "1", "2", "1"};

    for (const std::string& a : {"1", "2"})
        for (const std::string& b : {"1", "2"})
            for (const std::string& g : {"1", "2"})
                for (const std::string& d : {"1", "2"}) {
                    std::vector<std::string> levels = {a, b, g, d};
                    bool skip = false;
                    for (const auto& ex : excluded)
                        if (levels == ex) skip = true;
                    if (skip) continue;
                    Treatment t{{"alpha", a}, {"beta", b}, {"gamma", g}, {"delta", d}};
                    sys.treatments.push_back(t);
                    JointPmf pmf;
                    pmf.variables = {"A", "B", "C", "D"};
                    if (levels == special) {
                        pmf.table[{"1", "2", "3", "1"}] = Prob::from_text("1/2");
                        pmf.table[{"1", "2", "3", "2"}] = Prob::from_text("1/2");
                    } else {
                        pmf.table[{"1", "2", "3", "1"}] = Prob::from_text("1/3");
                        pmf.table[{"1", "2", "3", "2"}] = Prob::from_text("1/3");
                        pmf.table[{"1", "2", "3", "3"}] = Prob::from_text("1/3");
                    }
                    sys.distributions[t] = pmf;
                }
    return sys;
}

SelectiveSystem independent() {
    SelectiveSystem sys;
    sys.factors = {{"alpha", {"1", "2"}}, {"beta", {"1", "2"}}};
    sys.variables = {{"A", {"1", "2"}, std::vector<double>{1.0, 2.0}},
                     {"B", {"1", "2"}, std::vector<double>{1.0, 2.0}}};
    auto margin_a = [](const std::string& lvl) { return lvl == "1" ? Rational(3, 10) : Rational(3, 5); };
    auto margin_b = [](const std::string& lvl) { return lvl == "1" ? Rational(1, 5) : Rational(7, 10); };
    for (const std::string& a : {"1", "2"})
        for (const std::string& b : {"1", "2"}) {
            Treatment t{{"alpha", a}, {"beta", b}};
            sys.treatments.push_back(t);
            Rational pa = margin_a(a), pb = margin_b(b);
            sys.distributions[t] = dense_pmf(
                sys.variables, {Prob::from_rational(pa * pb), Prob::from_rational(pa * (1 - pb)),
                                Prob::from_rational((1 - pa) * pb),
                                Prob::from_rational((1 - pa) * (1 - pb))});
        }
    return sys;
}

namespace {

const std::map<std::string, std::function<SelectiveSystem()>>& registry() {
    static const std::map<std::string, std::function<SelectiveSystem()>> reg = {
        {"example8", example8},
        {"example9", example9},
        {"example9t", example9_transformed},
        {"example10", example10},
        {"example11", example11},
        {"example12", example12},
        {"example12rho", example12_correlations},
        {"tetrahedron", tetrahedron},
        {"independent", independent},
    };
    return reg;
}

}  // namespace

std::vector<std::string> fixture_names() {
    std::vector<std::string> names;
    for (const auto& [name, fn] : registry()) names.push_back(name);
    return names;
}

SelectiveSystem fixture_by_name(const std::string& name) {
    auto it = registry().find(name);
    if (it == registry().end()) {
        std::string msg = "unknown fixture \"" + name + "\"; known fixtures:";
        for (const auto& n : fixture_names()) msg += " " + n;
        throw std::invalid_argument(msg);
    }
    return it->second();
}

}  // namespace selinf::fixtures
