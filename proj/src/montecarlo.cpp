#include "selinf/montecarlo.hpp"

#include "selinf/fixtures.hpp"

#include <sstream>
#include <stdexcept>

namespace selinf::montecarlo {

std::string design_name(Design d) {
    switch (d) {
        case Design::TwoByTwo: return "2x2";
        case Design::ThreeByTwo: return "3x2";
        case Design::Independent: return "independent";
    }
    return "?";
}

Design design_from_name(const std::string& name) {
    if (name == "2x2") return Design::TwoByTwo;
    if (name == "3x2") return Design::ThreeByTwo;
    if (name == "independent") return Design::Independent;
    throw std::invalid_argument("unknown design \"" + name + "\" (expected 2x2, 3x2, independent)");
}

std::uint64_t mix64(std::uint64_t x) {
    x ^= x >> 30;
    x *= 0xBF58476D1CE4E5B9ull;
    x ^= x >> 27;
    x *= 0x94D049BB133111EBull;
    x ^= x >> 31;
    return x;
}

std::uint64_t subseed(std::uint64_t seed, std::uint64_t trial) {
    return mix64(seed + (trial + 1) * 0x9E3779B97F4A7C15ull);
}

namespace {

// splitmix64 stream over the subseed; uniform doubles from the top 53 bits.
struct Stream {
    std::uint64_t state;

    explicit Stream(std::uint64_t s) : state(s) {}

    std::uint64_t next_u64() {
        state += 0x9E3779B97F4A7C15ull;
        return mix64(state);
    }

    double next_unit() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }
};

std::vector<Factor> binary_factors(std::size_t n) {
    static const char* names[] = {"alpha", "beta", "gamma"};
    std::vector<Factor> out;
    for (std::size_t i = 0; i < n; ++i) out.push_back({names[i], {"1", "2"}});
    return out;
}

std::vector<Variable> binary_variables(std::size_t n) {
    static const char* names[] = {"A", "B", "C"};
    std::vector<Variable> out;
    for (std::size_t i = 0; i < n; ++i)
        out.push_back({names[i], {"1", "2"}, std::vector<double>{1.0, 2.0}});
    return out;
}

}  // namespace

SelectiveSystem random_system_2x2(std::uint64_t subseed) {
    Stream rng(subseed);
    SelectiveSystem sys;
    sys.factors = binary_factors(2);
    sys.variables = binary_variables(2);
    for (const std::string& a : {"1", "2"})
        for (const std::string& b : {"1", "2"}) {
            Treatment t{{"alpha", a}, {"beta", b}};
            sys.treatments.push_back(t);
            double p = 0.5 * rng.next_unit();
            sys.distributions[t] =
                dense_pmf(sys.variables, {Prob::from_double(p), Prob::from_double(0.5 - p),
                                          Prob::from_double(0.5 - p), Prob::from_double(p)});
        }
    return sys;
}

SelectiveSystem random_system_3x2(std::uint64_t subseed) {
    Stream rng(subseed);
    SelectiveSystem sys;
    sys.factors = binary_factors(3);
    sys.variables = binary_variables(3);
    for (const std::string& a : {"1", "2"})
        for (const std::string& b : {"1", "2"})
            for (const std::string& c : {"1", "2"}) {
                Treatment t{{"alpha", a}, {"beta", b}, {"gamma", c}};
                sys.treatments.push_back(t);
                double q = 0.25 * rng.next_unit();
                std::vector<Prob> cells;
                for (int mask = 0; mask < 8; ++mask) {
                    int twos = __builtin_popcount(static_cast<unsigned>(mask));
                    cells.push_back(Prob::from_double(twos % 2 == 0 ? q : 0.25 - q));
                }
                sys.distributions[t] = dense_pmf(sys.variables, cells);
            }
    return sys;
}

McReport estimate_feasible_fraction(Design design, std::size_t trials, std::uint64_t seed,
                                    const lft::Options& lft_options) {
    if (trials < 1) throw std::invalid_argument("estimate_feasible_fraction: trials must be >= 1");
    McReport report;
    report.trials = trials;
    report.seed = seed;
    for (std::size_t i = 0; i < trials; ++i) {
        SelectiveSystem sys;
        switch (design) {
            case Design::TwoByTwo: sys = random_system_2x2(subseed(seed, i)); break;
            case Design::ThreeByTwo: sys = random_system_3x2(subseed(seed, i)); break;
            case Design::Independent: sys = fixtures::independent(); break;
        }
        lft::Verdict v = lft::lft(sys, lft_options);
        if (v.status == lft::Status::Undecided)
            throw std::runtime_error("montecarlo: trial " + std::to_string(i) +
                                     " hit the iteration cap");
        if (v.feasible()) ++report.feasible_count;
    }
    report.fraction = static_cast<double>(report.feasible_count) / static_cast<double>(trials);
    std::ostringstream cfg;
    cfg << "design=" << design_name(design) << ";rng=splitmix64"
        << ";subseed=mix64(seed+(trial+1)*golden)"
        << ";mode=" << (lft_options.mode == lft::Mode::Rational ? "rational" : "float")
        << ";eps_lp=" << lft_options.eps_lp;
    report.config = cfg.str();
    return report;
}

}  // namespace selinf::montecarlo
