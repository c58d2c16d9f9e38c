#include "selinf/chains.hpp"

#include <algorithm>
#include <map>
#include <set>
#include <sstream>
#include <stdexcept>

namespace selinf::chains {

namespace {

bool point_in_treatment(const Treatment& t, const FactorPoint& p) {
    auto it = t.find(p.factor);
    return it != t.end() && it->second == p.level;
}

bool pair_covered(const std::vector<Treatment>& treatments, const FactorPoint& a,
                  const FactorPoint& b) {
    for (const auto& t : treatments)
        if (point_in_treatment(t, a) && point_in_treatment(t, b)) return true;
    return false;
}

bool triple_covered(const std::vector<Treatment>& treatments, const FactorPoint& a,
                    const FactorPoint& b, const FactorPoint& c) {
    for (const auto& t : treatments)
        if (point_in_treatment(t, a) && point_in_treatment(t, b) && point_in_treatment(t, c))
            return true;
    return false;
}

}  // namespace

std::string chain_label(const Chain& chain) {
    std::ostringstream os;
    for (std::size_t i = 0; i < chain.points.size(); ++i)
        os << (i ? " " : "") << point_label(chain.points[i]);
    return os.str();
}

bool valid_chain(const Chain& chain) {
    std::size_t l = chain.points.size();
    if (l < 3) return false;
    for (std::size_t i = 0; i < l; ++i)
        if (chain.points[i].factor == chain.points[(i + 1) % l].factor) return false;
    return true;
}

bool is_treatment_realizable(const Chain& chain, const std::vector<Treatment>& treatments) {
    std::size_t l = chain.points.size();
    for (std::size_t i = 0; i < l; ++i)
        if (!pair_covered(treatments, chain.points[i], chain.points[(i + 1) % l])) return false;
    return true;
}

bool is_irreducible(const Chain& chain, const std::vector<Treatment>& treatments) {
    std::size_t l = chain.points.size();
    std::set<FactorPoint> seen(chain.points.begin(), chain.points.end());
    if (seen.size() != l) return false;
    if (l == 3) return !triple_covered(treatments, chain.points[0], chain.points[1], chain.points[2]);
    for (std::size_t i = 0; i < l; ++i)
        for (std::size_t j = i + 1; j < l; ++j) {
            bool adjacent = (j == i + 1) || (i == 0 && j == l - 1);
            if (!adjacent && pair_covered(treatments, chain.points[i], chain.points[j]))
                return false;
        }
    return true;
}

bool completely_crossed(const SelectiveSystem& sys) {
    std::size_t expected = 1;
    for (const auto& f : sys.factors) expected *= f.levels.size();
    if (sys.treatments.size() != expected) return false;
    std::set<Treatment> present(sys.treatments.begin(), sys.treatments.end());
    std::vector<std::size_t> radices;
    for (const auto& f : sys.factors) radices.push_back(f.levels.size());
    for (Odometer od(radices); !od.done(); od.next()) {
        Treatment t;
        for (std::size_t i = 0; i < sys.factors.size(); ++i)
            t[sys.factors[i].name] = sys.factors[i].levels[od.digits()[i]];
        if (!present.count(t)) return false;
    }
    return true;
}

namespace {

struct Enumerator {
    const std::vector<Treatment>& treatments;
    std::vector<FactorPoint> pts;
    std::vector<std::vector<bool>> co;
    std::size_t max_len;
    EnumerationResult result;

    Enumerator(const SelectiveSystem& sys, std::size_t cap)
        : treatments(sys.treatments), max_len(cap) {
        pts = all_factor_points(sys);
        std::sort(pts.begin(), pts.end());
        co.assign(pts.size(), std::vector<bool>(pts.size(), false));
        for (std::size_t i = 0; i < pts.size(); ++i)
            for (std::size_t j = i + 1; j < pts.size(); ++j)
                co[i][j] = co[j][i] = pair_covered(treatments, pts[i], pts[j]);
    }

    void run() {
        std::vector<std::size_t> path;
        for (std::size_t s = 0; s < pts.size(); ++s) {
            path.assign(1, s);
            extend(path);
        }
    }

    void extend(std::vector<std::size_t>& path) {
        std::size_t s = path.front();
        std::size_t last = path.back();
        for (std::size_t x = s + 1; x < pts.size(); ++x) {
            if (std::find(path.begin(), path.end(), x) != path.end()) continue;
            if (pts[x].factor == pts[last].factor) continue;
            if (!co[last][x]) continue;
            bool mid_clear = true;
            for (std::size_t j = 1; j + 1 < path.size(); ++j)
                if (co[path[j]][x]) {
                    mid_clear = false;
                    break;
                }
            if (!mid_clear) continue;
            if (path.size() >= 2 && co[s][x]) {
                // x can only close the chain; interior use would leave the
                // covered pair (start, x) non-adjacent.
                if (path.size() + 1 < 3) continue;
                if (path.size() + 1 > max_len) continue;
                if (!(pts[path[1]] < pts[x])) continue;
                if (path.size() == 2 && triple_covered(treatments, pts[s], pts[path[1]], pts[x]))
                    continue;
                Chain chain;
                for (std::size_t idx : path) chain.points.push_back(pts[idx]);
                chain.points.push_back(pts[x]);
                result.chains.push_back(std::move(chain));
            } else {
                if (path.size() + 2 <= max_len) {
                    path.push_back(x);
                    extend(path);
                    path.pop_back();
                } else {
                    result.truncated = true;
                }
            }
        }
    }
};

}  // namespace

EnumerationResult enumerate_irreducible_chains(const SelectiveSystem& sys, std::size_t max_len) {
    if (max_len < 3) throw std::invalid_argument("enumerate_irreducible_chains: max_len must be >= 3");
    if (completely_crossed(sys)) {
        // In a completely crossed design every triad of distinct-factor points
        // lies inside a treatment and same-factor pairs never do, so the
        // irreducible chains are exactly the tetrads x^a y^b u^a v^b.
        EnumerationResult result;
        if (max_len < 4) {
            for (std::size_t i = 0; i < sys.factors.size(); ++i)
                for (std::size_t j = i + 1; j < sys.factors.size(); ++j)
                    if (sys.factors[i].levels.size() >= 2 && sys.factors[j].levels.size() >= 2)
                        result.truncated = true;
            return result;
        }
        for (std::size_t i = 0; i < sys.factors.size(); ++i)
            for (std::size_t j = 0; j < sys.factors.size(); ++j) {
                if (i == j) continue;
                const Factor& fa = sys.factors[i];
                const Factor& fb = sys.factors[j];
                if (fa.name > fb.name) continue;
                std::vector<std::string> la = fa.levels, lb = fb.levels;
                std::sort(la.begin(), la.end());
                std::sort(lb.begin(), lb.end());
                for (std::size_t xi = 0; xi < la.size(); ++xi)
                    for (std::size_t ui = xi + 1; ui < la.size(); ++ui)
                        for (std::size_t yi = 0; yi < lb.size(); ++yi)
                            for (std::size_t vi = yi + 1; vi < lb.size(); ++vi)
                                result.chains.push_back(Chain{{{fa.name, la[xi]},
                                                               {fb.name, lb[yi]},
                                                               {fa.name, la[ui]},
                                                               {fb.name, lb[vi]}}});
            }
        std::sort(result.chains.begin(), result.chains.end(),
                  [](const Chain& a, const Chain& b) { return a.points < b.points; });
        return result;
    }
    Enumerator e(sys, max_len);
    e.run();
    std::sort(e.result.chains.begin(), e.result.chains.end(),
              [](const Chain& a, const Chain& b) { return a.points < b.points; });
    return std::move(e.result);
}

metrics::PairDistribution pair_marginal(const SelectiveSystem& sys, const Treatment& t,
                                        const FactorPoint& x, const FactorPoint& y) {
    if (sys.factors.size() != sys.variables.size())
        throw std::invalid_argument(
            "pair_marginal: system is not in bijective form (apply canonical rearrangement)");
    int ia = find_factor(sys, x.factor);
    int ib = find_factor(sys, y.factor);
    if (ia < 0 || ib < 0) throw std::invalid_argument("pair_marginal: unknown factor");
    const Variable& va = sys.variables[static_cast<std::size_t>(ia)];
    const Variable& vb = sys.variables[static_cast<std::size_t>(ib)];

    auto dist = sys.distributions.find(t);
    if (dist == sys.distributions.end())
        throw std::invalid_argument("pair_marginal: treatment has no distribution");

    JointPmf marg = ia < ib ? marginal(dist->second, {va.name, vb.name})
                            : marginal(dist->second, {vb.name, va.name});

    metrics::PairDistribution pair;
    pair.outcomes_a = va.outcomes;
    pair.outcomes_b = vb.outcomes;
    pair.numeric_a = va.numeric_values;
    pair.numeric_b = vb.numeric_values;
    for (const auto& [key, p] : marg.table) {
        if (ia < ib)
            pair.table[{key[0], key[1]}] += p.value;
        else
            pair.table[{key[1], key[0]}] += p.value;
    }
    return pair;
}

double pairwise_value(const SelectiveSystem& sys, const metrics::MetricSpec& metric,
                      const FactorPoint& x, const FactorPoint& y, double tol) {
    if (x.factor == y.factor)
        throw std::invalid_argument("pairwise_value: points " + point_label(x) + ", " +
                                    point_label(y) + " belong to the same factor");
    metrics::PointContext ctx{point_label(x), point_label(y)};
    std::vector<double> values;
    for (const auto& t : sys.treatments)
        if (point_in_treatment(t, x) && point_in_treatment(t, y))
            values.push_back(metrics::evaluate(metric, pair_marginal(sys, t, x, y), ctx));
    if (values.empty())
        throw std::invalid_argument("pairwise_value: pair {" + point_label(x) + "," +
                                    point_label(y) + "} is contained in no treatment");
    auto [lo, hi] = std::minmax_element(values.begin(), values.end());
    if (*hi - *lo > tol) {
        std::ostringstream os;
        os << "marginal selectivity violated for pair {" << point_label(x) << ","
           << point_label(y) << "}: metric values range " << *lo << " .. " << *hi;
        throw std::runtime_error(os.str());
    }
    double mean = 0.0;
    for (double v : values) mean += v;
    return mean / static_cast<double>(values.size());
}

std::vector<ChainViolation> distance_test(const SelectiveSystem& sys,
                                          const metrics::MetricSpec& metric, std::size_t max_len,
                                          double slack) {
    require_valid(sys);
    metrics::validate_spec(metric);
    EnumerationResult enumerated = enumerate_irreducible_chains(sys, max_len);

    std::map<std::pair<FactorPoint, FactorPoint>, double> cache;
    auto value = [&](const FactorPoint& a, const FactorPoint& b) {
        auto key = std::make_pair(a, b);
        auto it = cache.find(key);
        if (it != cache.end()) return it->second;
        double v = pairwise_value(sys, metric, a, b);
        cache.emplace(key, v);
        return v;
    };

    std::vector<ChainViolation> violations;
    for (const Chain& chain : enumerated.chains) {
        std::size_t l = chain.points.size();
        for (std::size_t r = 0; r < l; ++r)
            for (int dir : {1, -1}) {
                std::vector<FactorPoint> seq(l);
                for (std::size_t i = 0; i < l; ++i) {
                    long long raw = static_cast<long long>(r) + dir * static_cast<long long>(i);
                    long long ll = static_cast<long long>(l);
                    seq[i] = chain.points[static_cast<std::size_t>(((raw % ll) + ll) % ll)];
                }
                double rhs = 0.0;
                for (std::size_t i = 0; i + 1 < l; ++i) rhs += value(seq[i], seq[i + 1]);
                double lhs = value(seq[0], seq[l - 1]);
                if (lhs > rhs + slack)
                    violations.push_back(ChainViolation{Chain{seq}, lhs, rhs, metric});
            }
    }
    return violations;
}

}  // namespace selinf::chains
