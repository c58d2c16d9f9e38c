#include "selinf/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <set>
#include <sstream>
#include <stdexcept>

namespace selinf::metrics {

double PairDistribution::prob(const std::string& a, const std::string& b) const {
    auto it = table.find({a, b});
    return it == table.end() ? 0.0 : it->second;
}

PairDistribution PairDistribution::transpose() const {
    PairDistribution t;
    t.outcomes_a = outcomes_b;
    t.outcomes_b = outcomes_a;
    t.numeric_a = numeric_b;
    t.numeric_b = numeric_a;
    for (const auto& [key, p] : table) t.table[{key.second, key.first}] = p;
    return t;
}

namespace {

int outcome_index(const std::vector<std::string>& outcomes, const std::string& label) {
    auto it = std::find(outcomes.begin(), outcomes.end(), label);
    return it == outcomes.end() ? -1 : static_cast<int>(it - outcomes.begin());
}

double numeric_of(const std::optional<std::vector<double>>& numeric,
                  const std::vector<std::string>& outcomes, const std::string& label) {
    int i = outcome_index(outcomes, label);
    return (*numeric)[static_cast<std::size_t>(i)];
}

void require_numeric(const PairDistribution& pair, const char* op) {
    if (!pair.numeric_a || !pair.numeric_b)
        throw std::invalid_argument(std::string(op) + ": numeric embeddings required");
}

}  // namespace

void validate_pair(const PairDistribution& pair, double eps) {
    if (pair.outcomes_a.empty() || pair.outcomes_b.empty())
        throw std::invalid_argument("pair distribution: empty outcome list");
    if (pair.numeric_a && pair.numeric_a->size() != pair.outcomes_a.size())
        throw std::invalid_argument("pair distribution: numeric_a length mismatch");
    if (pair.numeric_b && pair.numeric_b->size() != pair.outcomes_b.size())
        throw std::invalid_argument("pair distribution: numeric_b length mismatch");
    double total = 0.0;
    for (const auto& [key, p] : pair.table) {
        if (outcome_index(pair.outcomes_a, key.first) < 0 ||
            outcome_index(pair.outcomes_b, key.second) < 0)
            throw std::invalid_argument("pair distribution: unknown outcome (" + key.first + "," +
                                        key.second + ")");
        if (p < -eps || p > 1.0 + eps)
            throw std::invalid_argument("pair distribution: probability out of range");
        total += p;
    }
    if (std::abs(total - 1.0) > eps)
        throw std::invalid_argument("pair distribution: probabilities sum to " +
                                    std::to_string(total));
}

double minkowski(const PairDistribution& pair, double p) {
    require_numeric(pair, "minkowski");
    if (!(p >= 1.0)) throw std::invalid_argument("minkowski: p must be >= 1");
    if (std::isinf(p)) {
        double worst = 0.0;
        for (const auto& [key, pr] : pair.table) {
            if (pr <= 0.0) continue;
            double a = numeric_of(pair.numeric_a, pair.outcomes_a, key.first);
            double b = numeric_of(pair.numeric_b, pair.outcomes_b, key.second);
            worst = std::max(worst, std::abs(a - b));
        }
        return worst;
    }
    double acc = 0.0;
    for (const auto& [key, pr] : pair.table) {
        if (pr <= 0.0) continue;
        double a = numeric_of(pair.numeric_a, pair.outcomes_a, key.first);
        double b = numeric_of(pair.numeric_b, pair.outcomes_b, key.second);
        acc += std::pow(std::abs(a - b), p) * pr;
    }
    return std::pow(acc, 1.0 / p);
}

double classification(const PairDistribution& pair, const std::vector<std::string>& e_plus_a,
                      const std::vector<std::string>& e_plus_b) {
    for (const auto& o : e_plus_a)
        if (outcome_index(pair.outcomes_a, o) < 0)
            throw std::invalid_argument("classification: unknown outcome \"" + o +
                                        "\" in designator");
    for (const auto& o : e_plus_b)
        if (outcome_index(pair.outcomes_b, o) < 0)
            throw std::invalid_argument("classification: unknown outcome \"" + o +
                                        "\" in designator");
    std::set<std::string> in_a(e_plus_a.begin(), e_plus_a.end());
    std::set<std::string> in_b(e_plus_b.begin(), e_plus_b.end());
    double acc = 0.0;
    for (const auto& [key, pr] : pair.table)
        if (!in_a.count(key.first) && in_b.count(key.second)) acc += pr;
    return acc;
}

double separation(const PairDistribution& pair, const std::vector<std::pair<double, double>>& v_pmf) {
    require_numeric(pair, "separation");
    double acc = 0.0;
    for (const auto& [v, pv] : v_pmf) {
        if (pv <= 0.0) continue;
        double hit = 0.0;
        for (const auto& [key, pr] : pair.table) {
            double a = numeric_of(pair.numeric_a, pair.outcomes_a, key.first);
            double b = numeric_of(pair.numeric_b, pair.outcomes_b, key.second);
            if (a <= v && v < b) hit += pr;
        }
        acc += pv * hit;
    }
    return acc;
}

double cond_entropy(const PairDistribution& pair) {
    std::map<std::string, double> p_b;
    for (const auto& [key, pr] : pair.table) p_b[key.second] += pr;
    double h = 0.0;
    for (const auto& [key, pr] : pair.table) {
        if (pr <= 0.0) continue;
        h -= pr * std::log2(pr / p_b[key.second]);
    }
    return std::max(h, 0.0);
}

double norm_cond_entropy(const PairDistribution& pair) {
    double joint = 0.0;
    for (const auto& [key, pr] : pair.table) {
        if (pr <= 0.0) continue;
        joint -= pr * std::log2(pr);
    }
    if (joint <= 0.0) return 0.0;
    return 2.0 * cond_entropy(pair) / joint;
}

MetricSpec MetricSpec::minkowski(double p) {
    MetricSpec s;
    s.kind = Kind::Minkowski;
    s.p = p;
    return s;
}

MetricSpec MetricSpec::classification(std::vector<std::string> e_plus,
                                      std::map<std::string, std::vector<std::string>> by_point) {
    MetricSpec s;
    s.kind = Kind::Classification;
    s.e_plus = std::move(e_plus);
    s.e_plus_by_point = std::move(by_point);
    return s;
}

MetricSpec MetricSpec::separation(std::vector<std::pair<double, double>> v_pmf) {
    MetricSpec s;
    s.kind = Kind::Separation;
    s.v_pmf = std::move(v_pmf);
    return s;
}

MetricSpec MetricSpec::cond_entropy() {
    MetricSpec s;
    s.kind = Kind::CondEntropy;
    return s;
}

MetricSpec MetricSpec::norm_cond_entropy() {
    MetricSpec s;
    s.kind = Kind::NormCondEntropy;
    return s;
}

MetricSpec MetricSpec::power(double q, MetricSpec inner) {
    MetricSpec s;
    s.kind = Kind::Power;
    s.q = q;
    s.inner.push_back(std::move(inner));
    return s;
}

MetricSpec MetricSpec::bounded(MetricSpec inner) {
    MetricSpec s;
    s.kind = Kind::Bounded;
    s.inner.push_back(std::move(inner));
    return s;
}

MetricSpec MetricSpec::sum(MetricSpec a, MetricSpec b) {
    MetricSpec s;
    s.kind = Kind::Sum;
    s.inner.push_back(std::move(a));
    s.inner.push_back(std::move(b));
    return s;
}

MetricSpec MetricSpec::max(MetricSpec a, MetricSpec b) {
    MetricSpec s;
    s.kind = Kind::Max;
    s.inner.push_back(std::move(a));
    s.inner.push_back(std::move(b));
    return s;
}

MetricSpec MetricSpec::mixture(std::vector<double> weights, std::vector<MetricSpec> inners) {
    MetricSpec s;
    s.kind = Kind::Mixture;
    s.weights = std::move(weights);
    s.inner = std::move(inners);
    return s;
}

MetricSpec MetricSpec::flip(MetricSpec inner) {
    MetricSpec s;
    s.kind = Kind::Flip;
    s.inner.push_back(std::move(inner));
    return s;
}

std::string MetricSpec::describe() const {
    std::ostringstream os;
    switch (kind) {
        case Kind::Minkowski:
            if (std::isinf(p))
                os << "minkowski(inf)";
            else
                os << "minkowski(" << p << ")";
            break;
        case Kind::Classification: {
            os << "classification({";
            for (std::size_t i = 0; i < e_plus.size(); ++i) os << (i ? "," : "") << e_plus[i];
            os << "})";
            break;
        }
        case Kind::Separation: os << "separation"; break;
        case Kind::CondEntropy: os << "cond_entropy"; break;
        case Kind::NormCondEntropy: os << "norm_cond_entropy"; break;
        case Kind::Power: os << "power(" << q << "," << inner[0].describe() << ")"; break;
        case Kind::Bounded: os << "bounded(" << inner[0].describe() << ")"; break;
        case Kind::Sum: os << "sum(" << inner[0].describe() << "," << inner[1].describe() << ")"; break;
        case Kind::Max: os << "max(" << inner[0].describe() << "," << inner[1].describe() << ")"; break;
        case Kind::Mixture: {
            os << "mixture(";
            for (std::size_t i = 0; i < inner.size(); ++i)
                os << (i ? "," : "") << weights[i] << "*" << inner[i].describe();
            os << ")";
            break;
        }
        case Kind::Flip: os << "flip(" << inner[0].describe() << ")"; break;
    }
    return os.str();
}

void validate_spec(const MetricSpec& spec) {
    auto expect_inner = [&](std::size_t n) {
        if (spec.inner.size() != n)
            throw std::invalid_argument("metric spec: combinator arity mismatch");
        for (const auto& child : spec.inner) validate_spec(child);
    };
    switch (spec.kind) {
        case Kind::Minkowski:
            if (!(spec.p >= 1.0)) throw std::invalid_argument("metric spec: minkowski p must be >= 1");
            break;
        case Kind::Classification:
        case Kind::CondEntropy:
        case Kind::NormCondEntropy:
            break;
        case Kind::Separation:
            for (const auto& [v, pv] : spec.v_pmf)
                if (!(pv >= 0.0) || !std::isfinite(v) || !std::isfinite(pv))
                    throw std::invalid_argument("metric spec: bad separation pmf");
            break;
        case Kind::Power:
            if (!(spec.q > 0.0 && spec.q <= 1.0))
                throw std::invalid_argument("metric spec: power q must be in (0,1]");
            expect_inner(1);
            break;
        case Kind::Bounded:
        case Kind::Flip:
            expect_inner(1);
            break;
        case Kind::Sum:
        case Kind::Max:
            expect_inner(2);
            break;
        case Kind::Mixture:
            if (spec.inner.empty() || spec.weights.size() != spec.inner.size())
                throw std::invalid_argument("metric spec: mixture weights/inners mismatch");
            for (double w : spec.weights)
                if (!(w >= 0.0) || !std::isfinite(w))
                    throw std::invalid_argument("metric spec: mixture weights must be nonnegative");
            for (const auto& child : spec.inner) validate_spec(child);
            break;
    }
}

namespace {

const std::vector<std::string>& resolve_designator(const MetricSpec& spec, const std::string& label) {
    if (!label.empty()) {
        auto it = spec.e_plus_by_point.find(label);
        if (it != spec.e_plus_by_point.end()) return it->second;
    }
    return spec.e_plus;
}

}  // namespace

double evaluate(const MetricSpec& spec, const PairDistribution& pair, const PointContext& ctx) {
    switch (spec.kind) {
        case Kind::Minkowski: return minkowski(pair, spec.p);
        case Kind::Classification:
            return classification(pair, resolve_designator(spec, ctx.label_a),
                                  resolve_designator(spec, ctx.label_b));
        case Kind::Separation: return separation(pair, spec.v_pmf);
        case Kind::CondEntropy: return cond_entropy(pair);
        case Kind::NormCondEntropy: return norm_cond_entropy(pair);
        case Kind::Power: return std::pow(evaluate(spec.inner[0], pair, ctx), spec.q);
        case Kind::Bounded: {
            double d = evaluate(spec.inner[0], pair, ctx);
            return d / (1.0 + d);
        }
        case Kind::Sum:
            return evaluate(spec.inner[0], pair, ctx) + evaluate(spec.inner[1], pair, ctx);
        case Kind::Max:
            return std::max(evaluate(spec.inner[0], pair, ctx), evaluate(spec.inner[1], pair, ctx));
        case Kind::Mixture: {
            double acc = 0.0;
            for (std::size_t i = 0; i < spec.inner.size(); ++i)
                acc += spec.weights[i] * evaluate(spec.inner[i], pair, ctx);
            return acc;
        }
        case Kind::Flip:
            return evaluate(spec.inner[0], pair.transpose(), {ctx.label_b, ctx.label_a});
    }
    throw std::logic_error("metric spec: unknown kind");
}

}  // namespace selinf::metrics
